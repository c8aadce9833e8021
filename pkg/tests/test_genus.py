from fractions import Fraction

import pytest

from twistsig.charring import (
    FactorShape, PClass, adams_operation, exterior_powers, symmetric_powers, tangent_char,
)
from twistsig.errors import TwistSigError
from twistsig.genus import (
    THETA1, THETA2, BundleStream, dirac_index, genus_pairing, liu_wang_stream, lw10_series,
    parse_twist, r1_series, r2_series, theta_stream, twisted_signature, witten_genus,
)
from twistsig.manifolds import catalog_manifold, product_manifold, string_product
from twistsig.modforms import (
    eisenstein_series, fit_weight12_gamma_lower0_2,
    fit_weight12_gamma_upper0_2, fit_weight12_sl2z,
)

SHAPE = FactorShape((8, 8, 8))
T = tangent_char(SHAPE)
L2T = exterior_powers(T, 2)[2]
S2T = symmetric_powers(T, 2)[2]
ORDER = Fraction(5, 2)
H = Fraction(1, 2)

M3 = product_manifold([catalog_manifold("M08")] * 3)
X = product_manifold([catalog_manifold(n) for n in ("B8", "HP2", "HP2")])


def ch(b):
    return b.ch if hasattr(b, "ch") else PClass.constant(SHAPE, b)


# -- Adams-exponential oracle ----------------------------------------------------------
#   log S_t(V) = sum_k psi^k(V) t^k / k,  log Lambda_t(V) = sum_k (-1)^(k-1) psi^k(V) t^k / k


def psi_reduced(k):
    return adams_operation(k, T).ch - PClass.constant(SHAPE, 24)


def log_stream(kind, sign, shift, order):
    """log of (x)_{n>=1} Op_{sign q^(n + shift)}(T - 24), Op in {S, Lambda}."""
    log = {}
    n = 1
    while n + shift < order:
        k = 1
        while k * (n + shift) < order:
            coeff = Fraction(1, k) * sign ** k
            if kind == "lambda":
                coeff *= (-1) ** (k - 1)
            e = k * (n + shift)
            log[e] = log.get(e, PClass.zero(SHAPE)) + psi_reduced(k) * coeff
            k += 1
        n += 1
    return log


def exp_stream(log, order):
    # E' = L' E on the half-integer lattice: n E_n = sum_j j L_j E_{n-j}
    steps = int(order * 2)
    L = [log.get(Fraction(j, 2), PClass.zero(SHAPE)) for j in range(steps)]
    E = [PClass.constant(SHAPE, 1)]
    for n in range(1, steps):
        acc = PClass.zero(SHAPE)
        for j in range(1, n + 1):
            acc = acc + L[j] * E[n - j] * j
        E.append(acc / n)
    return BundleStream(SHAPE, {Fraction(j, 2): E[j] for j in range(steps)}, order)


def merged(*logs):
    out = {}
    for log in logs:
        for e, c in log.items():
            out[e] = out.get(e, PClass.zero(SHAPE)) + c
    return out


THETA_LOG = log_stream("sym", 1, 0, ORDER)
ORACLES = {
    (THETA1, 0, 1): merged(THETA_LOG, log_stream("lambda", 1, -H, ORDER), log_stream("lambda", -1, -H, ORDER)),
    (THETA2, 0, 1): merged(THETA_LOG, log_stream("lambda", 1, 0, ORDER), log_stream("lambda", 1, -H, ORDER)),
    (THETA1, 1, 0): merged(THETA_LOG, log_stream("lambda", 1, 0, ORDER)),
    (THETA2, 1, 0): merged(THETA_LOG, log_stream("lambda", -1, -H, ORDER)),
}


def test_theta_stream_matches_adams_exponential():
    assert theta_stream(SHAPE, ORDER) == exp_stream(THETA_LOG, ORDER)


@pytest.mark.parametrize("key", sorted(ORACLES))
def test_level2_streams_match_adams_exponential(key):
    assert liu_wang_stream(*key, SHAPE, ORDER) == exp_stream(ORACLES[key], ORDER)


# -- the hand expansions --------------------------------------------------------------------


def test_theta_hand_expansion():
    s = theta_stream(SHAPE, 3)
    assert s.ch(0) == ch(1)
    assert s.ch(1) == ch(T - 24)
    assert s.ch(2) == ch(S2T - T * 23 + 252)
    assert s.ch(H).is_zero() and s.ch(Fraction(3, 2)).is_zero()


def test_theta2_01_hand_expansion():
    s = liu_wang_stream(THETA2, 0, 1, SHAPE, Fraction(3, 2))
    assert [s.ch(e) for e in (0, H, 1)] == [ch(1), ch(T - 24), ch(L2T - T * 22 + 252)]


def test_theta1_01_hand_expansion():
    s = liu_wang_stream(THETA1, 0, 1, SHAPE, Fraction(3, 2))
    assert s.ch(0) == ch(1) and s.ch(H).is_zero()
    assert s.coefficient(1) == L2T - S2T + T


def test_theta2_10_hand_expansion():
    s = liu_wang_stream(THETA2, 1, 0, SHAPE, Fraction(3, 2))
    assert [s.ch(e) for e in (0, H, 1)] == [ch(1), ch(24 - T), ch(L2T - T * 23 + 276)]


def test_unsupported_parameters():
    with pytest.raises(TwistSigError):
        liu_wang_stream(THETA1, 1, 1, SHAPE, 2)
    with pytest.raises(ValueError):
        liu_wang_stream("Theta3", 0, 1, SHAPE, 2)


# -- genera -------------------------------------------------------------------------------------


def test_witten_genus_of_m08_and_cube():
    m = catalog_manifold("M08")
    assert witten_genus(m, 5) == -eisenstein_series(2, 5).expansion
    w = witten_genus(M3, 4)
    assert w == -(eisenstein_series(2, 4).expansion ** 3)
    fit = fit_weight12_sl2z(w)
    assert fit.coefficients == (-1, 0) and fit.in_span and fit.residual.is_zero()


def test_witten_genus_of_non_string_product_leaves_span():
    w = witten_genus(X, 4)
    assert w.coefficient(0) == 0 and w.coefficient(1) == 0
    fit = fit_weight12_sl2z(w)
    assert fit.coefficients == (0, 0) and not fit.in_span and fit.first_residual_exponent == 2


def test_r2_fit_and_closed_forms():
    fit = fit_weight12_gamma_upper0_2(r2_series(M3, 3))
    assert fit.in_span
    h = fit.coefficients
    assert h[0] == twisted_signature(M3) == 224 ** 3
    assert h[1] == twisted_signature(M3, "T-168")
    assert h[2] == twisted_signature(M3, "L2T-126T+8940")


def test_r1_is_modular_over_gamma_0_2():
    # R_1 is the transport of R_2, hence in the Gamma_0(2) span with coefficients h / 2^12
    h = fit_weight12_gamma_upper0_2(r2_series(M3, 4)).coefficients
    fit = fit_weight12_gamma_lower0_2(r1_series(M3, 4))
    assert fit.in_span and list(fit.coefficients) == [x / 4096 for x in h]


@pytest.mark.parametrize("m", [M3, X, string_product((1, 2, 3))], ids=["M3", "X", "123"])
def test_one_zero_pair_is_modular_without_string_hypothesis(m):
    # for V = TM and (a, b) = (1, 0) the anomaly p1(TM) - p1(V) vanishes identically
    assert fit_weight12_gamma_upper0_2(lw10_series(THETA2, m, 3)).in_span
    assert fit_weight12_gamma_lower0_2(lw10_series(THETA1, m, 4)).in_span


def test_pairing_respects_lattice_and_order():
    s = genus_pairing("ahat", theta_stream(SHAPE, 3), M3, 2)
    assert s.order == 2 and s.lattice == 24
    with pytest.raises(TwistSigError):
        genus_pairing("ahat", theta_stream(SHAPE, 2), M3, 3)
    assert witten_genus(M3, 3) == witten_genus(M3, 4).truncate(3)


def test_twisted_numbers():
    hp2 = catalog_manifold("HP2")
    assert twisted_signature(hp2, "L2T") == 92
    assert dirac_index(hp2, "T") == -1
    assert dirac_index(M3, "T") == -744
    assert twisted_signature(M3, "L2T") == 3762683904
    assert twisted_signature(X, "L2T") == 14336
    assert twisted_signature(M3, "TxT") == twisted_signature(M3, "L2T+S2T")
    assert parse_twist("2T - 3 + L2T", SHAPE) == T * 2 - 3 + L2T
    with pytest.raises(TwistSigError):
        parse_twist("T^3", SHAPE)


def test_symmetric_square_and_sig_t_identities():
    assert dirac_index(M3, "S2T") == dirac_index(M3, "-T+196884")
    assert dirac_index(X, "S2T") - dirac_index(X, "-T+196884") == 1
    for m in (M3, X):
        assert twisted_signature(m, "T") == 2 ** 11 * dirac_index(m, "L2T-47T+900")
    assert twisted_signature(X, "T") == 2048
