"""Command-line interface: ``twistsig VERB [options]``.

Verbs::

    expand   --form NAME [--order Q] [--json]
    fit      --basis {sl2z12,g02w12} (--input FILE | --form NAME) [--order Q] [--json]
    manifold {show,save} REF [--output FILE]
    witten   --manifold REF [--order Q] [--json]
    sig      --manifold REF [--twist EXPR] [--json]
    index    --manifold REF [--twist EXPR] [--json]
    verify   [--suite {all,thm01,lemmas,examples}] [--manifold REF] [--seed N] [--order Q] [--json]

``REF`` is ``catalog:NAME``, ``product:A,B,C`` (catalog names) or ``file:PATH``.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import TwistSigError
from .genus import dirac_index, twisted_signature, witten_genus
from .manifolds import (
    catalog_manifold,
    load_manifold,
    manifold_to_json,
    product_manifold,
    save_manifold,
)
from .modforms import FORM_NAMES, fit_weight12_gamma_upper0_2, fit_weight12_sl2z, named_form
from .qseries import QSeries, as_rational, format_rational
from .verify import SUITES, render_report, run_suite

DEFAULT_CLI_ORDER = "6"

_FITS = {"sl2z12": fit_weight12_sl2z, "g02w12": fit_weight12_gamma_upper0_2}


def resolve_manifold(ref: str):
    """Turn a ``catalog:``, ``product:`` or ``file:`` reference into a ManifoldSpec."""
    kind, _, arg = ref.partition(":")
    if not arg:
        raise TwistSigError(f"manifold reference {ref!r} must look like catalog:NAME, product:A,B or file:PATH")
    if kind == "catalog":
        return catalog_manifold(arg)
    if kind == "product":
        return product_manifold([catalog_manifold(n.strip()) for n in arg.split(",")])
    if kind == "file":
        return load_manifold(arg)
    raise TwistSigError(f"unknown manifold reference kind {kind!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twistsig", description="Exact q-series, twisted signatures and congruence checks.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    e = sub.add_parser("expand", help="q-expansion of a named form")
    e.add_argument("--form", required=True, choices=FORM_NAMES)
    e.add_argument("--order", default=DEFAULT_CLI_ORDER)
    e.add_argument("--json", action="store_true")

    f = sub.add_parser("fit", help="fit a series in a weight-12 basis")
    f.add_argument("--basis", required=True, choices=sorted(_FITS))
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="QSeries JSON file")
    src.add_argument("--form", choices=FORM_NAMES)
    f.add_argument("--order", default=DEFAULT_CLI_ORDER)
    f.add_argument("--json", action="store_true")

    m = sub.add_parser("manifold", help="show or save a manifold")
    m.add_argument("action", choices=("show", "save"))
    m.add_argument("ref")
    m.add_argument("--output", help="file to write (save); stdout if omitted")

    w = sub.add_parser("witten", help="Witten genus q-series")
    w.add_argument("--manifold", required=True)
    w.add_argument("--order", default=DEFAULT_CLI_ORDER)
    w.add_argument("--json", action="store_true")

    for verb, text in (("sig", "twisted signature"), ("index", "twisted Dirac index")):
        s = sub.add_parser(verb, help=text)
        s.add_argument("--manifold", required=True)
        s.add_argument("--twist", default="1")
        s.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all", choices=SUITES)
    v.add_argument("--manifold", action="append", help="repeatable; replaces the catalog defaults")
    v.add_argument("--seed", type=int, help="add a seeded sample of string products")
    v.add_argument("--order", default="3")
    v.add_argument("--json", action="store_true")
    return p


def _expand(args) -> tuple:
    s = named_form(args.form, as_rational(args.order))
    return 0, json.dumps(s.to_json()) if args.json else str(s)


def _fit(args) -> tuple:
    if args.input:
        with open(args.input) as fh:
            s = QSeries.from_json(fh.read())
    else:
        s = named_form(args.form, as_rational(args.order))
    fit = _FITS[args.basis](s)
    if args.json:
        return 0, json.dumps(fit.to_json())
    coeffs = ", ".join(format_rational(c) for c in fit.coefficients)
    line = f"{fit.basis_tag}: ({coeffs}) in_span={str(fit.in_span).lower()} verified_order={format_rational(fit.verified_order)}"
    if not fit.in_span:
        line += f" first_residual=q^{format_rational(fit.first_residual_exponent)}"
    return 0, line


def _manifold(args) -> tuple:
    spec = resolve_manifold(args.ref)
    if args.action == "save" and args.output:
        save_manifold(spec, args.output)
        return 0, f"saved {spec.name} to {args.output}"
    return 0, json.dumps(manifold_to_json(spec), indent=2)


def _witten(args) -> tuple:
    s = witten_genus(resolve_manifold(args.manifold), as_rational(args.order))
    return 0, json.dumps(s.to_json()) if args.json else str(s)


def _number(fn):
    def run(args) -> tuple:
        value = fn(resolve_manifold(args.manifold), args.twist)
        text = format_rational(value)
        return 0, json.dumps({"twist": args.twist, "value": text}) if args.json else text
    return run


def _verify(args) -> tuple:
    specs = [resolve_manifold(r) for r in args.manifold] if args.manifold else None
    reports = run_suite(args.suite, specs, as_rational(args.order), args.seed)
    status = 0 if all(r.ok for r in reports) else 1
    return status, render_report(reports, "json" if args.json else "text")


_DISPATCH = {
    "expand": _expand, "fit": _fit, "manifold": _manifold, "witten": _witten,
    "sig": _number(twisted_signature), "index": _number(dirac_index), "verify": _verify,
}


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> tuple:
    """Parse ``argv`` and run the verb; returns ``(exit_status, output_text)``.

    Usage errors raise ``SystemExit`` from argparse; domain errors become
    status 1 with the error message as output.
    """
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.verb](args)
    except (TwistSigError, ValueError, ZeroDivisionError, OSError) as exc:
        return 1, f"error: {exc}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, text = parse_and_dispatch(argv)
    stream = sys.stderr if text.startswith("error:") else sys.stdout
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
