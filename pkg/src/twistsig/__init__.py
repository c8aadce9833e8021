"""twistsig: exact q-series, characteristic-number genera and twisted
signature congruences for products of 8-manifolds.

Everything is computed with :class:`fractions.Fraction`; nothing is
approximated.  The top-level namespace re-exports the public API of the
submodules ``qseries``, ``modforms``, ``charring``, ``manifolds``, ``genus``
and ``verify``.
"""
from .errors import *  # noqa: F401,F403
from .qseries import *  # noqa: F401,F403
from .modforms import *  # noqa: F401,F403
from .charring import *  # noqa: F401,F403
from .manifolds import *  # noqa: F401,F403
from .genus import *  # noqa: F401,F403
from .verify import *  # noqa: F401,F403

__version__ = "0.1.0"
