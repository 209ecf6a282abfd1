"""Integer symmetric-decreasing rearrangement and dispersion functionals.

The plus rearrangement ``X+`` of an integer-supported distribution puts its
probabilities, largest first, on ``0, 1, -1, 2, -2, ...``.  For every
non-decreasing cost ``f``, ``D_f(X+) <= D_f(X)`` where
``D_f(X) = min_a E f(|X - a|)``; variance and mean absolute deviation about
the median are the cases ``f(x) = x**2`` and ``f(x) = x``.
"""

from .dispersion import (
    IDENTITY,
    SQUARE,
    DispersionFunction,
    DispersionResult,
    MainInequalityReport,
    ProofChainTrace,
    check_main_inequality,
    dispersion,
    expected_f_deviation,
    nearest_integer_distance,
    proof_chain,
    w_vector,
)
from .dist import (
    IntDist,
    MedianInterval,
    equivalent_up_to_translation_reflection,
    lattice_span,
    mad_median,
    make_dist,
    mean,
    median_set,
    reflect,
    translate,
    variance,
)
from .oracle import OracleReport, enumerate_assignments, verify_theorem
from .rearrange import is_plus_form, plus_rearrangement
from .sums import (
    ConcentrationReport,
    LltScanRow,
    SignSearchReport,
    compare_concentration,
    concentration,
    convolve,
    llt_ratio,
    llt_scan,
    self_convolve,
)

__version__ = "0.1.0"
