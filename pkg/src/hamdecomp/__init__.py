"""Edge-disjoint Hamilton cycle decomposition of sparse random graphs.

Pipeline: sample G(n,p0) -> split into a dense part (for the regular
factor) and a sparse reserve (fuel for rotations) -> extract an
even-regular spanning subgraph -> peel it into 2-factors -> convert each
2-factor into a Hamilton cycle by rotation-extension, with exact edge
accounting and independent verification.
"""

from .graph import BrokenTwoFactor, Graph
from .harness import DecompositionResult, run, sweep, verify_result
from .sampler import Params, SplitSample, sample_gnp, split

__all__ = [
    "BrokenTwoFactor",
    "DecompositionResult",
    "Graph",
    "Params",
    "SplitSample",
    "run",
    "sample_gnp",
    "split",
    "sweep",
    "verify_result",
]
