"""Pure-numpy implementations of the hot evaluation loops.

Kept signature-compatible with the compiled extension in ``_kernels.pyx``;
``bap.kernels`` picks whichever is available at import time.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr


def max_exceedance_probs(
    offsets: np.ndarray,
    shifts: np.ndarray,
    node_scale: float,
    nodes: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Per-sample probability that a coordinate maximum exceeds its cut.

    For each sample m returns
        1 - sum_g weights[g] * prod_i Phi(offsets[m, i] - shifts[m] - node_scale * nodes[g])
    i.e. one minus a quadrature mixture of products of normal CDFs.
    """
    offsets = np.ascontiguousarray(offsets, dtype=float)
    shifts = np.ascontiguousarray(shifts, dtype=float)
    acc = np.zeros(offsets.shape[0])
    for g in range(nodes.shape[0]):
        args = offsets - (shifts + node_scale * nodes[g])[:, None]
        acc += weights[g] * np.prod(ndtr(args), axis=1)
    return 1.0 - acc


def binned_counts(
    values: np.ndarray,
    successes: np.ndarray,
    half_width: float,
    nbins: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Totals and success counts per histogram cell.

    Cells 1..nbins tile [-half_width, half_width); cells 0 and nbins + 1
    collect underflow/overflow. Cell geometry must stay in lockstep with
    the compiled twin, hence the explicit floor arithmetic.
    """
    scale = nbins / (2.0 * half_width)
    idx = np.floor((values + half_width) * scale)
    idx = np.clip(idx, -1, nbins).astype(np.int64) + 1
    totals = np.bincount(idx, minlength=nbins + 2).astype(float)
    hits = np.bincount(idx, weights=successes.astype(float), minlength=nbins + 2)
    return totals, hits
