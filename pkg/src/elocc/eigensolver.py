"""Lowest eigenpairs by full dense diagonalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotSymmetric, SizeTooLarge

MAX_DENSE_DIM = 1 << 16
DEGENERACY_TOL = 1e-10
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EigenPair:
    energy: float
    state: np.ndarray
    index: int
    degenerate: bool = False

    def residual(self, op):
        return float(np.linalg.norm(op.apply(self.state) - self.energy * self.state))


def _parity_diagonal(n_sites):
    idx = np.arange(1 << n_sites)
    ones = np.zeros(idx.shape, dtype=int)
    for b in range(n_sites):
        ones += (idx >> b) & 1
    return 1.0 - 2.0 * (ones % 2)


def _fix_sign(v):
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def _is_close(e1, e2, scale):
    return abs(e2 - e1) <= DEGENERACY_TOL * max(1.0, scale)


def lowest_states(op, k=1):
    """The ``k`` lowest eigenpairs of ``op`` in ascending energy.

    Within an exactly degenerate level the basis is rotated to eigenstates
    of the spin-flip parity (even first) so the output does not depend on
    LAPACK's arbitrary choice; each vector's largest component is positive.
    """
    dim = op.dim
    if dim > MAX_DENSE_DIM:
        raise SizeTooLarge(f"dimension {dim} exceeds dense budget {MAX_DENSE_DIM}")
    if not 1 <= k <= dim:
        raise ValueError(f"k must lie in 1..{dim}")
    m = op.to_dense()
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"max |M - M^T| = {asym:.3g}")

    # one extra level so a degeneracy straddling position k is seen whole
    n_eval = min(dim, k + 4)
    w, v = scipy.linalg.eigh(m, subset_by_index=[0, n_eval - 1])
    scale = float(np.max(np.abs(w))) if w.size else 1.0

    parity = _parity_diagonal(op.n_sites) if "parity" in op.conserved else None
    blocks = []
    start = 0
    while start < n_eval:
        stop = start + 1
        while stop < n_eval and _is_close(w[stop - 1], w[stop], scale):
            stop += 1
        blocks.append((start, stop))
        start = stop

    pairs = []
    for start, stop in blocks:
        if start >= k:
            break
        vecs = v[:, start:stop]
        if stop - start > 1 and parity is not None:
            mp = vecs.T @ (parity[:, None] * vecs)
            pw, pv = np.linalg.eigh(mp)
            vecs = vecs @ pv[:, ::-1]
        degenerate = stop - start > 1
        for j in range(stop - start):
            if start + j >= k:
                break
            s = _fix_sign(vecs[:, j] / np.linalg.norm(vecs[:, j]))
            s.setflags(write=False)
            pairs.append(EigenPair(float(w[start + j]), s, start + j, degenerate))
    return pairs


def full_spectrum(op):
    if op.dim > MAX_DENSE_DIM:
        raise SizeTooLarge(f"dimension {op.dim} exceeds dense budget {MAX_DENSE_DIM}")
    return scipy.linalg.eigvalsh(op.to_dense())
