"""Schmidt-spectrum algebra: majorization, Rényi entropies and catalysis.

Everything here works on :class:`SchmidtVector`, an immutable, descending,
normalized array of squared Schmidt coefficients.  Entropies are in bits.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .errors import AllTruncated, NegativeInput

DEFAULT_TRUNC_TOL = 1e-24
NORM_TOL = 1e-10
MAJORIZATION_TOL = 1e-12
FLANK_TOL = 1e-9
VON_NEUMANN_WINDOW = 1e-6

_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class SchmidtVector:
    """Descending, strictly positive probabilities summing to one.

    Use :func:`normalize_descending` to build one from raw data; the
    constructor only validates.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("SchmidtVector needs at least one coefficient")
        if np.any(c <= 0):
            raise ValueError("Schmidt coefficients must be strictly positive")
        if np.any(np.diff(c) > 0):
            raise ValueError("Schmidt coefficients must be in descending order")
        if abs(c.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"Schmidt coefficients sum to {c.sum()!r}, not 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __len__(self):
        return self.coeffs.size

    def __iter__(self):
        return iter(self.coeffs.tolist())

    def __repr__(self):
        return f"SchmidtVector({np.array2string(self.coeffs, precision=6)})"

    @property
    def rank(self):
        return self.coeffs.size

    def padded(self, length):
        """Coefficients zero-padded to ``length`` entries."""
        out = np.zeros(length)
        out[: self.coeffs.size] = self.coeffs
        return out

    def allclose(self, other, atol=NORM_TOL):
        d = max(len(self), len(other))
        return bool(np.all(np.abs(self.padded(d) - other.padded(d)) <= atol))


class Direction(enum.Enum):
    AtoB = "AtoB"
    BtoA = "BtoA"
    Equivalent = "Equivalent"
    Incomparable = "Incomparable"


@dataclass(frozen=True)
class ConversionVerdict:
    direction: Direction
    crossings: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(float(a) for a in self.crossings))
        if (self.direction is Direction.Incomparable) != bool(self.crossings):
            raise ValueError("crossings must be non-empty exactly when Incomparable")

    @property
    def smallest_crossing(self):
        return self.crossings[0] if self.crossings else None


@dataclass(frozen=True)
class AlphaGrid:
    """Log-spaced Rényi-index scan, always closed by the 0 and ∞ limits."""

    alpha_min: float = 0.01
    alpha_max: float = 50.0
    points: int = 500
    refine_tol: float = 1e-3

    def __post_init__(self):
        if not 0 < self.alpha_min < self.alpha_max:
            raise ValueError("need 0 < alpha_min < alpha_max")
        if self.points < 2:
            raise ValueError("points must be >= 2")
        if self.refine_tol <= 0:
            raise ValueError("refine_tol must be positive")

    def samples(self):
        inner = np.geomspace(self.alpha_min, self.alpha_max, self.points)
        return np.concatenate(([0.0], inner, [math.inf]))


DEFAULT_GRID = AlphaGrid()


def normalize_descending(raw, trunc_tol=DEFAULT_TRUNC_TOL):
    """Drop entries below ``trunc_tol``, renormalize and sort descending.

    >>> normalize_descending([0.1, 0.4, 0.1, 0.4]).coeffs.tolist()
    [0.4, 0.4, 0.1, 0.1]
    """
    if trunc_tol < 0:
        raise ValueError("trunc_tol must be >= 0")
    x = np.asarray(raw, dtype=float).ravel()
    if np.any(x < -trunc_tol):
        raise NegativeInput(f"negative entry {x.min()!r} below -{trunc_tol}")
    kept = x[x >= trunc_tol] if trunc_tol > 0 else x[x > 0]
    kept = kept[kept > 0]
    if kept.size == 0:
        raise AllTruncated(f"no entry survives truncation at {trunc_tol}")
    kept = np.sort(kept)[::-1] / kept.sum()
    return SchmidtVector(kept)


def _tail_sums(x):
    return np.cumsum(x[::-1])[::-1]


def locc_convertible(p, q):
    """True when ``p`` converts to ``q`` with certainty under LOCC.

    Every tail sum of ``p`` (from index l to the end) must dominate the
    corresponding tail sum of ``q``; the shorter vector is zero-padded.
    """
    d = max(len(p), len(q))
    return bool(np.all(_tail_sums(p.padded(d)) >= _tail_sums(q.padded(d)) - MAJORIZATION_TOL))


def _log_moment(lam, alpha):
    """Natural log of sum(lam**alpha), accurate near alpha = 1."""
    loglam = np.log(lam)
    if abs(alpha - 1.0) < 1.0:
        return math.log1p(float(np.sum(lam * np.expm1((alpha - 1.0) * loglam))))
    return float(logsumexp(alpha * loglam))


def renyi_entropy(p, alpha):
    """Rényi entropy of order ``alpha`` in bits.

    ``alpha = 0`` is the Hartley limit ``log2(rank)``, ``alpha = inf`` the
    min-entropy ``-log2(p_1)``; inside ``|alpha - 1| < 1e-6`` the von
    Neumann limit is returned.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    lam = p.coeffs
    if alpha == 0:
        return math.log2(lam.size)
    if math.isinf(alpha):
        return -math.log2(lam[0])
    if abs(alpha - 1.0) < VON_NEUMANN_WINDOW:
        return float(-np.sum(lam * np.log2(lam)))
    return _log_moment(lam, alpha) / ((1.0 - alpha) * _LN2)


def renyi_curve(p, alphas):
    """Vectorised :func:`renyi_entropy` over an array of orders."""
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas < 0):
        raise ValueError("alpha must be >= 0")
    lam = p.coeffs
    loglam = np.log(lam)
    out = np.empty(alphas.shape)
    a = alphas.ravel()
    res = out.reshape(-1)
    zero, inf = a == 0, np.isinf(a)
    vn = np.abs(a - 1.0) < VON_NEUMANN_WINDOW
    near = (np.abs(a - 1.0) < 1.0) & ~vn & ~zero
    far = ~(zero | inf | vn | near)
    res[zero] = math.log2(lam.size)
    res[inf] = -math.log2(lam[0])
    res[vn] = -np.sum(lam * np.log2(lam))
    if near.any():
        an = a[near]
        m = np.log1p(np.sum(lam * np.expm1(np.outer(an - 1.0, loglam)), axis=1))
        res[near] = m / ((1.0 - an) * _LN2)
    if far.any():
        af = a[far]
        m = logsumexp(np.outer(af, loglam), axis=1)
        res[far] = m / ((1.0 - af) * _LN2)
    return out


def tensor_product(p, c):
    """Schmidt spectrum of the product of two bipartite pure states."""
    prod = np.outer(p.coeffs, c.coeffs).ravel()
    prod = np.sort(prod)[::-1]
    return SchmidtVector(prod / prod.sum())


def _difference(p, q):
    return lambda a: renyi_entropy(p, a) - renyi_entropy(q, a)


def _refine(f, lo, hi, f_lo, tol):
    """Bisect a sign change of ``f`` on [lo, hi]; ``hi`` may be infinite."""
    s_lo = math.copysign(1.0, f_lo)
    if math.isinf(hi):
        # walk outwards until the far side shows the new sign
        probe = lo
        for _ in range(64):
            probe *= 2.0
            if math.copysign(1.0, f(probe)) != s_lo:
                hi = probe
                break
            lo = probe
        else:
            return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm != 0 and math.copysign(1.0, fm) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan(p, q, grid):
    alphas = grid.samples()
    diff = renyi_curve(p, alphas) - renyi_curve(q, alphas)
    return alphas, diff


def _sign_changes(alphas, diff):
    keep = np.flatnonzero(np.abs(diff) > FLANK_TOL)
    pairs = []
    for i, j in zip(keep[:-1], keep[1:]):
        if np.sign(diff[i]) != np.sign(diff[j]):
            pairs.append((i, j))
    return pairs


def find_interceptions(p, q, grid=DEFAULT_GRID):
    """α values where the Rényi curves of ``p`` and ``q`` cross, ascending.

    Samples whose difference is within 1e-9 of zero are treated as
    undetermined; a crossing is recorded between consecutive determined
    samples of opposite sign and refined by bisection to ``grid.refine_tol``.
    """
    alphas, diff = _scan(p, q, grid)
    f = _difference(p, q)
    return [
        _refine(f, alphas[i], alphas[j], diff[i], grid.refine_tol)
        for i, j in _sign_changes(alphas, diff)
    ]


def elocc_verdict(p, q, grid=DEFAULT_GRID):
    """Classify eLOCC convertibility between the states with spectra p and q."""
    if p.allclose(q):
        return ConversionVerdict(Direction.Equivalent)
    alphas, diff = _scan(p, q, grid)
    pairs = _sign_changes(alphas, diff)
    if pairs:
        f = _difference(p, q)
        crossings = [_refine(f, alphas[i], alphas[j], diff[i], grid.refine_tol) for i, j in pairs]
        return ConversionVerdict(Direction.Incomparable, crossings)
    if np.all(diff >= -FLANK_TOL):
        return ConversionVerdict(Direction.AtoB)
    return ConversionVerdict(Direction.BtoA)


def verify_catalyst(p, q, c):
    """Does catalyst ``c`` enable the LOCC conversion p -> q?"""
    return locc_convertible(tensor_product(p, c), tensor_product(q, c))


def read_schmidt_csv(path, trunc_tol=DEFAULT_TRUNC_TOL):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "lambda" not in reader.fieldnames:
            raise ValueError(f"{path}: expected a 'lambda' header column")
        values = [float(row["lambda"]) for row in reader if row["lambda"].strip()]
    return normalize_descending(values, trunc_tol)


def schmidt_csv_text(p):
    lines = ["lambda"] + [repr(float(x)) for x in p.coeffs]
    return "\n".join(lines) + "\n"


def write_schmidt_csv(p, path):
    Path(path).write_text(schmidt_csv_text(p))
