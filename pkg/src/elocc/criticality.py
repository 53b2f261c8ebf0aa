"""Parameter sweeps, interception tables and critical-point location."""

from __future__ import annotations

import enum
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .eigensolver import lowest_states
from .errors import BadSplit, DegenerateGround, MultipleTransitions, NoTransition
from .monotones import (
    DEFAULT_GRID,
    DEFAULT_TRUNC_TOL,
    Direction,
    elocc_verdict,
    find_interceptions,
)
from .reduction import schmidt_from_state

_DECIMALS = 12


def parameter_values(start, stop, step):
    """Inclusive grid ``start, start+step, ..., stop`` on clean decimals."""
    if step <= 0:
        raise ValueError("step must be positive")
    if start > stop:
        raise ValueError("start must not exceed stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, _DECIMALS) for i in range(count)]


@dataclass(frozen=True, eq=False)
class SweepPoint:
    value: float
    schmidt: object
    energy: float
    excited: object = None
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class SweepResult:
    model: object
    param: str
    n_sites: int
    partition: object
    points: tuple

    def __post_init__(self):
        values = [p.value for p in self.points]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep parameter values must be strictly increasing")

    @property
    def values(self):
        return [p.value for p in self.points]

    @property
    def spectra(self):
        return [p.schmidt for p in self.points]

    def spectra_csv_text(self):
        width = max(len(p.schmidt) for p in self.points)
        header = [self.param, "energy"] + [f"lambda_{k}" for k in range(1, width + 1)]
        rows = [",".join(header)]
        for p in self.points:
            lam = [repr(float(x)) for x in p.schmidt.coeffs]
            lam += [""] * (width - len(lam))
            rows.append(",".join([repr(p.value), repr(p.energy)] + lam))
        return "\n".join(rows) + "\n"

    def to_json(self):
        return {
            "model": str(self.model),
            "param": self.param,
            "n_sites": self.n_sites,
            "a_sites": list(self.partition.a_sites),
            "points": [
                {
                    "value": p.value,
                    "energy": p.energy,
                    "degenerate": p.degenerate,
                    "schmidt": p.schmidt.coeffs.tolist(),
                    "excited_schmidt": None if p.excited is None else p.excited.coeffs.tolist(),
                }
                for p in self.points
            ],
        }


def _evaluate_point(model, param, value, n, part, with_excited, trunc_tol):
    op = model.with_param(param, value).build(n)
    pairs = lowest_states(op, 2 if with_excited else 1)
    ground = pairs[0]
    excited = schmidt_from_state(pairs[1].state, part, trunc_tol) if with_excited else None
    return SweepPoint(
        value=value,
        schmidt=schmidt_from_state(ground.state, part, trunc_tol),
        energy=ground.energy,
        excited=excited,
        degenerate=ground.degenerate,
    )


def _map_ordered(fn, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep(model, param, param_range, n, part, with_excited=False, workers=1,
          trunc_tol=DEFAULT_TRUNC_TOL):
    """Ground-state Schmidt spectra along ``param`` = start..stop by step."""
    start, stop, step = param_range
    values = parameter_values(start, stop, step)

    def one(v):
        return _evaluate_point(model, param, v, n, part, with_excited, trunc_tol)

    points = _map_ordered(one, values, workers)
    return SweepResult(model, param, n, part, tuple(points))


def ceil_tenth(alpha):
    """Next multiple of 0.1 at or above ``alpha``.

    Reported table values are the first point of a 0.1-spaced α scan that
    lies past the crossing, i.e. the crossing rounded up.
    """
    return math.ceil(round(alpha * 10.0, 6)) / 10.0


@dataclass(frozen=True, eq=False)
class InterceptionTable:
    """Pairwise smallest crossing α; ``None`` marks no interception."""

    labels: tuple
    cells: tuple
    crossings: tuple = field(default=(), repr=False)

    def __post_init__(self):
        k = len(self.labels)
        if len(self.cells) != k or any(len(r) != k for r in self.cells):
            raise ValueError("table must be square and match its labels")
        for i in range(k):
            if self.cells[i][i] is not None:
                raise ValueError("diagonal cells must be 'no interception'")
            for j in range(i):
                if self.cells[i][j] != self.cells[j][i]:
                    raise ValueError("interception table must be symmetric")

    def __len__(self):
        return len(self.labels)

    def cell(self, a, b):
        return self.cells[self.index(a)][self.index(b)]

    def index(self, label):
        for i, x in enumerate(self.labels):
            if math.isclose(x, label, rel_tol=0, abs_tol=1e-9):
                return i
        raise KeyError(label)

    def crossing_mask(self):
        return np.array([[c is not None for c in row] for row in self.cells])

    def display(self, alpha, tenths=False):
        if alpha is None:
            return "N"
        if tenths:
            return f"{ceil_tenth(alpha):.1f}"
        return f"{alpha:.4f}"

    def to_csv_text(self, param="param", tenths=False):
        head = [param] + [_label(x) for x in self.labels]
        rows = [",".join(head)]
        for lab, row in zip(self.labels, self.cells):
            rows.append(",".join([_label(lab)] + [self.display(c, tenths) for c in row]))
        return "\n".join(rows) + "\n"

    def to_json(self, tenths=False):
        def enc(c):
            if c is None:
                return None
            return ceil_tenth(c) if tenths else c

        return {
            "labels": list(self.labels),
            "cells": [[enc(c) for c in row] for row in self.cells],
            "crossings": [[list(c) for c in row] for row in self.crossings] if self.crossings else None,
        }


def _label(x):
    return repr(float(x))


def interception_table(result, grid=DEFAULT_GRID, workers=1):
    spectra = result.spectra
    k = len(spectra)
    jobs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    found = _map_ordered(lambda ij: find_interceptions(spectra[ij[0]], spectra[ij[1]], grid), jobs, workers)
    cells = [[None] * k for _ in range(k)]
    every = [[() for _ in range(k)] for _ in range(k)]
    for (i, j), cross in zip(jobs, found):
        smallest = cross[0] if cross else None
        cells[i][j] = cells[j][i] = smallest
        every[i][j] = every[j][i] = tuple(cross)
    return InterceptionTable(
        tuple(result.values),
        tuple(tuple(r) for r in cells),
        tuple(tuple(r) for r in every),
    )


class Pattern(enum.Enum):
    CaseI = "CaseI"
    CaseII = "CaseII"
    Mixed = "Mixed"


@dataclass(frozen=True)
class Classification:
    pattern: Pattern
    nonconforming: dict
    crossing_fraction: dict


def split_index(labels, value):
    """Index of the first label >= value; the second group starts there."""
    for i, x in enumerate(labels):
        if x >= value - 1e-12:
            return i
    return len(labels)


def _block_fraction(mask, rows, cols, skip_diagonal):
    vals = [mask[i, j] for i in rows for j in cols if not (skip_diagonal and i == j)]
    if not vals:
        return None
    return float(np.mean(vals))


def classify_pattern(table, split, tolerance=0.10):
    """Match a two-phase table against the case (i) and case (ii) patterns.

    Groups are ``labels[:split]`` and ``labels[split:]``.  A diagonal block
    counts as all-crossing or all-N when at most ``tolerance`` of its
    off-diagonal cells disagree; the cross-phase block must contain at least
    one crossing.
    """
    k = len(table)
    if not 0 < split < k:
        raise BadSplit(f"split {split} leaves an empty group among {k} labels")
    mask = table.crossing_mask()
    first, second = range(split), range(split, k)
    f1 = _block_fraction(mask, first, first, True)
    f2 = _block_fraction(mask, second, second, True)
    off = _block_fraction(mask, first, second, False)
    fractions = {"first": f1, "second": f2, "cross": off}

    def crossing(f):
        return f is not None and f >= 1.0 - tolerance

    def no_crossing(f):
        return f is None or f <= tolerance

    def miss(f, want_crossing):
        if f is None:
            return 0.0
        return 1.0 - f if want_crossing else f

    off_has = off is not None and off > 0
    if off_has and crossing(f1) and no_crossing(f2):
        pattern, want = Pattern.CaseI, (True, False)
    elif off_has and no_crossing(f1) and crossing(f2):
        pattern, want = Pattern.CaseI, (False, True)
    elif off_has and no_crossing(f1) and no_crossing(f2):
        pattern, want = Pattern.CaseII, (False, False)
    else:
        pattern, want = Pattern.Mixed, None
    if want is None:
        nonconforming = {}
    else:
        nonconforming = {"first": miss(f1, want[0]), "second": miss(f2, want[1])}
    return Classification(pattern, nonconforming, fractions)


def critical_region(table, classification=None, split=None):
    """Parameter interval the table pins the transition to.

    Case (i): where the crossing status of neighbouring labels flips.
    Case (ii): the closest cross-phase pair that still intercepts.
    """
    mask = table.crossing_mask()
    labels = table.labels
    if classification is not None and classification.pattern is Pattern.CaseII:
        best = None
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                if mask[i, j] and (split is None or i < split <= j):
                    if best is None or j - i < best[1] - best[0]:
                        best = (i, j)
        if best is None:
            raise NoTransition("no cross-phase interception in table")
        return labels[best[0]], labels[best[1]]
    status = [bool(mask[i, i + 1]) for i in range(len(labels) - 1)]
    flips = [i for i in range(len(status) - 1) if status[i] != status[i + 1]]
    if not flips:
        raise NoTransition("neighbouring interception status never changes")
    if len(flips) > 1:
        raise MultipleTransitions(f"status changes at {[labels[i + 1] for i in flips]}")
    i = flips[0]
    return labels[i], labels[i + 2]


@dataclass(frozen=True)
class Bracket:
    lower: float
    upper: float
    step: float
    history: tuple = ()

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("bracket needs lower < upper")
        if self.upper - self.lower > 2 * self.step * (1 + 1e-9):
            raise ValueError("bracket wider than twice its step")

    @property
    def midpoint(self):
        return round(0.5 * (self.lower + self.upper), _DECIMALS)

    def to_json(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "step": self.step,
            "midpoint": self.midpoint,
            "history": [list(h) for h in self.history],
        }


def _decade_step(width):
    """Largest power of ten not exceeding width / 10."""
    raw = width / 10.0
    step = 10.0 ** math.floor(math.log10(raw) + 1e-9)
    return float(f"{step:.0e}")


def _flips(values, status):
    return [i for i in range(len(status) - 1) if status[i] != status[i + 1]]


def refine_bracket(pair_status, search, target_step):
    """Locate where ``pair_status(x, x + step)`` changes, decimating the step.

    The first scan covers ``search`` at a decimal step about a tenth of its
    width; each later scan covers the previous bracket, widened by one old
    step on each side, at a tenth of the step.  A change between the pairs
    starting at ``x_i`` and ``x_{i+1}`` yields the bracket ``[x_i, x_{i+2}]``.
    """
    lo, hi = search
    if target_step <= 0:
        raise ValueError("target_step must be positive")
    if not lo < hi:
        raise ValueError("search interval must have from < to")
    step = _decade_step(hi - lo)
    history = []
    coarse = True
    while True:
        xs = parameter_values(lo, hi, step)
        status = [bool(pair_status(a, round(a + step, _DECIMALS))) for a in xs[:-1]]
        flips = _flips(xs, status)
        if not flips:
            raise NoTransition(f"interception status constant on [{lo}, {hi}] at step {step:g}")
        if coarse and len(flips) > 1:
            raise MultipleTransitions(
                f"status changes {len(flips)} times on [{lo}, {hi}] at step {step:g}"
            )
        if len(flips) > 1:
            warnings.warn(f"{len(flips)} status changes at step {step:g}; keeping the first", stacklevel=2)
        i = flips[0]
        lower, upper = xs[i], xs[i + 2]
        history.append((lower, upper, step))
        if step <= target_step * (1 + 1e-9):
            return Bracket(lower, upper, step, tuple(history))
        lo = round(max(search[0], lower - step), _DECIMALS)
        hi = round(min(search[1], upper + step), _DECIMALS)
        step = float(f"{step / 10:.0e}")
        coarse = False


class _SpectrumCache:
    """Memoised ground-state Schmidt spectra along one model parameter."""

    def __init__(self, model, param, n, part, trunc_tol):
        self.model, self.param, self.n, self.part = model, param, n, part
        self.trunc_tol = trunc_tol
        self._store = {}

    def __call__(self, value):
        key = round(value, _DECIMALS)
        if key not in self._store:
            self._store[key] = _evaluate_point(
                self.model, self.param, key, self.n, self.part, False, self.trunc_tol
            ).schmidt
        return self._store[key]


def locate_boundary(model, param, search, n, part, target_step, grid=DEFAULT_GRID,
                    trunc_tol=DEFAULT_TRUNC_TOL):
    """Bracket the parameter value where neighbouring ground states stop
    (or start) intercepting, refined down to ``target_step``."""
    spectrum = _SpectrumCache(model, param, n, part, trunc_tol)

    def pair_status(a, b):
        return bool(find_interceptions(spectrum(a), spectrum(b), grid))

    return refine_bracket(pair_status, search, target_step)


@dataclass(frozen=True)
class ScalingFit:
    """g_c(N) = a * exp(-N / b) + c."""

    a: float
    b: float
    c: float
    residual: float
    degenerate: bool = False

    def __call__(self, n):
        if self.degenerate:
            return self.c
        return self.a * math.exp(-n / self.b) + self.c

    def to_json(self):
        return {"a": self.a, "b": self.b, "c": self.c, "rms_residual": self.residual,
                "degenerate": self.degenerate}


def _linear_part(ns, gs, b):
    design = np.column_stack([np.exp(-ns / b), np.ones_like(ns)])
    coef, *_ = np.linalg.lstsq(design, gs, rcond=None)
    resid = gs - design @ coef
    return coef, float(np.sqrt(np.mean(resid**2)))


def scaling_fit(points, b_range=(0.1, 20.0), b_points=400):
    """Least-squares fit of the pseudo-critical points g_c(N).

    For fixed b the model is linear in (a, c); the rms residual is scanned
    over a log grid of b and the best grid point is polished by
    golden-section search.
    """
    pts = sorted((float(n), float(g)) for n, g in points)
    ns = np.array([p[0] for p in pts])
    gs = np.array([p[1] for p in pts])
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if len(set(ns)) != len(ns):
        raise ValueError("system sizes must be distinct")
    if np.ptp(gs) <= 1e-14 * max(1.0, abs(gs).max()):
        warnings.warn("all g_c equal; decay length is unidentifiable", stacklevel=2)
        return ScalingFit(0.0, math.nan, float(gs.mean()), float(np.sqrt(np.mean((gs - gs.mean()) ** 2))), True)

    bs = np.geomspace(*b_range, b_points)
    rms = np.array([_linear_part(ns, gs, b)[1] for b in bs])
    k = int(np.argmin(rms))
    lo, hi = bs[max(k - 1, 0)], bs[min(k + 1, len(bs) - 1)]

    def objective(logb):
        return _linear_part(ns, gs, math.exp(logb))[1] ** 2

    if lo < bs[k] < hi:
        res = minimize_scalar(objective, bracket=(math.log(lo), math.log(bs[k]), math.log(hi)),
                              method="golden", tol=1e-12)
        b = math.exp(res.x)
    else:
        b = float(bs[k])
    (a, c), r = _linear_part(ns, gs, b)
    return ScalingFit(float(a), float(b), float(c), r)


def gs_vs_excited(model, param, value, n, part, grid=DEFAULT_GRID, trunc_tol=DEFAULT_TRUNC_TOL):
    """eLOCC verdict from the first excited state to the ground state."""
    op = model.with_param(param, value).build(n) if param else model.build(n)
    ground, excited = lowest_states(op, 2)
    if ground.degenerate:
        raise DegenerateGround(f"ground level is degenerate at {param}={value}")
    p = schmidt_from_state(excited.state, part, trunc_tol)
    q = schmidt_from_state(ground.state, part, trunc_tol)
    return elocc_verdict(p, q, grid)


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


__all__ = [
    "Bracket",
    "Classification",
    "Direction",
    "InterceptionTable",
    "Pattern",
    "ScalingFit",
    "SweepPoint",
    "SweepResult",
    "classify_pattern",
    "critical_region",
    "gs_vs_excited",
    "interception_table",
    "locate_boundary",
    "ceil_tenth",
    "parameter_values",
    "refine_bracket",
    "scaling_fit",
    "split_index",
    "sweep",
]
