"""Periodic spin-1/2 chain Hamiltonians stored as Pauli strings.

Sites are numbered from 1 and basis states are big-endian: site 1 is the
most significant bit of the basis index, and bit value 0 is the σᶻ = +1
state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SizeTooLarge

MAX_SITES = 20

_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class PauliTerm:
    """``coefficient`` times a product of Pauli matrices on distinct sites."""

    coefficient: float
    axes: tuple

    def __post_init__(self):
        axes = tuple((int(s), str(a)) for s, a in self.axes)
        sites = [s for s, _ in axes]
        if len(set(sites)) != len(sites):
            raise ValueError(f"repeated site in Pauli term {axes}")
        for _, a in axes:
            if a not in _AXES:
                raise ValueError(f"unknown Pauli axis {a!r}")
        if sum(a == "y" for _, a in axes) % 2:
            raise ValueError("odd number of sigma^y factors gives a complex operator")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "coefficient", float(self.coefficient))

    def masks(self, n_sites):
        """(flip mask, sign mask, real phase) for the bitwise kernel."""
        flip = sign = 0
        n_y = 0
        for site, axis in self.axes:
            if not 1 <= site <= n_sites:
                raise ValueError(f"site {site} outside 1..{n_sites}")
            bit = 1 << (n_sites - site)
            if axis in ("x", "y"):
                flip |= bit
            if axis in ("y", "z"):
                sign |= bit
            n_y += axis == "y"
        # Y = i * X Z on a single site, so Y...Y picks up i**n_y
        phase = (-1) ** (n_y // 2)
        return flip, sign, phase


def _parity(x):
    """Parity of the popcount of each entry of an integer array."""
    x = x.copy()
    p = np.zeros_like(x)
    while np.any(x):
        p ^= x & 1
        x >>= 1
    return p


@dataclass(eq=False)
class SparseOperator:
    """Real symmetric operator on ``2**n_sites`` amplitudes."""

    n_sites: int
    terms: tuple
    conserved: frozenset = frozenset()
    label: str = ""
    _dense: np.ndarray | None = field(default=None, repr=False)
    _kernels: list | None = field(default=None, repr=False)

    @property
    def dim(self):
        return 1 << self.n_sites

    def _term_kernels(self):
        if self._kernels is None:
            idx = np.arange(self.dim, dtype=np.int64)
            kernels = []
            for t in self.terms:
                flip, sign, phase = t.masks(self.n_sites)
                signs = phase * (1 - 2 * _parity(idx & sign)).astype(float)
                kernels.append((t.coefficient, idx ^ flip, signs))
            self._kernels = kernels
        return self._kernels

    def apply(self, vec):
        """H @ vec without forming the matrix."""
        vec = np.asarray(vec)
        if vec.shape[0] != self.dim:
            raise ValueError(f"vector has length {vec.shape[0]}, expected {self.dim}")
        out = np.zeros_like(vec, dtype=np.result_type(vec, float))
        for coeff, target, signs in self._term_kernels():
            out[target] += coeff * signs * vec
        return out

    def apply_term(self, k, vec):
        coeff, target, signs = self._term_kernels()[k]
        out = np.zeros_like(vec, dtype=float)
        out[target] = coeff * signs * vec
        return out

    def to_dense(self):
        if self._dense is None:
            m = np.zeros((self.dim, self.dim))
            idx = np.arange(self.dim)
            for coeff, target, signs in self._term_kernels():
                m[target, idx] += coeff * signs
            m.setflags(write=False)
            self._dense = m
        return self._dense

    def __mul__(self, scalar):
        terms = tuple(PauliTerm(scalar * t.coefficient, t.axes) for t in self.terms)
        return SparseOperator(self.n_sites, terms, self.conserved, self.label)

    __rmul__ = __mul__


def total_magnetization(n_sites):
    """Sum of σᶻ eigenvalues for every basis index."""
    idx = np.arange(1 << n_sites)
    ones = np.zeros(idx.shape, dtype=int)
    for b in range(n_sites):
        ones += (idx >> b) & 1
    return n_sites - 2 * ones


def _check_size(n):
    if n < 2:
        raise ValueError("need at least 2 sites")
    if n > MAX_SITES:
        raise SizeTooLarge(f"{n} sites exceeds the dense budget of {MAX_SITES}")


def _bonds(n):
    return [(i, i % n + 1) for i in range(1, n + 1)]


def build_ising(n, g):
    """H = -sum_i (X_i X_{i+1} + g Z_i), periodic."""
    _check_size(n)
    terms = [PauliTerm(-1.0, ((i, "x"), (j, "x"))) for i, j in _bonds(n)]
    terms += [PauliTerm(-g, ((i, "z"),)) for i in range(1, n + 1)]
    return SparseOperator(n, tuple(terms), frozenset({"parity"}), f"ising:g={g!r}")


def build_xy(n, gamma, h):
    """H = -sum_i [(1+γ) X_i X_{i+1} + (1-γ) Y_i Y_{i+1} + h Z_i], periodic."""
    _check_size(n)
    terms = []
    for i, j in _bonds(n):
        terms.append(PauliTerm(-(1.0 + gamma), ((i, "x"), (j, "x"))))
        terms.append(PauliTerm(-(1.0 - gamma), ((i, "y"), (j, "y"))))
    terms += [PauliTerm(-h, ((i, "z"),)) for i in range(1, n + 1)]
    conserved = {"parity"} | ({"magnetization"} if gamma == 0 else set())
    return SparseOperator(n, tuple(terms), frozenset(conserved), f"xy:gamma={gamma!r},h={h!r}")


def build_xxz(n, delta):
    """H = sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Δ Z_i Z_{i+1}), periodic."""
    _check_size(n)
    terms = []
    for i, j in _bonds(n):
        terms.append(PauliTerm(1.0, ((i, "x"), (j, "x"))))
        terms.append(PauliTerm(1.0, ((i, "y"), (j, "y"))))
        terms.append(PauliTerm(delta, ((i, "z"), (j, "z"))))
    return SparseOperator(n, tuple(terms), frozenset({"parity", "magnetization"}), f"xxz:delta={delta!r}")


_FAMILIES = {
    "ising": (build_ising, ("g",)),
    "xy": (build_xy, ("gamma", "h")),
    "xxz": (build_xxz, ("delta",)),
}


@dataclass(frozen=True)
class ModelSpec:
    """A model family plus its parameters, e.g. ``ising:g=0.95``."""

    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigError("model", f"unknown family {self.family!r}; choose from {sorted(_FAMILIES)}")
        params = tuple(sorted((str(k), float(v)) for k, v in dict(self.params).items()))
        allowed = _FAMILIES[self.family][1]
        for k, _ in params:
            if k not in allowed:
                raise ConfigError("model", f"{self.family} has no parameter {k!r}; expected {allowed}")
        object.__setattr__(self, "params", params)

    @property
    def param_names(self):
        return _FAMILIES[self.family][1]

    def get(self, name):
        return dict(self.params)[name]

    def with_param(self, name, value):
        if name not in self.param_names:
            raise ConfigError("param", f"{self.family} has no parameter {name!r}")
        p = dict(self.params)
        p[name] = value
        return ModelSpec(self.family, tuple(p.items()))

    def missing(self):
        have = dict(self.params)
        return [k for k in self.param_names if k not in have]

    def build(self, n):
        missing = self.missing()
        if missing:
            raise ConfigError("model", f"missing parameter(s) {missing} for {self.family}")
        builder, names = _FAMILIES[self.family]
        p = dict(self.params)
        return builder(n, *(p[k] for k in names))

    def __str__(self):
        body = ",".join(f"{k}={v!r}" for k, v in self.params)
        return f"{self.family}:{body}" if body else self.family


def parse_model(text):
    """Parse ``family:key=value,...``; parameters may be left for a sweep."""
    family, _, rest = text.strip().partition(":")
    params = {}
    for chunk in filter(None, (c.strip() for c in rest.split(","))):
        key, eq, value = chunk.partition("=")
        if not eq:
            raise ConfigError("model", f"expected key=value, got {chunk!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ConfigError("model", f"parameter {key.strip()!r} is not a number: {value!r}") from None
    return ModelSpec(family.strip().lower(), tuple(params.items()))
