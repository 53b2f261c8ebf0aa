"""Bipartitions of a chain and Schmidt spectra of pure states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatch, NotNormalized, OddSize
from .monotones import DEFAULT_TRUNC_TOL, normalize_descending

NORM_TOL = 1e-10


@dataclass(frozen=True)
class BipartitionSpec:
    """Sites (1-based) belonging to subsystem A; the rest form B."""

    n_sites: int
    a_sites: tuple

    def __post_init__(self):
        a = tuple(sorted(set(int(s) for s in self.a_sites)))
        if not a:
            raise ValueError("subsystem A must not be empty")
        if a[0] < 1 or a[-1] > self.n_sites:
            raise ValueError(f"sites must lie in 1..{self.n_sites}")
        if len(a) == self.n_sites:
            raise ValueError("subsystem A must be a proper subset of the chain")
        object.__setattr__(self, "a_sites", a)

    @property
    def b_sites(self):
        return tuple(s for s in range(1, self.n_sites + 1) if s not in self.a_sites)

    def complement(self):
        return BipartitionSpec(self.n_sites, self.b_sites)


def half_chain(n):
    if n % 2:
        raise OddSize(f"half-chain cut needs an even number of sites, got {n}")
    return BipartitionSpec(n, tuple(range(1, n // 2 + 1)))


def comb(n):
    if n < 2:
        raise ValueError("comb partition needs at least 2 sites")
    return BipartitionSpec(n, tuple(range(1, n + 1, 2)))


def parse_partition(text, n):
    """``half``, ``comb`` or ``sites=1,3,5``."""
    text = text.strip()
    if text == "half":
        return half_chain(n)
    if text == "comb":
        return comb(n)
    if text.startswith("sites="):
        try:
            sites = [int(s) for s in text[len("sites="):].split(",") if s.strip()]
            return BipartitionSpec(n, tuple(sites))
        except ValueError as exc:
            raise ConfigError("cut", str(exc)) from None
    raise ConfigError("cut", f"expected 'half', 'comb' or 'sites=i,j,...', got {text!r}")


def _amplitude_matrix(state, part):
    state = np.asarray(state)
    n = part.n_sites
    if state.ndim != 1 or state.size != 1 << n:
        raise DimensionMismatch(f"state of length {state.size} does not fit {n} sites")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"state norm is {norm!r}")
    order = [s - 1 for s in part.a_sites] + [s - 1 for s in part.b_sites]
    t = state.reshape((2,) * n).transpose(order)
    return t.reshape(1 << len(part.a_sites), -1)


def schmidt_from_state(state, part, trunc_tol=DEFAULT_TRUNC_TOL):
    """Squared singular values of the A|B amplitude matrix."""
    sv = np.linalg.svd(_amplitude_matrix(state, part), compute_uv=False)
    return normalize_descending(sv**2, trunc_tol)


def reduced_density_matrix(state, part):
    m = _amplitude_matrix(state, part)
    return m @ m.conj().T


def rdm_spectrum(state, part):
    """Eigenvalues of rho_A, descending; the slow reference path."""
    return np.sort(np.linalg.eigvalsh(reduced_density_matrix(state, part)))[::-1]
