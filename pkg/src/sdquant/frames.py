"""DFT matrices, harmonic frames and random row selection.

Math indices are 1-based throughout: row ``j`` and frequency ``w`` both run
over ``1..m`` and ``H[j-1, l] = exp(2 pi i w_l j / m)``.  Storage is 0-based.
Phases are reduced modulo ``m`` in integer arithmetic first, so the column
for ``w = m`` is exactly all ones.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import as_generator


@dataclass(frozen=True)
class HarmonicFrame:
    m: int
    omega: tuple
    matrix: np.ndarray

    @property
    def k(self) -> int:
        return len(self.omega)

    @property
    def has_ones_column(self) -> bool:
        return self.m in self.omega


@dataclass(frozen=True)
class SelectionMap:
    """Row indices drawn with replacement; ``draws`` are 1-based."""

    source_size: int
    draws: np.ndarray

    def __len__(self) -> int:
        return len(self.draws)

    @classmethod
    def identity(cls, n: int) -> "SelectionMap":
        return cls(n, np.arange(1, n + 1))


def _exp_table(m: int, idx: np.ndarray) -> np.ndarray:
    # exp(2 pi i idx / m) for integer idx already reduced into [0, m)
    out = np.exp(2j * np.pi * idx / m)
    out[idx == 0] = 1.0
    return out


def build_harmonic_frame(m: int, omega) -> HarmonicFrame:
    """The ``m x k`` harmonic frame with frequencies ``omega`` (subset of ``1..m``)."""
    omega = tuple(int(w) for w in omega)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not omega:
        raise ValueError("omega must be non-empty")
    if len(set(omega)) != len(omega):
        raise ValueError("omega contains duplicate frequencies")
    bad = [w for w in omega if not 1 <= w <= m]
    if bad:
        raise ValueError(f"frequencies out of range [1, {m}]: {bad}")
    j = np.arange(1, m + 1, dtype=np.int64)
    idx = np.outer(j, np.asarray(omega, dtype=np.int64)) % m
    return HarmonicFrame(m=m, omega=omega, matrix=_exp_table(m, idx))


def build_dft(N: int) -> np.ndarray:
    """Unnormalized ``N x N`` DFT with entries ``exp(2 pi i l j / N)``, ``j, l = 1..N``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return build_harmonic_frame(N, range(1, N + 1)).matrix


def normalize_columns(M) -> np.ndarray:
    M = np.asarray(M)
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms == 0):
        raise ValueError(f"zero column(s) at {np.flatnonzero(norms == 0).tolist()}")
    return M / norms


def high_band(m: int, k: int) -> tuple:
    """The last ``k`` columns of the frequency-centred ``m``-point DFT.

    In centred order the columns run over signed frequencies
    ``-floor(m/2) .. ceil(m/2)-1``; the last ``k`` are the ``k`` highest
    positive frequencies, i.e. the band just below Nyquist.
    """
    top = (m + 1) // 2
    if not 1 <= k < top:
        raise ValueError(f"need 1 <= k < {top} for m={m}, got k={k}")
    return tuple(range(top - k, top))


def natural_tail(m: int, k: int) -> tuple:
    """Frequencies ``m-k+1 .. m``: the last ``k`` columns in natural order (includes all-ones)."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= {m}, got k={k}")
    return tuple(range(m - k + 1, m + 1))


OMEGA_POLICIES = {
    "last-k": high_band,
    "natural-last-k": natural_tail,
}


def resolve_omega(m: int, k: int, omega="last-k") -> tuple:
    """Turn a policy name or explicit frequency list into a frequency tuple."""
    if isinstance(omega, str):
        try:
            return OMEGA_POLICIES[omega](m, k)
        except KeyError:
            raise ValueError(f"unknown omega policy {omega!r}") from None
    omega = tuple(int(w) for w in omega)
    if len(omega) != k:
        raise ValueError(f"explicit omega has {len(omega)} entries, expected k={k}")
    return omega


def draw_selection(N: int, m: int, rng=None) -> SelectionMap:
    """``m`` i.i.d. uniform draws from ``1..N``."""
    if N < 1 or m < 1:
        raise ValueError(f"N and m must be >= 1, got N={N}, m={m}")
    rng = as_generator(rng)
    return SelectionMap(N, rng.integers(1, N + 1, size=m))


def apply_selection(M, sel: SelectionMap) -> np.ndarray:
    """Stack rows of ``M`` in the order given by ``sel``."""
    M = np.asarray(M)
    if sel.source_size != M.shape[0]:
        raise ValueError(f"selection drawn from {sel.source_size} rows, matrix has {M.shape[0]}")
    d = np.asarray(sel.draws)
    if d.size and (d.min() < 1 or d.max() > M.shape[0]):
        raise ValueError("selection index out of range")
    return M[d - 1]
