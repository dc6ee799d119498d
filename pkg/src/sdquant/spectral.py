"""Empirical checks on the spectra of projected harmonic frames.

``V_l`` always means the right singular vectors of ``D^{-r}`` paired with its
``l`` largest singular values (the low-frequency subspace).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .fit import SlopeFit, fit_loglog_slope
from .frames import (
    SelectionMap,
    apply_selection,
    build_harmonic_frame,
    draw_selection,
    normalize_columns,
)
from .numkit import _check_order, dinv_power_matrix, low_frequency_basis, numeric_svd
from .rng import stream

QUANTILES = (0.05, 0.5, 0.95)


def projected_spectrum(Vl, F):
    """Smallest and largest singular values of ``Vl^H F``.

    When ``Vl`` has fewer columns than ``F`` the product is rank deficient
    and the smallest value is 0.
    """
    Vl, F = np.asarray(Vl), np.asarray(F)
    if Vl.ndim != 2 or F.ndim != 2 or Vl.shape[0] != F.shape[0]:
        raise ValueError(f"row mismatch: Vl {Vl.shape}, F {F.shape}")
    s = np.linalg.svd(Vl.conj().T @ F, compute_uv=False)
    smin = 0.0 if Vl.shape[1] < F.shape[1] else float(s[-1])
    return smin, float(s[0])


def harmonic_cross_product(N: int, omega1, omega2, sel: SelectionMap | None = None) -> np.ndarray:
    """``Hbar^{omega1 H} Hbar^{omega2}_sigma`` for column-normalized ``N``-row frames.

    If ``N`` is in both sets, the column for ``omega2``'s all-ones column is
    exactly the unit vector at ``omega1``'s all-ones position, whatever
    ``sel`` is.
    """
    H1 = normalize_columns(build_harmonic_frame(N, omega1).matrix)
    H2 = normalize_columns(build_harmonic_frame(N, omega2).matrix)
    if sel is not None:
        H2 = apply_selection(H2, sel)
    return H1.conj().T @ H2


def omega_for_policy(N: int, k: int, policy) -> tuple:
    """``exclude-ones-column``: ``N-k..N-1``; ``include-ones-column``: ``N-k+1..N``."""
    if isinstance(policy, str):
        if policy == "exclude-ones-column":
            if k >= N:
                raise ValueError("exclude-ones-column needs k < N")
            return tuple(range(N - k, N))
        if policy == "include-ones-column":
            return tuple(range(N - k + 1, N + 1))
        raise ValueError(f"unknown omega policy {policy!r}")
    omega = tuple(int(w) for w in policy)
    if len(omega) != k:
        raise ValueError(f"explicit omega has {len(omega)} entries, expected k={k}")
    return omega


@dataclass(frozen=True)
class ConcentrationReport:
    l: int
    k: int
    N: int
    m: int
    trials: int
    sigma_min_over_sqrt_l: np.ndarray
    sigma_max_over_sqrt_l: np.ndarray
    empirical_quantiles: dict = field(default_factory=dict)

    def frac_min_below(self, t: float) -> float:
        return float(np.mean(self.sigma_min_over_sqrt_l <= t)) if self.trials else 0.0

    def frac_max_above(self, t: float) -> float:
        return float(np.mean(self.sigma_max_over_sqrt_l >= t)) if self.trials else 0.0

    def merge(self, other: "ConcentrationReport") -> "ConcentrationReport":
        if (self.l, self.k, self.N, self.m) != (other.l, other.k, other.N, other.m):
            raise ValueError("cannot merge reports with different shapes")
        return _report(
            self.l, self.k, self.N, self.m,
            np.concatenate([self.sigma_min_over_sqrt_l, other.sigma_min_over_sqrt_l]),
            np.concatenate([self.sigma_max_over_sqrt_l, other.sigma_max_over_sqrt_l]),
        )


def _report(l, k, N, m, smin, smax) -> ConcentrationReport:
    q = {}
    if len(smin):
        for p in QUANTILES:
            q[f"min_q{round(100 * p):02d}"] = float(np.quantile(smin, p))
            q[f"max_q{round(100 * p):02d}"] = float(np.quantile(smax, p))
    return ConcentrationReport(l, k, N, m, len(smin), smin, smax, q)


def concentration_experiment(
    N: int,
    k: int,
    l: int,
    m: int,
    trials: int,
    omega_policy="exclude-ones-column",
    seed: int = 0,
    r: int = 1,
    permute: bool = True,
    normalize: bool = False,
) -> ConcentrationReport:
    """Sample ``sigma(V_l^H F) / sqrt(l)`` over random row selections.

    ``F`` is ``m`` rows drawn with replacement from the ``N``-row harmonic
    frame on ``omega_policy``.  Rows have unit-modulus entries unless
    ``normalize`` is set, so ``E[F^H V_l V_l^H F] = l I`` and the ratios
    concentrate near 1.  ``permute=False`` takes the rows in natural order
    and needs ``m == N``.  Trial ``t`` draws from ``stream(seed, t)``.
    """
    r = _check_order(r)
    if not m >= l >= 1 or k < 1:
        raise ValueError(f"need m >= l >= 1 and k >= 1, got m={m}, l={l}, k={k}")
    H = build_harmonic_frame(N, omega_for_policy(N, k, omega_policy)).matrix
    if normalize:
        H = normalize_columns(H)
    Vl = low_frequency_basis(m, l, r)
    if not permute and m != N:
        raise ValueError("permute=False needs m == N")
    smin = np.empty(trials)
    smax = np.empty(trials)
    for t in range(trials):
        sel = draw_selection(N, m, stream(seed, t)) if permute else SelectionMap.identity(N)
        lo, hi = projected_spectrum(Vl, apply_selection(H, sel))
        smin[t], smax[t] = lo, hi
    root = np.sqrt(l)
    return _report(l, k, N, m, smin / root, smax / root)


@dataclass(frozen=True)
class RicEstimate:
    k: int
    trials: int
    lower_bound_on_RIC: float
    support_of_worst_case: tuple


def _support_deviation(M, support) -> float:
    cols = M[:, list(support)]
    ev = np.linalg.eigvalsh(cols.conj().T @ cols)
    return float(max(ev[-1] - 1.0, 1.0 - ev[0]))


def estimate_ric(M, k: int, trials: int, seed: int = 0) -> RicEstimate:
    """Randomized lower bound on the order-``k`` restricted isometry constant.

    Samples ``trials`` supports of size ``k`` uniformly and keeps the worst
    eigenvalue deviation of the Gram matrix from 1.
    """
    M = np.asarray(M)
    if not 1 <= k <= M.shape[1]:
        raise ValueError(f"need 1 <= k <= {M.shape[1]}, got {k}")
    if trials < 0:
        raise ValueError("trials must be >= 0")
    rng = stream(seed)
    worst, support = 0.0, ()
    for _ in range(trials):
        K = tuple(sorted(rng.choice(M.shape[1], size=k, replace=False).tolist()))
        dev = _support_deviation(M, K)
        if dev > worst:
            worst, support = dev, K
    return RicEstimate(k, trials, worst, support)


def exhaustive_ric(M, k: int) -> RicEstimate:
    """Exact ``delta_k`` by enumerating every size-``k`` support.

    Subsets of smaller size cannot do worse (eigenvalue interlacing).
    Only sensible for a dozen columns or so.
    """
    M = np.asarray(M)
    if not 1 <= k <= M.shape[1]:
        raise ValueError(f"need 1 <= k <= {M.shape[1]}, got {k}")
    worst, support, n = 0.0, (), 0
    for K in itertools.combinations(range(M.shape[1]), k):
        n += 1
        dev = _support_deviation(M, K)
        if dev > worst:
            worst, support = dev, K
    return RicEstimate(k, n, worst, support)


@dataclass(frozen=True)
class ConjectureReport:
    r: int
    m_values: list
    max_entry_times_sqrt_m: list
    bound_ratio: list

    def trend(self) -> SlopeFit:
        """Log-log slope of ``bound_ratio`` against ``m``."""
        return fit_loglog_slope(list(zip(self.m_values, self.bound_ratio)))


def conjecture_check(r: int, m_values) -> ConjectureReport:
    """``||V||_max sqrt(m)`` for the right singular vectors of ``D^{-r}``, and that over ``r^r``."""
    r = _check_order(r)
    ms = [int(m) for m in m_values]
    if any(m < 2 for m in ms):
        raise ValueError("every m must be >= 2")
    vals = []
    for m in ms:
        _, _, V = numeric_svd(dinv_power_matrix(m, r))
        vals.append(float(np.max(np.abs(V)) * np.sqrt(m)))
    return ConjectureReport(r, ms, vals, [v / r**r for v in vals])
