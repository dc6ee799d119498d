"""Reconstruction from Sigma-Delta measurements.

Three decoders share the composite residual ``z -> D^{-r}(A z - q)``:

* ``sobolev_decode``: closed-form left inverse weighted by ``D^{-r}``.
* ``consistent_decode``: any ``z`` whose residual sits in the box of
  half-width ``delta/2``.
* ``l1_decode``: minimum ``||z||_1`` over that same box.

The box is taken per real and imaginary component, because that is the set
the quantizer states are guaranteed to live in, so the true signal is always
feasible.

The two iterative decoders run the same ADMM on the consensus splitting
``(z, s)`` with ``s = (K z - b) / gamma``, where ``K = D^{-r} A`` and
``b = D^{-r} q``.  One block is projection onto the graph of that affine map
(via a thin SVD of ``K``, computed once).  The other is the separable
prox: complex soft-thresholding on ``z`` and box clipping on ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .numkit import SingularOperatorError, _check_order, apply_dinv_power

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DecoderConfig:
    """Solver settings.

    ``feasibility_tol=None`` means ``1e-6 * delta``.  ``gamma`` scales the
    constraint block, ``alpha`` is the over-relaxation factor, ``window`` is
    the iteration span over which the objective must settle, and ``margin``
    is the fraction of ``feasibility_tol`` by which the box is shrunk inside
    the solver.  ``rho`` is rebalanced against the residuals at most
    ``max_rho_updates`` times, after which it is frozen so the iteration
    cannot cycle.
    """

    order: int
    delta: float
    feasibility_tol: float | None = None
    max_iterations: int = 50_000
    convergence_tol: float = 1e-7
    gamma: float = 1.0
    alpha: float = 1.6
    rho: float = 1.0
    window: int = 50
    margin: float = 0.5
    max_rho_updates: int = 30

    def __post_init__(self):
        _check_order(self.order)
        if not self.delta >= 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.feasibility_tol is not None and not self.feasibility_tol >= 0:
            raise ValueError("feasibility_tol must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.alpha < 2:
            raise ValueError("alpha must lie in (0, 2)")
        if not (self.gamma > 0 and self.rho > 0 and self.window >= 1 and 0 <= self.margin < 1):
            raise ValueError("gamma, rho must be positive; window >= 1; margin in [0, 1)")

    @property
    def tol(self) -> float:
        return 1e-6 * self.delta if self.feasibility_tol is None else self.feasibility_tol


@dataclass(frozen=True)
class DecodeOutcome:
    x_hat: np.ndarray
    residual_inf: float
    iterations: int
    converged: bool
    feasibility_tol: float = 0.0


def box_norm(v) -> float:
    """``max_i max(|Re v_i|, |Im v_i|)``."""
    v = np.asarray(v)
    if v.size == 0:
        return 0.0
    return float(max(np.max(np.abs(v.real)), np.max(np.abs(v.imag))))


def residual_inf(A, r: int, q, z) -> float:
    """Component-wise sup norm of ``D^{-r}(A z - q)``."""
    return box_norm(apply_dinv_power(np.asarray(A) @ np.asarray(z) - np.asarray(q), r))


def sparse_error(x, x_hat) -> float:
    x, x_hat = np.asarray(x), np.asarray(x_hat)
    if x.shape != x_hat.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {x_hat.shape}")
    return float(np.linalg.norm(x - x_hat))


def _qr_factor(K):
    Q, R = np.linalg.qr(K)
    d = np.abs(np.diag(R))
    if d.size == 0 or d.min() <= max(K.shape) * _EPS * d.max():
        raise SingularOperatorError("D^{-r} A is rank deficient")
    return Q, R


def _weighted(A, r, weight):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] < A.shape[1]:
        raise ValueError(f"need a tall m x k matrix, got shape {A.shape}")
    if weight is None:
        return apply_dinv_power(A, r), lambda v: apply_dinv_power(v, r)
    weight = np.asarray(weight)
    return weight @ A, lambda v: weight @ v


def sobolev_dual(A, r: int, weight=None) -> np.ndarray:
    """``(A^H W^H W A)^{-1} A^H W^H W`` with ``W = D^{-r}``.

    ``weight`` replaces ``W`` by an arbitrary ``m x m`` matrix; the identity
    gives the Moore-Penrose pseudoinverse.  Computed from a QR factorization
    of ``W A`` rather than the normal equations.
    """
    r = _check_order(r)
    K, _ = _weighted(A, r, weight)
    Q, R = _qr_factor(K)
    if weight is None:
        # D^{-T} is a prefix sum taken from the bottom up
        WhQ = Q[::-1]
        for _ in range(r):
            WhQ = np.cumsum(WhQ, axis=0)
        WhQ = WhQ[::-1]
    else:
        WhQ = np.asarray(weight).conj().T @ Q
    return scipy.linalg.solve_triangular(R, WhQ.conj().T)


def sobolev_decode(A, r: int, q, weight=None) -> DecodeOutcome:
    r = _check_order(r)
    K, apply_w = _weighted(A, r, weight)
    q = np.asarray(q, dtype=complex)
    Q, R = _qr_factor(K)
    x_hat = scipy.linalg.solve_triangular(R, Q.conj().T @ apply_w(q))
    return DecodeOutcome(x_hat, residual_inf(A, r, q, x_hat), 0, True)


def _soft(x, t):
    mag = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(mag > t, 1.0 - t / mag, 0.0)
    return x * scale


def _box(x, h):
    return np.clip(x.real, -h, h) + 1j * np.clip(x.imag, -h, h)


def _admm(A, r, q, cfg: DecoderConfig, l1: bool) -> DecodeOutcome:
    if cfg.order != r:
        raise ValueError(f"order mismatch: r={r}, cfg.order={cfg.order}")
    A = np.asarray(A, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if A.ndim != 2 or q.shape != (A.shape[0],):
        raise ValueError(f"shape mismatch: A {A.shape}, q {q.shape}")
    m, N = A.shape
    eps = cfg.delta / 2
    tol = cfg.tol
    g = cfg.gamma

    K = apply_dinv_power(A, r)
    b = apply_dinv_power(q, r)
    Kg, bg = K / g, b / g
    # graph projection through the thin SVD of Kg; every coefficient below is
    # at most 1, so nothing is amplified by the conditioning of Kg
    U, sig, Vh = np.linalg.svd(Kg, full_matrices=False)
    Uh, V = U.conj().T, Vh.conj().T
    f1 = sig**2 / (1 + sig**2)
    f2 = sig / (1 + sig**2)
    knorm = g * sig[0] if sig.size else 0.0
    b_inf = box_norm(b)
    h = max(eps - cfg.margin * tol, 0.0) / g

    def floor(z):
        # round-off level of evaluating K z - b
        return 64 * _EPS * (b_inf + knorm * np.linalg.norm(z)) * max(m, 1)

    def project(a, c):
        ua = Vh @ a
        uc = Uh @ (c + bg)
        return a + V @ (f2 * uc - f1 * ua), U @ (f1 * uc + f2 * ua) - bg

    if l1:
        z = np.zeros(N, complex)
    else:
        # least-squares start; often already consistent
        keep = sig > sig[0] * 1e-12 if sig.size else sig > 0
        z = V[:, keep] @ ((Uh[keep] @ bg) / sig[keep])
    s = Kg @ z - bg
    vz, vs = z.copy(), s.copy()
    lz = np.zeros(N, complex)
    ls = np.zeros(m, complex)
    rho = cfg.rho
    rho_updates = 0

    best, best_obj, best_res = None, np.inf, np.inf
    checkpoint = None
    converged = False
    it = 0
    while True:
        res = box_norm(s) * g
        feasible = res <= eps + max(tol, floor(z))
        if feasible:
            res = box_norm(K @ z - b)
            feasible = res <= eps + max(tol, floor(z))
        if feasible and not l1:
            best, best_res, converged = z, res, True
            break
        if feasible:
            obj = float(np.sum(np.abs(z)))
            if obj < best_obj:
                best, best_obj, best_res = z.copy(), obj, res
        if it >= cfg.max_iterations:
            break
        if l1 and it % cfg.window == 0:
            # current objective at consecutive checkpoints, both feasible
            now = obj if feasible else None
            if now is not None and checkpoint is not None:
                if abs(now - checkpoint) <= cfg.convergence_tol * now or now == 0:
                    converged = True
                    break
            checkpoint = now

        z, s = project(vz - lz, vs - ls)
        hz = cfg.alpha * z + (1 - cfg.alpha) * vz
        hs = cfg.alpha * s + (1 - cfg.alpha) * vs
        vz_old, vs_old = vz, vs
        vz = _soft(hz + lz, 1.0 / rho) if l1 else hz + lz
        vs = _box(hs + ls, h)
        lz += hz - vz
        ls += hs - vs
        it += 1

        if it % 10 == 0 and rho_updates < cfg.max_rho_updates:
            pri = np.sqrt(np.linalg.norm(z - vz) ** 2 + np.linalg.norm(s - vs) ** 2)
            dua = rho * np.sqrt(np.linalg.norm(vz - vz_old) ** 2 + np.linalg.norm(vs - vs_old) ** 2)
            if pri > 10 * dua:
                rho *= 2
                lz /= 2
                ls /= 2
                rho_updates += 1
            elif dua > 10 * pri:
                rho /= 2
                lz *= 2
                ls *= 2
                rho_updates += 1

    if best is None:
        best, best_res = z, box_norm(K @ z - b)
    tol_used = max(tol, floor(best))
    return DecodeOutcome(best, best_res, it, converged and best_res <= eps + tol_used, tol_used)


def consistent_decode(A, r: int, q, cfg: DecoderConfig) -> DecodeOutcome:
    """Any ``z`` with ``||D^{-r}(A z - q)||_box <= delta/2``.

    Starts from the weighted least-squares point and stops at the first
    iterate inside the box (plus ``feasibility_tol``).
    """
    return _admm(A, r, q, cfg, l1=False)


def l1_decode(A, r: int, q, cfg: DecoderConfig) -> DecodeOutcome:
    """Approximate ``argmin ||z||_1`` s.t. ``||D^{-r}(A z - q)||_box <= delta/2``.

    Returns the feasible iterate of smallest ``||z||_1``.  ``converged`` is
    set once two feasible iterates ``cfg.window`` steps apart have objectives
    within ``convergence_tol`` (relative) of each other.
    """
    return _admm(A, r, q, cfg, l1=True)
