"""Uniform complex alphabet, scalar/MSQ quantizers and r-th order Sigma-Delta.

The alphabet is ``(delta Z + i delta Z)`` intersected with the closed disc of
radius ``R``.  Rounding is done per real/imaginary component, halves away from
zero.  Only when that point falls outside the disc is the nearest in-disc
point found by exhaustive search, and the call is then reported as clipped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

_RADIUS_SLACK = 1e-12


@dataclass(frozen=True)
class QuantAlphabet:
    delta: float
    radius: float

    def __post_init__(self):
        if not self.delta > 0 or not self.radius > 0:
            raise ValueError(f"delta and radius must be positive, got {self.delta}, {self.radius}")

    @cached_property
    def _grid(self) -> np.ndarray:
        # integer lattice points (a, b) with |delta (a + ib)| <= R
        n = int(math.floor(self.radius / self.delta))
        a = np.arange(-n, n + 1)
        A, B = np.meshgrid(a, a, indexing="ij")
        keep = self._inside(A * self.delta, B * self.delta)
        return np.stack([A[keep], B[keep]], axis=1)

    def _inside(self, re, im):
        return np.hypot(re, im) <= self.radius * (1 + _RADIUS_SLACK)

    @property
    def points(self) -> np.ndarray:
        """All alphabet members as complex numbers."""
        g = self._grid
        return self.delta * (g[:, 0] + 1j * g[:, 1])

    def __len__(self) -> int:
        return len(self._grid)

    def contains(self, c, tol: float = 1e-9) -> bool:
        c = complex(c)
        a, b = c.real / self.delta, c.imag / self.delta
        on_grid = abs(a - round(a)) <= tol and abs(b - round(b)) <= tol
        return on_grid and bool(self._inside(round(a) * self.delta, round(b) * self.delta))

    def nearest_in_ball(self, c: complex) -> complex:
        g = self._grid
        d = (g[:, 0] * self.delta - c.real) ** 2 + (g[:, 1] * self.delta - c.imag) ** 2
        a, b = g[int(np.argmin(d))]
        return complex(a * self.delta, b * self.delta)


def stable_radius(y_inf_norm: float, delta: float, r: int) -> float:
    """Smallest radius meeting ``R >= 2 ceil(||y||_inf) + delta (2^r + 1)``."""
    if y_inf_norm < 0 or delta <= 0 or r < 1:
        raise ValueError("need y_inf_norm >= 0, delta > 0, r >= 1")
    return 2 * math.ceil(y_inf_norm) + delta * (2**r + 1)


def stable_alphabet(y, delta: float, r: int) -> QuantAlphabet:
    """Alphabet whose radius satisfies the stability rule for input ``y``."""
    y_inf = float(np.max(np.abs(y))) if np.size(y) else 0.0
    return QuantAlphabet(delta, stable_radius(y_inf, delta, r))


def _round_half_away(x: float, delta: float) -> float:
    return math.copysign(math.floor(abs(x) / delta + 0.5), x)


def _quantize(cr: float, ci: float, alphabet: QuantAlphabet):
    d = alphabet.delta
    a = _round_half_away(cr, d)
    b = _round_half_away(ci, d)
    qr, qi = a * d, b * d
    if math.hypot(qr, qi) <= alphabet.radius * (1 + _RADIUS_SLACK):
        return qr, qi, False
    q = alphabet.nearest_in_ball(complex(cr, ci))
    return q.real, q.imag, True


def scalar_quantize(c, alphabet: QuantAlphabet, return_clipped: bool = False):
    """Nearest alphabet member to ``c``.

    With ``return_clipped=True`` returns ``(q, clipped)``.
    """
    c = complex(c)
    qr, qi, clipped = _quantize(c.real, c.imag, alphabet)
    q = complex(qr, qi)
    return (q, clipped) if return_clipped else q


def msq_quantize(y, alphabet: QuantAlphabet) -> np.ndarray:
    """Memoryless scalar quantization: each entry rounded independently."""
    y = np.asarray(y, dtype=complex)
    return np.array([scalar_quantize(c, alphabet) for c in y], dtype=complex)


@dataclass(frozen=True)
class SigmaDeltaResult:
    q: np.ndarray
    u: np.ndarray
    order: int
    overloaded: bool
    c0: complex = 0j
    clipped: np.ndarray = field(default=None, repr=False)


def sigma_delta_quantize(y, r: int, alphabet: QuantAlphabet, c0: complex = 0j) -> SigmaDeltaResult:
    """Greedy ``r``-th order Sigma-Delta quantization of ``y``.

    ``q_i = Q(y_i + sum_j (-1)^(j-1) C(r,j) u_{i-j})`` and ``u_i`` is what that
    rounding left behind, so ``(D^r u)_i = y_i - q_i``.  States before index 1
    are ``c0``; with ``c0 = 0`` this is ``y - q = D^r u`` with an implicit zero
    boundary.
    """
    if int(r) != r or r < 1:
        raise ValueError(f"order must be a positive integer, got {r!r}")
    r = int(r)
    y = np.asarray(y, dtype=complex)
    if not np.all(np.isfinite(y)):
        raise ValueError("input has non-finite entries")
    m = y.shape[0]
    coef = [(-1) ** (j - 1) * math.comb(r, j) for j in range(1, r + 1)]
    c0 = complex(c0)
    # hist[0] is u_{i-1}, hist[r-1] is u_{i-r}
    hr = [c0.real] * r
    hi = [c0.imag] * r
    q = np.empty(m, dtype=complex)
    u = np.empty(m, dtype=complex)
    clipped = np.zeros(m, dtype=bool)
    for i, yi in enumerate(y.tolist()):
        vr, vi = yi.real, yi.imag
        for cj, ur, ui in zip(coef, hr, hi):
            vr += cj * ur
            vi += cj * ui
        qr, qi, clip = _quantize(vr, vi, alphabet)
        ur, ui = vr - qr, vi - qi
        q[i] = complex(qr, qi)
        u[i] = complex(ur, ui)
        clipped[i] = clip
        hr.insert(0, ur)
        hr.pop()
        hi.insert(0, ui)
        hi.pop()
    return SigmaDeltaResult(q=q, u=u, order=r, overloaded=bool(clipped.any()), c0=c0, clipped=clipped)
