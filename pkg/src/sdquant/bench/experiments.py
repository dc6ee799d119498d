"""Seeded Monte-Carlo sweeps over frame size or measurement count.

A sweep is a list of points (one per ``m``, or per ``k`` for ``frame-vs-k``).
Each point runs ``trials_permutations`` selection maps, and for each of those
``trials_signals`` signals.  Every draw has its own Philox stream:

* signal of draw ``(i, p, s)``: ``stream(seed, i, p, s, 0)``
* selection ``p`` at point ``i``: ``stream(seed, i, p, 0, 1)`` (``i`` is
  pinned to 0 for ``frame-vs-k`` so the same selection is reused across k)

so results do not depend on execution order, worker count or whether the
rows are permuted at all.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..decode import DecoderConfig, consistent_decode, l1_decode, sobolev_decode, sparse_error
from ..fit import SlopeFit, fit_loglog_slope
from ..frames import (
    apply_selection,
    build_dft,
    build_harmonic_frame,
    draw_selection,
    normalize_columns,
    resolve_omega,
)
from ..numkit import _check_order
from ..quant import sigma_delta_quantize, stable_alphabet
from ..rng import stream

FRAME_KINDS = ("frame-direct-vs-permuted", "frame-decay", "frame-vs-k")
KINDS = FRAME_KINDS + ("cs-decay", "spectral", "conjecture")
DECODERS = ("sobolev", "consistent", "l1")


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    k: int
    delta: float
    order: int
    m_values: tuple
    trials_signals: int = 1
    trials_permutations: int = 100
    master_seed: int = 0
    decoder: str = "sobolev"
    permute: bool = True
    N: int | None = None
    output_path: str | None = None
    omega: object = "last-k"
    normalize: bool = True
    k_values: tuple | None = None
    workers: int = 1
    max_iterations: int = 50_000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}")
        _check_order(self.order)
        if not self.delta > 0:
            raise ValueError("delta must be > 0")
        ms = tuple(int(m) for m in self.m_values)
        if not ms or any(m < 1 for m in ms) or any(b <= a for a, b in zip(ms, ms[1:])):
            raise ValueError(f"m_values must be positive and strictly increasing, got {ms}")
        object.__setattr__(self, "m_values", ms)
        if self.k < 1 or self.trials_signals < 1 or self.trials_permutations < 1 or self.workers < 1:
            raise ValueError("k, trial counts and workers must be positive")
        if self.kind == "cs-decay" and (self.N is None or self.N < self.k):
            raise ValueError("cs-decay needs N >= k")
        if self.kind == "cs-decay" and not self.permute:
            raise ValueError("cs-decay always selects rows at random; permute must be true")
        if self.kind == "frame-vs-k":
            if not self.k_values or len(ms) != 1:
                raise ValueError("frame-vs-k needs k_values and a single m")
            object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        if not isinstance(self.omega, str):
            object.__setattr__(self, "omega", tuple(int(w) for w in self.omega))

    def spec_hash(self) -> str:
        d = dataclasses.asdict(self)
        for key in ("output_path", "workers"):
            d.pop(key)
        blob = json.dumps(d, sort_keys=True, default=list).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def points(self):
        """``(index, m, k)`` for every sweep point."""
        if self.kind == "frame-vs-k":
            return [(i, self.m_values[0], k) for i, k in enumerate(self.k_values)]
        return [(i, m, self.k) for i, m in enumerate(self.m_values)]

    def permute_modes(self):
        return (False, True) if self.kind == "frame-direct-vs-permuted" else (self.permute,)


@dataclass(frozen=True)
class ExperimentRecord:
    spec_hash: str
    m: int
    k: int
    permute: bool
    trial_ids: list
    errors: np.ndarray
    overloaded: np.ndarray
    converged: np.ndarray
    wall_time: float = 0.0
    N: int = 0

    @property
    def overload_count(self) -> int:
        return int(np.sum(self.overloaded))

    @property
    def nonconverged_count(self) -> int:
        return int(np.sum(~self.converged & ~self.overloaded))

    @property
    def valid_errors(self) -> np.ndarray:
        return self.errors[~self.overloaded]

    @property
    def worst_case_error(self) -> float:
        e = self.valid_errors
        return float(e.max()) if e.size else float("nan")


def sample_unit_ball(k: int, rng) -> np.ndarray:
    """Uniform point in the unit ball of ``C^k`` (a ``2k``-dimensional real ball)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    g = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return g / np.linalg.norm(g) * rng.random() ** (1.0 / (2 * k))


def sample_sparse_signal(N: int, k: int, rng) -> np.ndarray:
    """``k``-sparse vector in ``C^N``: uniform support, unit-ball values."""
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    x = np.zeros(N, dtype=complex)
    support = rng.choice(N, size=k, replace=False)
    x[support] = sample_unit_ball(k, rng)
    return x


def _decode(spec: ExperimentSpec, A, q):
    if spec.decoder == "sobolev":
        return sobolev_decode(A, spec.order, q)
    cfg = DecoderConfig(spec.order, spec.delta, max_iterations=spec.max_iterations)
    fn = l1_decode if spec.decoder == "l1" else consistent_decode
    return fn(A, spec.order, q, cfg)


def _draw(spec, A, x):
    """Quantize ``A x`` and decode; returns ``(error, overloaded, converged)``."""
    y = A @ x
    sd = sigma_delta_quantize(y, spec.order, stable_alphabet(y, spec.delta, spec.order))
    if sd.overloaded:
        return float("nan"), True, False
    out = _decode(spec, A, sd.q)
    return sparse_error(x, out.x_hat), False, bool(out.converged)


def _frame_task(spec: ExperimentSpec, i: int, m: int, k: int, p: int):
    omega = resolve_omega(m, k, spec.omega)
    H = build_harmonic_frame(m, omega).matrix
    if spec.normalize:
        H = normalize_columns(H)
    sel_point = 0 if spec.kind == "frame-vs-k" else i
    sel = draw_selection(m, m, stream(spec.master_seed, sel_point, p, 0, 1))
    rows = []
    for permute in spec.permute_modes():
        F = apply_selection(H, sel) if permute else H
        for s in range(spec.trials_signals):
            x = sample_unit_ball(k, stream(spec.master_seed, i, p, s, 0))
            rows.append((permute, p, s) + _draw(spec, F, x))
    return rows


def _cs_task(spec: ExperimentSpec, i: int, m: int, k: int, p: int):
    sel = draw_selection(spec.N, m, stream(spec.master_seed, i, p, 0, 1))
    A = apply_selection(build_dft(spec.N), sel)
    if spec.normalize:
        A = A / np.sqrt(m)
    rows = []
    for s in range(spec.trials_signals):
        x = sample_sparse_signal(spec.N, k, stream(spec.master_seed, i, p, s, 0))
        rows.append((spec.permute, p, s) + _draw(spec, A, x))
    return rows


def _task(args):
    spec, i, m, k, p = args
    t0 = time.perf_counter()
    fn = _cs_task if spec.kind == "cs-decay" else _frame_task
    return (i, p), fn(spec, i, m, k, p), time.perf_counter() - t0


def _run(spec: ExperimentSpec) -> list:
    jobs = [(spec, i, m, k, p) for i, m, k in spec.points() for p in range(spec.trials_permutations)]
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as ex:
            results = list(ex.map(_task, jobs, chunksize=max(1, len(jobs) // (4 * spec.workers))))
    else:
        results = [_task(j) for j in jobs]
    results.sort(key=lambda t: t[0])

    h = spec.spec_hash()
    records = []
    for i, m, k in spec.points():
        mine = [res for res in results if res[0][0] == i]
        wall = sum(res[2] for res in mine)
        for permute in spec.permute_modes():
            rows = [row for res in mine for row in res[1] if row[0] == permute]
            rows.sort(key=lambda row: (row[1], row[2]))
            records.append(ExperimentRecord(
                spec_hash=h, m=m, k=k, permute=permute,
                trial_ids=[(row[1], row[2]) for row in rows],
                errors=np.array([row[3] for row in rows], dtype=float),
                overloaded=np.array([row[4] for row in rows], dtype=bool),
                converged=np.array([row[5] for row in rows], dtype=bool),
                wall_time=wall,
                N=spec.N if spec.kind == "cs-decay" else m,
            ))
    return records


def run_frame_experiment(spec: ExperimentSpec) -> list:
    """Quantize and decode signals measured by ``m x k`` harmonic frames.

    The frame has ``m`` rows (``N = m``) and frequencies from ``spec.omega``.
    Permuted runs reorder its rows by a selection map drawn with
    replacement; direct runs keep the natural order ``j = 1..m``.
    """
    if spec.kind not in FRAME_KINDS:
        raise ValueError(f"{spec.kind!r} is not a frame experiment")
    return _run(spec)


def run_cs_experiment(spec: ExperimentSpec) -> list:
    """Sparse recovery from ``m`` rows of the ``N``-point DFT, drawn with replacement."""
    if spec.kind != "cs-decay":
        raise ValueError(f"{spec.kind!r} is not a cs experiment")
    return _run(spec)


def run_experiment(spec: ExperimentSpec) -> list:
    return run_cs_experiment(spec) if spec.kind == "cs-decay" else run_frame_experiment(spec)


def decay_fit(records, permute: bool | None = None) -> SlopeFit:
    """Slope of worst-case error against ``m`` (or ``k`` for a k sweep)."""
    recs = [r for r in records if permute is None or r.permute == permute]
    ms = [r.m for r in recs]
    xs = [r.k for r in recs] if len(set(ms)) == 1 and len(recs) > 1 else ms
    return fit_loglog_slope([(x, r.worst_case_error) for x, r in zip(xs, recs)])


def m_range(start: float, stop: float, count: int) -> tuple:
    """``count`` log-spaced integers from ``start`` to ``stop``."""
    if count < 1 or start < 1 or stop < start:
        raise ValueError(f"bad m range {start}:{stop}:{count}")
    ms = tuple(int(round(v)) for v in np.geomspace(start, stop, count))
    if len(set(ms)) != len(ms):
        raise ValueError(f"m range {start}:{stop}:{count} has repeated integers")
    return ms


# Full-size settings; desk runs override trial counts.
PRESETS = {
    "fig1": dict(kind="frame-direct-vs-permuted", k=10, delta=0.1, order=1,
                 m_values=m_range(100, 500, 9), trials_permutations=200, trials_signals=1,
                 decoder="sobolev"),
    "fig2": dict(kind="frame-decay", k=10, delta=0.1, order=1,
                 m_values=m_range(100, 500, 9), trials_permutations=400, trials_signals=1,
                 decoder="sobolev", permute=True),
    "fig3": dict(kind="frame-vs-k", k=8, k_values=(8, 16, 24, 32, 40, 48, 56, 64), delta=0.1,
                 order=1, m_values=(512,), trials_permutations=1, trials_signals=20,
                 decoder="sobolev", permute=True),
    "fig4": dict(kind="cs-decay", N=512, k=10, delta=0.1, order=1,
                 m_values=m_range(100, 1000, 10), trials_permutations=20, trials_signals=20,
                 decoder="l1", permute=True),
}


def preset(name: str, **overrides) -> ExperimentSpec:
    try:
        base = dict(PRESETS[name])
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    base.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentSpec(**base)
