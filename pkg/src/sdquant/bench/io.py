"""CSV persistence for experiment records.

One row per draw.  Floats are written as their shortest round-trip ``repr``
and the file is UTF-8 with ``\\n`` line endings, so identical records give identical
bytes on every platform.
"""
from __future__ import annotations

import csv
import math
from collections import defaultdict

import numpy as np

from .experiments import ExperimentRecord, ExperimentSpec

COLUMNS = ("kind", "N", "k", "r", "delta", "permute", "decoder", "m",
           "perm_trial", "signal_trial", "error", "overloaded", "converged", "seed")


class OutputError(OSError):
    """File I/O failure, with the offending path in the message."""


def _f(x: float) -> str:
    return repr(float(x))


def _b(x) -> str:
    return "true" if x else "false"


def _open(path, mode):
    try:
        return open(path, mode, encoding="utf-8", newline="")
    except OSError as e:
        raise OutputError(f"cannot open {path}: {e.strerror or e}") from e


def record_rows(spec: ExperimentSpec, records):
    for rec in records:
        for (p, s), err, ov, cv in zip(rec.trial_ids, rec.errors, rec.overloaded, rec.converged):
            yield {
                "kind": spec.kind, "N": str(rec.N), "k": str(rec.k), "r": str(spec.order),
                "delta": _f(spec.delta), "permute": _b(rec.permute), "decoder": spec.decoder,
                "m": str(rec.m), "perm_trial": str(p), "signal_trial": str(s),
                "error": _f(float(err)), "overloaded": _b(ov), "converged": _b(cv),
                "seed": str(spec.master_seed),
            }


def write_csv(path, spec: ExperimentSpec, records) -> None:
    with _open(path, "w") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        try:
            w.writeheader()
            w.writerows(record_rows(spec, records))
        except OSError as e:
            raise OutputError(f"cannot write {path}: {e.strerror or e}") from e


_INT = ("N", "k", "r", "m", "perm_trial", "signal_trial", "seed")
_BOOL = ("permute", "overloaded", "converged")


def read_csv(path) -> list:
    """Parse rows back into typed dicts."""
    with _open(path, "r") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        missing = set(COLUMNS) - set(reader.fieldnames)
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        rows = []
        for row in reader:
            for c in _INT:
                row[c] = int(row[c])
            for c in _BOOL:
                row[c] = row[c] == "true"
            row["delta"] = float(row["delta"])
            row["error"] = float(row["error"])
            rows.append(row)
    return rows


def worst_case_by_point(rows) -> dict:
    """``{(permute, m, k): worst error}`` over non-overloaded rows."""
    groups = defaultdict(list)
    for row in rows:
        key = (row["permute"], row["m"], row["k"])
        if not row["overloaded"]:
            groups[key].append(row["error"])
        else:
            groups.setdefault(key, [])
    return {key: (max(v) if v else float("nan")) for key, v in sorted(groups.items())}


def records_from_rows(rows, spec_hash: str = "") -> list:
    """Rebuild per-point records from parsed rows."""
    groups = defaultdict(list)
    for row in rows:
        groups[(row["permute"], row["m"], row["k"], row["N"])].append(row)
    out = []
    for (permute, m, k, N), g in sorted(groups.items()):
        out.append(ExperimentRecord(
            spec_hash=spec_hash, m=m, k=k, permute=permute,
            trial_ids=[(row["perm_trial"], row["signal_trial"]) for row in g],
            errors=np.array([row["error"] for row in g]),
            overloaded=np.array([row["overloaded"] for row in g], dtype=bool),
            converged=np.array([row["converged"] for row in g], dtype=bool),
            N=N,
        ))
    return out


def write_plot_data(path, points) -> None:
    """Two columns, ``log10(x) log10(error)``, one line per point."""
    with _open(path, "w") as fh:
        try:
            fh.write("# log10_x log10_worst_error\n")
            for x, e in points:
                if e > 0 and np.isfinite(e):
                    fh.write(f"{_f(math.log10(x))} {_f(math.log10(e))}\n")
        except OSError as e:
            raise OutputError(f"cannot write {path}: {e.strerror or e}") from e
