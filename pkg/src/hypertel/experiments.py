"""Height-growth experiment on h_Omega = Gamma(Omega k)/Gamma(Omega n - k) and model fits."""

from __future__ import annotations

import csv
import enum
import math
import multiprocessing as mp
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .bounds import minimal_height_ln
from .errors import InsufficientData, InvalidOmega, RankDeficient
from .solver import HeightRecord, height_of, solve_minimal, solve_nonminimal
from .term_model import family_h_omega

MODES = ("minimal", "nonminimal")
DESK_CAP = {"minimal": 8, "nonminimal": 2}
DEFAULT_TIMEOUT = 300.0
HEIGHT_HEADER = ["omega", "r", "d", "H", "H_over_omega3", "H_over_omega5", "ln_bound", "runtime_ms"]
FIT_HEADER = ["model", "c0", "c1", "c2", "rss"]


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("HYPERTEL_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def measure(omega: int, mode: str) -> HeightRecord:
    term = family_h_omega(omega)
    t0 = time.perf_counter()
    rel = solve_minimal(term) if mode == "minimal" else solve_nonminimal(term)
    ms = int((time.perf_counter() - t0) * 1000)
    ln_bound = minimal_height_ln(term) if mode == "minimal" else math.nan
    return HeightRecord(omega, rel.r, rel.d, height_of(rel), ln_bound, ms,
                        escalated=rel.escalated)


def _child(conn, omega, mode):
    try:
        conn.send(("ok", measure(omega, mode)))
    except Exception as exc:  # reported in-row
        conn.send(("error", f"{type(exc).__name__}: {exc}"))
    finally:
        conn.close()


def _placeholder(omega: int, status: str, runtime_ms: int = 0) -> HeightRecord:
    nan = math.nan
    return HeightRecord(omega, -1, -1, nan, nan, runtime_ms, status=status)


def run_height_experiment(omega_max: int, mode: str = "minimal", *, omega_min: int = 1,
                          timeout: float | None = DEFAULT_TIMEOUT, workers: int | None = None,
                          cap: int | None = None) -> list[HeightRecord]:
    """One record per Omega, sorted.

    Each Omega runs in its own process so a timeout kills only that solve;
    the row is kept with status ``timeout``.  Omegas above the desk cap get
    status ``capped``.  ``workers=0`` runs everything inline without timeouts.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if int(omega_max) != omega_max or omega_max < 1:
        raise InvalidOmega(f"omega_max must be a positive integer, got {omega_max!r}")
    cap = DESK_CAP[mode] if cap is None else cap
    omegas = list(range(max(1, omega_min), omega_max + 1))
    records = {om: _placeholder(om, "capped") for om in omegas if om > cap}
    todo = [om for om in omegas if om <= cap]
    workers = worker_count() if workers is None else workers
    if workers == 0:
        for om in todo:
            records[om] = measure(om, mode)
    else:
        _run_pool(todo, mode, timeout, workers, records)
    return [records[om] for om in omegas]


def _run_pool(todo, mode, timeout, workers, records):
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    pending = list(todo)
    running = {}
    while pending or running:
        while pending and len(running) < workers:
            om = pending.pop(0)
            parent, child = ctx.Pipe(duplex=False)
            proc = ctx.Process(target=_child, args=(child, om, mode), daemon=True)
            proc.start()
            child.close()
            running[om] = (proc, parent, time.monotonic())
        for om, (proc, conn, start) in list(running.items()):
            elapsed = time.monotonic() - start
            if conn.poll():
                try:
                    status, payload = conn.recv()
                except EOFError:
                    status, payload = "error", "worker exited without a result"
                records[om] = payload if status == "ok" else _placeholder(om, "error", int(elapsed * 1000))
                proc.join()
                conn.close()
                del running[om]
            elif not proc.is_alive():
                records[om] = _placeholder(om, "error", int(elapsed * 1000))
                conn.close()
                del running[om]
            elif timeout is not None and elapsed > timeout:
                proc.kill()
                proc.join()
                conn.close()
                records[om] = _placeholder(om, "timeout", int(elapsed * 1000))
                del running[om]
        time.sleep(0.005)


# -- fits ------------------------------------------------------------------

def _m1(w):
    return [math.log(w), math.log(w) / w, math.log(w) / w ** 2]


def _m2(w):
    return [1.0, 1.0 / w, 1.0 / w ** 2]


def _m3(w):
    return [math.log(w) / w, math.log(w) / w ** 2, math.log(w) / w ** 3]


def _m4(w):
    return [1.0 / w, 1.0 / w ** 2, 1.0 / w ** 3]


class FitModel(str, enum.Enum):
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"

    @property
    def basis(self) -> Callable[[float], list[float]]:
        return {"M1": _m1, "M2": _m2, "M3": _m3, "M4": _m4}[self.value]

    def evaluate(self, coeffs: Sequence[float], omega: float) -> float:
        return sum(c * b for c, b in zip(coeffs, self.basis(omega)))


@dataclass(frozen=True)
class FitResult:
    model: FitModel
    coefficients: tuple[float, float, float]
    rss: float

    def to_json(self) -> dict:
        return {"model": self.model.value, "coefficients": list(self.coefficients), "rss": self.rss}


def _solve_exact(M: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    A = [row[:] + [b[i]] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise RankDeficient("the model's basis columns are linearly dependent on this sample")
        A[c], A[piv] = A[piv], A[c]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * p for a, p in zip(A[i], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def least_squares_fit(points: Sequence[tuple[float, float]], model: FitModel | str) -> FitResult:
    """Ordinary least squares; the normal equations are solved in exact rationals."""
    model = FitModel(model)
    pts = [(w, v) for w, v in points if not (math.isnan(v))]
    if len(pts) < 3:
        raise InsufficientData(f"need at least 3 points, got {len(pts)}")
    X = [[Fraction(x) for x in model.basis(w)] for w, _ in pts]
    y = [Fraction(v) for _, v in pts]
    G = [[sum(row[i] * row[j] for row in X) for j in range(3)] for i in range(3)]
    Xty = [sum(row[i] * yy for row, yy in zip(X, y)) for i in range(3)]
    coef = _solve_exact(G, Xty)
    rss = sum((yy - sum(c * x for c, x in zip(coef, row))) ** 2 for row, yy in zip(X, y))
    return FitResult(model, tuple(float(c) for c in coef), float(rss))


def fit_all(records: Sequence[HeightRecord], column: str = "H_over_omega3") -> list[FitResult]:
    """Every model that can be fitted to the ok rows; degenerate ones are skipped."""
    pts = [(rec.omega, getattr(rec, column)) for rec in records if rec.status == "ok"]
    out = []
    for m in FitModel:
        try:
            out.append(least_squares_fit(pts, m))
        except (InsufficientData, RankDeficient):
            continue
    return out


# -- output ----------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(x, ".12g")


def emit_report(records: Sequence[HeightRecord], fits: Sequence[FitResult], path,
                plot: bool = True, column: str = "H_over_omega3") -> list[Path]:
    """Write heights.csv, fits.csv, runs.csv, heights.dat and (optionally) heights.png."""
    if not records:
        raise ValueError("no records to report")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    ok = [r for r in records if r.status == "ok"]
    written = []

    def write_csv(name, header, rows):
        p = out / name
        with p.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        written.append(p)

    write_csv("heights.csv", HEIGHT_HEADER,
              [[_fmt(getattr(r, h)) for h in HEIGHT_HEADER] for r in ok])
    write_csv("fits.csv", FIT_HEADER,
              [[f.model.value, *(_fmt(c) for c in f.coefficients), _fmt(f.rss)] for f in fits])
    write_csv("runs.csv", ["omega", "status", "escalated", "runtime_ms"],
              [[r.omega, r.status, int(r.escalated), r.runtime_ms] for r in records])
    dat = out / "heights.dat"
    with dat.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# omega H H_over_omega3 H_over_omega5\n")
        for r in ok:
            fh.write(f"{r.omega} {_fmt(r.H)} {_fmt(r.H_over_omega3)} {_fmt(r.H_over_omega5)}\n")
    written.append(dat)
    if plot and ok:
        from .plotting import plot_heights
        written.append(plot_heights(ok, fits, column, out / "heights.png"))
    return written


def read_heights(path) -> list[dict[str, float]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]
