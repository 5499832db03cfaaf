"""Batch C_F versus robustness gap simulation on random states."""

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..linalg import ValidationError
from ..measures import CfConfig, CrConfig, SdpError, c_l1, coherence_fraction, robustness
from ..states import random_density

log = logging.getLogger(__name__)

CSV_HEADER = ["dim", "sample_index", "cf", "cr_bar", "cl1_bar", "gap", "error"]
NEGATIVE_GAP_TOL = 1e-6
MAX_ERROR_FRACTION = 1e-3


class SimulationError(RuntimeError):
    def __init__(self, message, records=None):
        super().__init__(message)
        self.records = records


@dataclass
class SimulationRecord:
    dim: int
    sample_index: int
    cf: float
    cr_bar: float
    cl1_bar: float
    gap: float
    seed: int
    error: str = ""


@dataclass
class GapSummary:
    dim: int
    n: int
    max_gap: float
    mean_gap: float
    negative_count: int
    error_count: int = 0


def derive_seed(run_seed: int, *keys: int) -> int:
    """Stable per-task seed, independent of scheduling order."""
    return int(np.random.SeedSequence([run_seed, *keys]).generate_state(1, dtype=np.uint64)[0])


def simulate_sample(dim, sample_index, run_seed, cf_config=None, cr_config=None) -> SimulationRecord:
    seed = derive_seed(run_seed, dim, sample_index)
    rho = random_density(dim, seed)
    try:
        cr_bar = robustness(rho, cr_config).normalized
    except SdpError as exc:
        log.warning("dim=%d sample=%d: SDP failed: %s", dim, sample_index, exc)
        return SimulationRecord(dim, sample_index, math.nan, math.nan, math.nan, math.nan, seed, "sdp")
    cf = coherence_fraction(rho, cf_config).value
    cl1_bar = (1 + c_l1(rho)) / dim
    if not (math.isfinite(cf) and math.isfinite(cr_bar)):
        return SimulationRecord(dim, sample_index, cf, cr_bar, cl1_bar, math.nan, seed, "nonfinite")
    return SimulationRecord(dim, sample_index, cf, cr_bar, cl1_bar, (cr_bar - cf) / cr_bar, seed)


def _run_task(args):
    return simulate_sample(*args)


def run_gap_simulation(dims, samples_per_dim: int, seed: int, cf_config: CfConfig | None = None,
                       cr_config: CrConfig | None = None, threads: int = 1) -> list[SimulationRecord]:
    """One record per (dim, sample), sorted by (dim, sample_index).

    Failing samples are kept with an error code; the run raises
    SimulationError when more than 0.1% of them fail.
    """
    dims = [int(d) for d in dims]
    if not dims or any(not 2 <= d <= 16 for d in dims):
        raise ValidationError(f"dims must lie in 2..16, got {dims}")
    if samples_per_dim < 1:
        raise ValidationError("samples_per_dim must be >= 1")
    tasks = [(d, i, seed, cf_config, cr_config) for d in dims for i in range(samples_per_dim)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * threads))))
    else:
        records = [_run_task(t) for t in tasks]
    records.sort(key=lambda r: (r.dim, r.sample_index))
    n_err = sum(1 for r in records if r.error)
    if n_err > MAX_ERROR_FRACTION * len(records):
        raise SimulationError(f"{n_err} of {len(records)} samples failed", records)
    return records


def summarize(records) -> list[GapSummary]:
    records = list(records)
    if not records:
        raise ValidationError("no records to summarize")
    out = []
    for d in sorted({r.dim for r in records}):
        rows = [r for r in records if r.dim == d]
        gaps = np.array([r.gap for r in rows if not r.error])
        n_err = len(rows) - gaps.size
        if gaps.size:
            out.append(GapSummary(d, int(gaps.size), float(gaps.max()), float(gaps.mean()),
                                  int(np.sum(gaps < -NEGATIVE_GAP_TOL)), n_err))
        else:
            out.append(GapSummary(d, 0, math.nan, math.nan, 0, n_err))
    return out


def fmt(x: float) -> str:
    return format(x, ".12g")


def write_csv(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.dim, r.sample_index, fmt(r.cf), fmt(r.cr_bar), fmt(r.cl1_bar), fmt(r.gap), r.error])


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(fh) -> list[SimulationRecord]:
    """Parse the CSV written by write_csv (seed is not stored and comes back as -1)."""
    reader = csv.DictReader(fh)
    if reader.fieldnames != CSV_HEADER:
        raise ValidationError(f"unexpected CSV header {reader.fieldnames}")
    return [SimulationRecord(int(row["dim"]), int(row["sample_index"]), float(row["cf"]),
                             float(row["cr_bar"]), float(row["cl1_bar"]), float(row["gap"]), -1,
                             row["error"])
            for row in reader]
