"""Measurement-trace ingestion and empirical outage/throughput CDFs.

A trace is a CSV of per-(measurement, base station) average SNRs in dB.
For each measurement the N strongest links are kept, per-combiner outage or
achievable throughput is evaluated analytically, and the distribution over
measurements is reported as an empirical CDF.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .combiners import Combiner
from .exceptions import DomainError, TraceError
from .link_model import db_to_linear
from .outage import outage_asymptotic, outage_exact_closed
from .throughput import achievable_rate_asymptotic, throughput_from_rate

TRACE_HEADER = ("measurement_id", "bs_id", "avg_snr_db")
CDF_HEADER = ("value", "probability")


@dataclass(frozen=True)
class TraceRecord:
    measurement_id: int
    bs_id: str
    avg_snr_db: float


@dataclass(frozen=True)
class SnrTrace:
    records: tuple[TraceRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise TraceError("trace contains no measurements")
        seen = set()
        for rec in self.records:
            key = (rec.measurement_id, rec.bs_id)
            if key in seen:
                raise TraceError(f"duplicate (measurement, bs) pair {key}")
            seen.add(key)

    def measurement_ids(self) -> list[int]:
        return sorted({rec.measurement_id for rec in self.records})

    def entries_for(self, measurement_id: int) -> list[TraceRecord]:
        return [r for r in self.records if r.measurement_id == measurement_id]


@dataclass(frozen=True)
class EmpiricalCdf:
    """Sorted sample values with probabilities k/M for k = 1..M."""

    values: np.ndarray
    probabilities: np.ndarray
    skipped_measurements: int = 0

    @classmethod
    def from_samples(cls, samples: Sequence[float],
                     skipped: int = 0) -> "EmpiricalCdf":
        values = np.sort(np.asarray(samples, dtype=float))
        if values.size == 0:
            raise TraceError("no samples left to build a CDF from")
        probs = np.arange(1, values.size + 1) / values.size
        return cls(values=values, probabilities=probs,
                   skipped_measurements=skipped)


def load_trace(path) -> SnrTrace:
    """Parse a trace CSV (header measurement_id,bs_id,avg_snr_db; '#'
    comment lines ignored)."""
    records = []
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise TraceError(f"cannot read trace {path}: {exc}") from exc
    with handle:
        lines = ((i, line) for i, line in enumerate(handle, start=1)
                 if line.strip() and not line.lstrip().startswith("#"))
        numbered = list(lines)
        if not numbered:
            raise TraceError(f"{path}: empty trace file")
        header_no, header_line = numbered[0]
        header = next(csv.reader([header_line]))
        if tuple(h.strip() for h in header) != TRACE_HEADER:
            raise TraceError(
                f"{path}:{header_no}: expected header "
                f"{','.join(TRACE_HEADER)}, got {header_line.strip()!r}")
        for line_no, line in numbered[1:]:
            row = next(csv.reader([line]))
            if len(row) != 3:
                raise TraceError(f"{path}:{line_no}: expected 3 fields, "
                                 f"got {len(row)}")
            try:
                records.append(TraceRecord(int(row[0]), row[1].strip(),
                                           float(row[2])))
            except ValueError as exc:
                raise TraceError(f"{path}:{line_no}: {exc}") from exc
    if not records:
        raise TraceError(f"{path}: trace has a header but no data rows")
    return SnrTrace(records=tuple(records))


def save_trace(trace: SnrTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(TRACE_HEADER)
        for rec in trace.records:
            writer.writerow([rec.measurement_id, rec.bs_id,
                             repr(rec.avg_snr_db)])


def save_cdf(cdf: EmpiricalCdf, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        write_cdf(cdf, handle)


def write_cdf(cdf: EmpiricalCdf, handle) -> None:
    writer = csv.writer(handle)
    writer.writerow(CDF_HEADER)
    for value, prob in zip(cdf.values, cdf.probabilities):
        writer.writerow([repr(float(value)), repr(float(prob))])


def strongest_links(trace: SnrTrace, measurement_id: int,
                    n: int) -> list[float]:
    """The n largest average SNRs of one measurement, linear, descending.

    Ties are broken by ascending base-station id for determinism.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    entries = trace.entries_for(measurement_id)
    if len(entries) < n:
        raise TraceError(
            f"measurement {measurement_id} has {len(entries)} links, "
            f"need {n}")
    ranked = sorted(entries, key=lambda r: (-r.avg_snr_db, r.bs_id))
    return [db_to_linear(r.avg_snr_db) for r in ranked[:n]]


def _row_outage(combiner: Combiner, snrs: Sequence[float],
                r_c: float) -> float:
    # JD uses its asymptote (clamped), matching the batch methodology; the
    # other combiners have exact closed forms.
    if combiner is Combiner.JD:
        return outage_asymptotic(combiner, snrs, r_c).value
    if combiner is Combiner.SCO:
        return outage_exact_closed(combiner, snrs[:1], r_c).value
    return outage_exact_closed(combiner, snrs, r_c).value


def empirical_outage_cdf(trace: SnrTrace, n: int, r_c: float,
                         combiner) -> EmpiricalCdf:
    """Per-measurement outage on the n strongest links, as a CDF."""
    combiner = Combiner.parse(combiner)
    if r_c <= 0:
        raise DomainError("r_c must be positive")
    values, skipped = [], 0
    for mid in trace.measurement_ids():
        try:
            snrs = strongest_links(trace, mid, n)
        except TraceError:
            skipped += 1
            continue
        values.append(_row_outage(combiner, snrs, r_c))
    return EmpiricalCdf.from_samples(values, skipped=skipped)


def empirical_throughput_cdf(trace: SnrTrace, n: int, p_out: float,
                             bandwidth: float, combiner) -> EmpiricalCdf:
    """Per-measurement asymptotic throughput at a target outage, as a CDF."""
    combiner = Combiner.parse(combiner)
    if not 0.0 < p_out < 1.0:
        raise DomainError("p_out must lie in (0, 1)")
    if bandwidth <= 0:
        raise DomainError("bandwidth must be positive")
    values, skipped = [], 0
    for mid in trace.measurement_ids():
        try:
            snrs = strongest_links(trace, mid, n)
        except TraceError:
            skipped += 1
            continue
        if combiner is Combiner.SCO:
            rate = achievable_rate_asymptotic(combiner, snrs[:1], p_out)
        else:
            rate = achievable_rate_asymptotic(combiner, snrs, p_out)
        values.append(throughput_from_rate(bandwidth, rate, p_out))
    return EmpiricalCdf.from_samples(values, skipped=skipped)


@dataclass(frozen=True)
class SnrModelParams:
    """Synthetic-trace generator parameters (all in dB).

    ``mean_db`` is the network-wide average; each base station gets a fixed
    offset with spread ``bs_spread_db``; each measurement adds independent
    shadowing with spread ``shadowing_db``. Defaults give several strong
    links per measurement, mimicking a dense urban deployment.
    """

    mean_db: float = 21.0
    bs_spread_db: float = 4.0
    shadowing_db: float = 5.0


def synthesize_trace(n_measurements: int, n_bs: int,
                     snr_model_params: Optional[SnrModelParams] = None,
                     seed: int = 0) -> SnrTrace:
    """Deterministic synthetic trace with log-normal SNR spread."""
    if n_measurements < 1 or n_bs < 1:
        raise DomainError("n_measurements and n_bs must be >= 1")
    params = snr_model_params or SnrModelParams()
    rng = np.random.default_rng(seed)
    bs_offsets = rng.normal(0.0, params.bs_spread_db, size=n_bs)
    records = []
    for mid in range(n_measurements):
        shadowing = rng.normal(0.0, params.shadowing_db, size=n_bs)
        for b in range(n_bs):
            records.append(TraceRecord(
                measurement_id=mid,
                bs_id=f"BS{b:02d}",
                avg_snr_db=float(params.mean_db + bs_offsets[b] + shadowing[b]),
            ))
    return SnrTrace(records=tuple(records))
