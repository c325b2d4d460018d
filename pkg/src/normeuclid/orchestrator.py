"""Segmented, resumable sweeps with deterministic output.

A job's range is cut into fixed-length segments.  Each finished segment is
written to its own part file (write then rename) before a ``SEG ... DONE`` line
is recorded in the checkpoint, so a killed run resumes without losing or
duplicating work, and the merged output does not depend on how many workers
ran or where the job was interrupted.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from mpmath import mpf

from . import __version__
from .bounds import CONSTANT_TABLE, GRH_TABLE, BoundsEvaluator, sci1
from .criterion import DEFAULT_R_CAP, SEARCH_CAP, SIZE_BOUND, SurvivorRecord, SweepSummary, Witness, sweep_range
from .errors import CheckpointMismatch, DegenerateWitness, InternalInconsistency
from .arith import FieldClass
from .heilbronn import HeilbronnCertificate, brute_decompose, verify_certificate, witness_decomposition

log = logging.getLogger(__name__)

TSV_HEADER = "ell\tf\tq1\tq2\tr\tstatus"
SURVIVOR_MARK = "# survivors"

# Survivors of the criterion below this conductor get a brute-force search for
# a decomposition f = a + b before being reported as candidates.
BRUTE_BELOW = 10**4


@dataclass(frozen=True)
class SweepJob:
    ell: int
    lo: int
    hi: int
    out: Path
    checkpoint: Path
    segment: int = 10**9
    workers: int = 1
    r_cap: int = DEFAULT_R_CAP
    certs: Optional[Path] = None
    brute_below: int = BRUTE_BELOW

    def segments(self) -> list[tuple[int, int]]:
        return [(a, min(self.hi, a + self.segment - 1)) for a in range(self.lo, self.hi + 1, self.segment)]

    def identity(self) -> str:
        key = f"{self.ell} {self.lo} {self.hi} {self.segment} {self.r_cap} {self.brute_below} {__version__} certs={self.certs is not None}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]


@dataclass
class SegmentResult:
    lo: int
    hi: int
    rows: list
    survivor_rows: list
    cert_lines: list
    max_r: int


def _row(res) -> str:
    if isinstance(res, Witness):
        return f"{res.ell}\t{res.f}\t{res.q1}\t{res.q2}\t{res.r}\twitness"
    status = "survivor-size" if res.reason == SIZE_BOUND else "survivor-cap"
    q1 = "" if res.q1 is None else res.q1
    q2 = "" if res.q2 is None else res.q2
    return f"{res.ell}\t{res.f}\t{q1}\t{q2}\t\t{status}"


def process_segment(
    ell: int, lo: int, hi: int, r_cap: int, want_certs: bool, brute_below: int = BRUTE_BELOW
) -> SegmentResult:
    """Search one segment; every witness must also yield a verified certificate.

    Survivors below ``brute_below`` that admit a direct decomposition are
    emitted with status ``heilbronn`` instead of being reported as survivors.
    """
    rows, survivors, certs = [], [], []
    max_r = 0
    for res in sweep_range(ell, lo, hi, r_cap):
        if isinstance(res, Witness):
            try:
                cert = witness_decomposition(res)
            except DegenerateWitness as exc:
                raise InternalInconsistency(f"witness {res} has no valid decomposition: {exc}") from exc
            rows.append(_row(res))
            max_r = max(max_r, res.r)
            if want_certs:
                certs.append(cert.to_line())
            continue
        cert = brute_decompose(FieldClass(ell, res.f), res.f - 1) if res.f < brute_below else None
        if cert is None:
            survivors.append(_row(res))
            continue
        rows.append(_row(res).rsplit("\t", 1)[0] + "\theilbronn")
        if want_certs:
            certs.append(cert.to_line())
    return SegmentResult(lo, hi, rows, survivors, certs, max_r)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _parts_dir(job: SweepJob) -> Path:
    return job.out.with_name(job.out.name + ".parts")


def _part_path(job: SweepJob, lo: int, hi: int, kind: str) -> Path:
    return _parts_dir(job) / f"{lo}-{hi}.{kind}"


def _survivor_fs(rows: Iterable[str]) -> str:
    return ",".join(r.split("\t")[1] for r in rows)


def _read_checkpoint(job: SweepJob) -> dict:
    """Map (lo, hi) -> checkpoint line for completed segments."""
    header = f"# job {job.identity()}"
    if not job.checkpoint.exists():
        return {}
    lines = job.checkpoint.read_text().splitlines()
    if not lines or lines[0].split(" ell=")[0] != header:
        raise CheckpointMismatch(f"{job.checkpoint} belongs to a different job")
    done = {}
    for line in lines[1:]:
        parts = line.split()
        if len(parts) >= 5 and parts[0] == "SEG" and parts[4] == "DONE":
            done[(int(parts[2]), int(parts[3]))] = line
    return done


def _write_checkpoint(job: SweepJob, done: dict) -> None:
    head = (
        f"# job {job.identity()} ell={job.ell} lo={job.lo} hi={job.hi} "
        f"segment={job.segment} rcap={job.r_cap} engine={__version__}"
    )
    body = [done[k] for k in sorted(done)]
    _atomic_write(job.checkpoint, "\n".join([head, *body]) + "\n")


def _record(job: SweepJob, res: SegmentResult, done: dict) -> None:
    _atomic_write(_part_path(job, res.lo, res.hi, "tsv"), "".join(r + "\n" for r in res.rows))
    _atomic_write(_part_path(job, res.lo, res.hi, "surv"), "".join(r + "\n" for r in res.survivor_rows))
    if job.certs is not None:
        _atomic_write(_part_path(job, res.lo, res.hi, "certs"), "".join(c + "\n" for c in res.cert_lines))
    done[(res.lo, res.hi)] = (
        f"SEG {job.ell} {res.lo} {res.hi} DONE maxr={res.max_r} survivors={_survivor_fs(res.survivor_rows)}"
    )
    _write_checkpoint(job, done)


def run_sweep(job: SweepJob, stop_after: Optional[int] = None) -> SweepSummary:
    """Process every unfinished segment of ``job`` and write the merged output.

    ``stop_after`` abandons the run after that many newly completed segments
    (used to exercise resumption); the merged output is then not written.
    """
    t0 = time.perf_counter()
    done = _read_checkpoint(job)
    _parts_dir(job).mkdir(parents=True, exist_ok=True)
    if not job.checkpoint.exists():
        _write_checkpoint(job, done)
    pending = [s for s in job.segments() if s not in done]
    log.info("ell=%d: %d segments, %d pending", job.ell, len(job.segments()), len(pending))
    args = [(job.ell, a, b, job.r_cap, job.certs is not None, job.brute_below) for a, b in pending]
    completed = 0
    if job.workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(job.workers) as pool:
            for res in pool.map(process_segment, *zip(*args)):
                _record(job, res, done)
                completed += 1
                if stop_after is not None and completed >= stop_after:
                    pool.shutdown(cancel_futures=True)
                    break
    else:
        for a in args:
            _record(job, process_segment(*a), done)
            completed += 1
            if stop_after is not None and completed >= stop_after:
                break
    summary = _merge(job, done)
    summary.elapsed = time.perf_counter() - t0
    return summary


def _merge(job: SweepJob, done: dict) -> SweepSummary:
    summary = SweepSummary(job.ell, job.lo, job.hi)
    segs = job.segments()
    if any(s not in done for s in segs):
        return summary
    rows, surv, certs = [], [], []
    for lo, hi in segs:
        rows += _part_path(job, lo, hi, "tsv").read_text().splitlines()
        surv += _part_path(job, lo, hi, "surv").read_text().splitlines()
        if job.certs is not None:
            certs += _part_path(job, lo, hi, "certs").read_text().splitlines()
    _atomic_write(job.out, "\n".join([TSV_HEADER, *rows, f"{SURVIVOR_MARK}\t{len(surv)}", *surv]) + "\n")
    if job.certs is not None:
        _atomic_write(job.certs, "".join(c + "\n" for c in certs))
    summary.witness_count = len(rows)
    summary.max_r = max((int(r.split("\t")[4] or 0) for r in rows), default=0)
    summary.survivors = [_parse_survivor(r) for r in surv]
    return summary


def _parse_survivor(row: str) -> SurvivorRecord:
    ell, f, q1, q2, _, status = row.split("\t")
    reason = SIZE_BOUND if status == "survivor-size" else SEARCH_CAP
    return SurvivorRecord(int(ell), int(f), reason, int(q1) if q1 else None, int(q2) if q2 else None)


def read_sweep_output(path: Path) -> tuple[list[Witness], list[int], list[SurvivorRecord]]:
    """(criterion witnesses, conductors settled by brute force, survivors)."""
    witnesses, resolved, survivors = [], [], []
    in_survivors = False
    for line in Path(path).read_text().splitlines()[1:]:
        if line.startswith(SURVIVOR_MARK):
            in_survivors = True
            continue
        if in_survivors:
            survivors.append(_parse_survivor(line))
        else:
            ell, f, q1, q2, r, status = line.split("\t")
            if status == "heilbronn":
                resolved.append(int(f))
            else:
                witnesses.append(Witness(int(ell), int(f), int(q1), int(q2), int(r)))
    return witnesses, resolved, survivors


def run_verify(path: Path) -> list[tuple[int, str, bool]]:
    """(line number, line, verdict) for every certificate line in ``path``."""
    verdicts = []
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            ok = verify_certificate(HeilbronnCertificate.from_line(line))
        except ValueError:
            ok = False
        verdicts.append((n, line, ok))
    return verdicts


def run_bounds(regime: str, ell: Optional[int] = None, dps: int = 30) -> str:
    """Text report: one threshold for ``ell``, or the whole table.

    ``regime`` is "grh", "uncond" or "constants" (tables A, B and C).
    """
    ev = BoundsEvaluator(dps)
    if regime == "constants":
        rows = [f"{'p0':>8}  C"] + [f"{'1e' + str(j):>8}  {ev.constant_C(mpf(10) ** j)}" for j in CONSTANT_TABLE]
        return "\n".join(rows)
    solve = ev.grh_bound if regime == "grh" else ev.uncond_bound
    ells = sorted(GRH_TABLE) if ell is None else [ell]
    results = [solve(e) for e in ells]
    if ell is not None:
        return sci1(results[0].threshold)
    rows = [f"{'ell':>4}  bound"]
    for res in results:
        mark = "" if res.certified else "  (uncertified)"
        rows.append(f"{res.ell:>4}  {sci1(res.threshold)}{mark}")
    return "\n".join(rows)
