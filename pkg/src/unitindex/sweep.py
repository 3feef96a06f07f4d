"""Range sweep over (d, p) filling the four quotient histograms.

Work is split into contiguous d-spans. Each span is processed by one
worker with private counts; the parent merges finished spans in whatever
order they arrive, which is safe because merging is plain addition.
A checkpoint records which d-spans are done together with the partial
histograms, so an interrupted run can pick up where it stopped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from . import __version__
from .arith import PrimeTables, build_tables, valid_d_mask
from .kernels import BACKEND, sweep_d
from .pell import FieldParams, cf_expand

log = logging.getLogger(__name__)

CASES = (1, 2, 3, 4)
CHECKPOINT_SCHEMA = "unitindex-checkpoint/1"
P_MAX_CAP = 10**8


class CheckpointError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    d_max: int
    p_max: int
    d_min: int = 2
    p_min: int = 3
    workers: int = 1
    checkpoint_path: Path | None = None
    output_path: Path | None = None
    chunk_size: int = 64

    def __post_init__(self) -> None:
        if self.d_min < 2 or self.d_max < self.d_min:
            raise ValueError(f"invalid d range [{self.d_min}, {self.d_max}]")
        if self.p_min < 3 or self.p_max < self.p_min:
            raise ValueError(f"invalid p range [{self.p_min}, {self.p_max}]")
        if self.p_max > P_MAX_CAP:
            raise ValueError(f"p_max above {P_MAX_CAP} is not supported")
        if self.workers < 1 or self.chunk_size < 1:
            raise ValueError("workers and chunk_size must be >= 1")

    def digest(self) -> str:
        key = json.dumps([self.d_min, self.d_max, self.p_min, self.p_max])
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def ranges(self) -> dict[str, int]:
        return {"d_min": self.d_min, "d_max": self.d_max, "p_min": self.p_min, "p_max": self.p_max}


@dataclass
class Histogram:
    """Counts of the quotient q for one case j; ``total`` is S_j."""

    case: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def add(self, q: int, count: int = 1) -> None:
        if q < 1 or count < 0:
            raise ValueError(f"bad histogram entry q={q} count={count}")
        if count:
            self.counts[q] = self.counts.get(q, 0) + count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        strip = lambda c: {q: n for q, n in c.items() if n}  # noqa: E731
        return self.case == other.case and strip(self.counts) == strip(other.counts)


def merge(a: Histogram, b: Histogram) -> Histogram:
    if a.case != b.case:
        raise ValueError(f"cannot merge case {a.case} with case {b.case}")
    out = Counter(a.counts)
    out.update(b.counts)
    return Histogram(a.case, {q: c for q, c in out.items() if c})


def empty_histograms() -> dict[int, Histogram]:
    return {j: Histogram(j) for j in CASES}


@dataclass
class SweepResult:
    histograms: dict[int, Histogram]
    pairs: int
    complete: bool
    wall_time: float = 0.0


# -- intervals of finished d values ---------------------------------------

def _merge_intervals(spans: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[list[int]] = []
    for lo, hi in sorted(spans):
        if out and lo <= out[-1][1] + 1:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def _pending_spans(config: SweepConfig, done: list[tuple[int, int]]) -> list[tuple[int, int]]:
    gaps = []
    cur = config.d_min
    for lo, hi in done:
        if lo > cur:
            gaps.append((cur, min(lo - 1, config.d_max)))
        cur = max(cur, hi + 1)
    if cur <= config.d_max:
        gaps.append((cur, config.d_max))
    spans = []
    for lo, hi in gaps:
        for s in range(lo, hi + 1, config.chunk_size):
            spans.append((s, min(s + config.chunk_size - 1, hi)))
    return spans


# -- workers ---------------------------------------------------------------

_tables: PrimeTables | None = None
_primes: np.ndarray | None = None


def _init_worker(p_min: int, p_max: int) -> None:
    global _tables, _primes
    _tables = build_tables(p_max + 1)
    _primes = _tables.primes(p_min, p_max)


def _process_span(span: tuple[int, int]) -> tuple[tuple[int, int], dict[tuple[int, int], int], int]:
    assert _tables is not None and _primes is not None
    lo, hi = span
    qmax = int(_primes[-1]) + 2 if len(_primes) else 2
    counts = np.zeros((4, qmax), dtype=np.int64)
    pairs = 0
    mask = valid_d_mask(lo, hi)
    for d in (np.flatnonzero(mask) + lo).tolist():
        cf = cf_expand(FieldParams(d))
        quotients = np.asarray(cf.partial_quotients, dtype=np.int64)
        pairs += sweep_d(d, quotients, cf.norm_sign, _primes, _tables.spf, counts)
    js, qs = np.nonzero(counts)
    sparse = {(int(j) + 1, int(q)): int(counts[j, q]) for j, q in zip(js, qs)}
    return span, sparse, pairs


# -- checkpoints -----------------------------------------------------------

def _payload_checksum(payload: Mapping) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def checkpoint_save(path: Path, config: SweepConfig, done: list[tuple[int, int]],
                    histograms: Mapping[int, Histogram], pairs: int) -> None:
    payload = {
        "schema": CHECKPOINT_SCHEMA,
        "digest": config.digest(),
        "ranges": config.ranges(),
        "completed_d": [list(s) for s in done],
        "pairs": pairs,
        "histograms": {
            str(j): {str(q): c for q, c in sorted(histograms[j].counts.items())} for j in CASES
        },
    }
    doc = {"payload": payload, "sha256": _payload_checksum(payload)}
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(doc, indent=1))
    os.replace(tmp, path)


def checkpoint_load(path: Path, config: SweepConfig):
    """Return ``(completed spans, histograms, pairs)`` or raise CheckpointError."""
    try:
        doc = json.loads(Path(path).read_text())
        payload = doc["payload"]
        checksum = doc["sha256"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    if _payload_checksum(payload) != checksum:
        raise CheckpointError(f"corrupt checkpoint {path}: checksum mismatch")
    if payload.get("schema") != CHECKPOINT_SCHEMA:
        raise CheckpointError(f"unsupported checkpoint schema {payload.get('schema')!r}")
    if payload.get("digest") != config.digest():
        raise CheckpointError(
            f"checkpoint {path} was written for ranges {payload.get('ranges')}, "
            f"not {config.ranges()}"
        )
    try:
        done = _merge_intervals((int(lo), int(hi)) for lo, hi in payload["completed_d"])
        hists = {
            j: Histogram(j, {int(q): int(c) for q, c in payload["histograms"][str(j)].items()})
            for j in CASES
        }
        pairs = int(payload["pairs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    return done, hists, pairs


# -- driver ----------------------------------------------------------------

def run_sweep(config: SweepConfig, *, max_spans: int | None = None,
              checkpoint_every: int = 8) -> SweepResult:
    """Sweep every valid d and odd prime p in the configured ranges.

    ``max_spans`` stops after that many d-spans have been finished in this
    call (a checkpoint is written if configured); the result is then
    marked incomplete.
    """
    start = time.perf_counter()
    done: list[tuple[int, int]] = []
    hists = empty_histograms()
    pairs = 0
    ckpt = config.checkpoint_path
    if ckpt is not None and Path(ckpt).exists():
        done, hists, pairs = checkpoint_load(ckpt, config)
        log.info("resuming from %s: %d pairs already counted", ckpt, pairs)

    spans = _pending_spans(config, done)
    finished_here = 0
    since_save = 0

    def absorb(span, sparse, n):
        nonlocal pairs, done, finished_here, since_save
        for (j, q), c in sparse.items():
            hists[j].add(q, c)
        pairs += n
        done = _merge_intervals([*done, span])
        finished_here += 1
        since_save += 1
        if ckpt is not None and since_save >= checkpoint_every:
            checkpoint_save(ckpt, config, done, hists, pairs)
            since_save = 0

    def stop() -> bool:
        return max_spans is not None and finished_here >= max_spans

    try:
        if config.workers == 1 or len(spans) <= 1:
            _init_worker(config.p_min, config.p_max)
            for span in spans:
                if stop():
                    break
                absorb(*_process_span(span))
        else:
            with ProcessPoolExecutor(
                max_workers=config.workers,
                initializer=_init_worker,
                initargs=(config.p_min, config.p_max),
            ) as pool:
                queue = list(reversed(spans))
                running = set()
                while (queue or running) and not stop():
                    while queue and len(running) < 2 * config.workers:
                        running.add(pool.submit(_process_span, queue.pop()))
                    finished, running = wait(running, return_when=FIRST_COMPLETED)
                    for fut in finished:
                        absorb(*fut.result())
                for fut in running:
                    fut.cancel()
    finally:
        if ckpt is not None and since_save:
            checkpoint_save(ckpt, config, done, hists, pairs)

    complete = not _pending_spans(config, done)
    if ckpt is not None and complete:
        checkpoint_save(ckpt, config, done, hists, pairs)
    result = SweepResult(hists, pairs, complete, time.perf_counter() - start)
    if complete and config.output_path is not None:
        write_output(config.output_path, result.histograms, config=config,
                     pairs=pairs, wall_time=result.wall_time)
    return result


# -- output files ----------------------------------------------------------

def sidecar_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def write_output(path: Path, histograms: Mapping[int, Histogram], *,
                 config: SweepConfig | None = None, pairs: int | None = None,
                 wall_time: float | None = None) -> None:
    path = Path(path)
    lines = ["case,q,count,total"]
    for j in CASES:
        h = histograms.get(j, Histogram(j))
        total = h.total
        for q in sorted(h.counts):
            if h.counts[q]:
                lines.append(f"{j},{q},{h.counts[q]},{total}")
    path.write_text("\n".join(lines) + "\n")
    meta = {
        "version": __version__,
        "backend": BACKEND,
        "pairs": pairs,
        "wall_time_s": wall_time,
        "config": None,
    }
    if config is not None:
        cfg = asdict(config)
        cfg["checkpoint_path"] = str(config.checkpoint_path) if config.checkpoint_path else None
        cfg["output_path"] = str(config.output_path) if config.output_path else None
        meta["config"] = cfg
        meta["m"] = max(config.d_max, config.p_max)
    sidecar_path(path).write_text(json.dumps(meta, indent=2) + "\n")


def read_output(path: Path) -> dict[int, Histogram]:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != "case,q,count,total":
        raise ValueError(f"{path}: missing 'case,q,count,total' header")
    hists = empty_histograms()
    totals: dict[int, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            j, q, c, t = (int(v) for v in line.split(","))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed row {line!r}") from None
        if j not in hists:
            raise ValueError(f"{path}:{lineno}: unknown case {j}")
        hists[j].add(q, c)
        totals[j] = t
    for j, t in totals.items():
        if hists[j].total != t:
            raise ValueError(f"{path}: case {j} counts sum to {hists[j].total}, file says {t}")
    return hists


def read_range(path: Path) -> int | None:
    """Range m recorded in the sidecar of a sweep output, if any."""
    side = sidecar_path(path)
    if not side.exists():
        return None
    return json.loads(side.read_text()).get("m")
