"""Percentage tables, expectation, the q=4 check for case 4 and drift diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Mapping, Sequence

from .sweep import CASES, Histogram

CASE_TITLES = {
    1: "N(eps)=+1, (d/p)=+1",
    2: "N(eps)=+1, (d/p)=-1",
    3: "N(eps)=-1, (d/p)=+1",
    4: "N(eps)=-1, (d/p)=-1",
}


def format_percent(count: int, total: int, sig: int = 3) -> str:
    """``100*count/total`` to ``sig`` significant figures, half-even; zero prints as 0.000."""
    if total <= 0:
        raise ValueError("total must be positive")
    if count == 0:
        return "0." + "0" * sig
    value = Decimal(100 * count) / Decimal(total)
    exp = value.adjusted() - (sig - 1)
    return str(value.quantize(Decimal(1).scaleb(exp), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class FrequencyTable:
    case: int
    rows: list[tuple[int, str, int]]
    total: int


def frequency_table(h: Histogram, top_k: int = 20) -> FrequencyTable:
    total = h.total
    if total == 0:
        raise ValueError(f"case {h.case} histogram is empty")
    rows = [(q, format_percent(h.counts.get(q, 0), total), h.counts.get(q, 0))
            for q in range(1, top_k + 1)]
    return FrequencyTable(h.case, rows, total)


def render_tables(columns: Sequence[tuple[int | None, Mapping[int, Histogram]]],
                  top_k: int = 20, cases: Sequence[int] = CASES) -> str:
    """Aligned text tables, one per case, one column per sweep range."""
    blocks = []
    for j in cases:
        tables = [(m, frequency_table(hs[j], top_k)) for m, hs in columns if hs[j].total]
        if not tables:
            continue
        heads = ["q \\ m"] + [str(m) if m is not None else "-" for m, _ in tables]
        body = [[str(q)] + [t.rows[q - 1][1] for _, t in tables] for q in range(1, top_k + 1)]
        body.append(["Values"] + [str(t.total) for _, t in tables])
        widths = [max(len(r[i]) for r in [heads, *body]) for i in range(len(heads))]
        fmt = lambda r: " | ".join(c.rjust(w) for c, w in zip(r, widths))  # noqa: E731
        rule = "-+-".join("-" * w for w in widths)
        blocks.append("\n".join([CASE_TITLES[j], fmt(heads), rule,
                                 *map(fmt, body[:-1]), rule, fmt(body[-1])]))
    return "\n\n".join(blocks) + "\n"


def tables_csv(columns: Sequence[tuple[int | None, Mapping[int, Histogram]]],
               top_k: int = 20) -> str:
    lines = ["case,m,q,percent,count,total"]
    for j in CASES:
        for m, hs in columns:
            if not hs[j].total:
                continue
            t = frequency_table(hs[j], top_k)
            lines += [f"{j},{'' if m is None else m},{q},{pct},{c},{t.total}" for q, pct, c in t.rows]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ExpectationReport:
    m: int
    E: float
    normalizer: float
    ratio: float


def expectation(h: Histogram, m: int) -> ExpectationReport:
    """Mean quotient of a (case 1) histogram against log(m)*log(log(m))."""
    if m < 16:
        raise ValueError(f"m={m} too small: need m >= 16")
    total = h.total
    if total == 0:
        raise ValueError("empty histogram")
    E = sum(q * c for q, c in h.counts.items()) / total
    norm = math.log(m) * math.log(math.log(m))
    return ExpectationReport(m=m, E=E, normalizer=norm, ratio=E / norm)


@dataclass(frozen=True)
class TheoremReport:
    passed: bool
    q4_count: int
    multiples_of_4: dict[int, int]
    anomalies: list[int]

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"theorem q=4 in case 4: {status} (count={self.q4_count})"]
        if self.anomalies:
            for q in self.anomalies:
                lines.append(f"EMPIRICAL-ANOMALY q={q} count={self.multiples_of_4[q]}")
        else:
            lines.append("no counts at any q = 0 mod 4")
        return "\n".join(lines)


def theorem_check(h4: Histogram) -> TheoremReport:
    mult = {q: c for q, c in sorted(h4.counts.items()) if q % 4 == 0 and c}
    q4 = h4.counts.get(4, 0)
    return TheoremReport(
        passed=q4 == 0,
        q4_count=q4,
        multiples_of_4=mult,
        anomalies=[q for q in mult if q != 4],
    )


@dataclass(frozen=True)
class DriftRow:
    case: int
    q: int
    ms: tuple[int, ...]
    freqs: tuple[float, ...]
    max_step: float
    spread: float


def convergence_report(series: Sequence[tuple[int, Mapping[int, Histogram]]],
                       cutoff: int = 50) -> list[DriftRow]:
    """Relative frequency of each q <= cutoff across increasing ranges m.

    ``max_step`` is the largest change between consecutive ranges and
    ``spread`` the max minus min over all of them, both as fractions.
    """
    if len(series) < 2:
        raise ValueError("need histograms at two or more ranges")
    series = sorted(series, key=lambda s: s[0])
    ms = tuple(m for m, _ in series)
    if len(set(ms)) != len(ms):
        raise ValueError(f"duplicate ranges {ms}")
    keys = set(series[0][1])
    for m, hs in series:
        if set(hs) != keys or any(h.case != j for j, h in hs.items()):
            raise ValueError(f"case keys at m={m} do not match")
    rows = []
    for j in sorted(keys):
        totals = [hs[j].total for _, hs in series]
        if not all(totals):
            continue
        for q in range(1, cutoff + 1):
            freqs = tuple(hs[j].counts.get(q, 0) / t for (_, hs), t in zip(series, totals))
            steps = [abs(b - a) for a, b in zip(freqs, freqs[1:])]
            rows.append(DriftRow(j, q, ms, freqs, max(steps), max(freqs) - min(freqs)))
    return rows


def render_convergence(rows: Sequence[DriftRow]) -> str:
    """One line per (case, q, m), percentages."""
    lines = ["case,q,m,percent,max_step_pp,spread_pp"]
    for r in rows:
        for m, f in zip(r.ms, r.freqs):
            lines.append(f"{r.case},{r.q},{m},{100 * f:.4f},{100 * r.max_step:.4f},{100 * r.spread:.4f}")
    return "\n".join(lines) + "\n"
