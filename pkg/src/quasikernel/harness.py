"""Brute-force conjecture checking: per-digraph checks, corpus sweeps with
deterministic sharding, associative report merging, and extremal tracking.

Four bound variants over a probe ratio alpha = p/q (exact rational):

* small   -- min quasi-kernel size <= (1-alpha) n, sink-free corpora only;
* sources -- min quasi-kernel size <= n - alpha s, s = #source-not-sink;
* large   -- max over quasi-kernels of |n_minus_closed| >= alpha n;
* sharp   -- max over quasi-kernels of |Q| + 2|n_minus_set(Q)| >= alpha n,
             tracked doubled so everything stays integral.

All pass/fail decisions are exact integer cross-multiplications; slack is an
exact Fraction normalized by n (n = 0 digraphs never enter the extremal
race).  For alpha <= 1/2 the small and large bounds cannot both fail on one
digraph, and the sweep enforces that as a bug trap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .digraph import Digraph, adjacency_code, digraph_from_code, is_sink_free, sources_not_sinks, vertices_of
from .exceptions import ParseError, PostconditionViolationError
from .solvers import (
    max_large_quasi_kernel,
    max_sharp_quasi_kernel,
    min_quasi_kernel,
)

HARNESS_VERSION = "1"

VARIANTS = ("small", "sources", "large", "sharp")


def parse_alpha(text: str) -> Fraction:
    """Exact 'P/Q' only; decimals and bare integers are rejected."""
    parts = text.strip().split("/")
    if len(parts) != 2 or not all(p.isdigit() and p for p in parts):
        raise ParseError(f"alpha must be an exact fraction 'P/Q', got {text!r}")
    num, den = int(parts[0]), int(parts[1])
    if den == 0:
        raise ParseError("alpha denominator must be nonzero")
    alpha = Fraction(num, den)
    if not 0 < alpha <= 1:
        raise ParseError(f"alpha must be in (0, 1], got {alpha}")
    return alpha


@dataclass(frozen=True)
class ConjectureSpec:
    """Which bound to check at which ratio; small only makes sense on
    sink-free corpora, and the flag restricts checks for any variant."""

    variant: str
    alpha: Fraction
    sink_free_version: bool = False

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        alpha = Fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if not 0 < alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {alpha}")
        if self.variant == "small" and not self.sink_free_version:
            raise ValueError("the small variant is stated for sink-free digraphs only")

    def describe(self) -> str:
        suffix = ":sink-free" if self.sink_free_version else ""
        return f"{self.variant}:{self.alpha.numerator}/{self.alpha.denominator}{suffix}"


@dataclass(frozen=True)
class CheckRecord:
    """One digraph's outcome; the adjacency code replays the exact labeled
    digraph, so the witness stays meaningful."""

    n: int
    code_hex: str
    objective: int
    bound: Fraction
    passed: bool
    witness: int | None

    def digraph(self) -> Digraph:
        return digraph_from_code(self.n, int(self.code_hex, 16))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "adjacency_hex": self.code_hex,
            "objective": self.objective,
            "bound": _frac_str(self.bound),
            "passed": self.passed,
            "witness": None if self.witness is None else list(vertices_of(self.witness)),
        }


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def check(d: Digraph, spec: ConjectureSpec) -> CheckRecord:
    """Exact pass/fail of one bound on one digraph."""
    if spec.sink_free_version and not is_sink_free(d):
        raise ValueError("spec is for sink-free digraphs but the input has a sink")
    num, den = spec.alpha.numerator, spec.alpha.denominator
    n = d.n
    if spec.variant == "small":
        res = min_quasi_kernel(d)
        bound = Fraction((den - num) * n, den)
        passed = den * res.objective <= (den - num) * n
    elif spec.variant == "sources":
        res = min_quasi_kernel(d)
        s = sources_not_sinks(d).bit_count()
        bound = Fraction(den * n - num * s, den)
        passed = den * res.objective <= den * n - num * s
    elif spec.variant == "large":
        res = max_large_quasi_kernel(d)
        bound = Fraction(num * n, den)
        passed = den * res.objective >= num * n
    else:  # sharp, doubled objective against doubled bound
        res = max_sharp_quasi_kernel(d)
        bound = Fraction(2 * num * n, den)
        passed = den * res.objective >= 2 * num * n
    return CheckRecord(n, format(adjacency_code(d), "x"), res.objective, bound, passed, res.witness)


def slack(record: CheckRecord, spec: ConjectureSpec) -> Fraction | None:
    """Margin to the bound, normalized by n; nonnegative iff the check
    passed.  None on the empty digraph."""
    if record.n == 0:
        return None
    diff = Fraction(record.objective) - record.bound
    if spec.variant in ("small", "sources"):
        diff = -diff
    return diff / record.n


@dataclass(frozen=True)
class Report:
    """Aggregate of one or more sweep shards over a fixed corpus and spec."""

    corpus: str
    spec: ConjectureSpec
    shard_count: int
    shard_ids: tuple[int, ...]
    count: int
    failures: tuple[CheckRecord, ...]
    min_slack: Fraction | None
    extremal: tuple[CheckRecord, ...]
    records: tuple[CheckRecord, ...]
    version: str = HARNESS_VERSION

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "corpus": self.corpus,
            "conjecture": {
                "variant": self.spec.variant,
                "alpha": _frac_str(self.spec.alpha),
                "sink_free_version": self.spec.sink_free_version,
            },
            "shard_count": self.shard_count,
            "shard_ids": list(self.shard_ids),
            "count": self.count,
            "failures": [r.to_json() for r in self.failures],
            "min_slack": None if self.min_slack is None else _frac_str(self.min_slack),
            "extremal": [r.to_json() for r in self.extremal],
            "records": [r.to_json() for r in self.records],
        }


def sweep(digraphs: Iterable[Digraph], spec: ConjectureSpec, corpus: str,
          shard_count: int = 1, shard_index: int = 0,
          keep_records: bool = False) -> Report:
    """Check every digraph whose enumeration index is ``shard_index`` modulo
    ``shard_count``.  Shards of the same deterministic stream are disjoint
    and merge_reports reassembles them exactly.
    """
    if shard_count < 1 or not 0 <= shard_index < shard_count:
        raise ValueError(f"bad shard {shard_index}/{shard_count}")
    count = 0
    failures: list[CheckRecord] = []
    min_sl: Fraction | None = None
    extremal: list[CheckRecord] = []
    records: list[CheckRecord] = []
    for i, d in enumerate(digraphs):
        if i % shard_count != shard_index:
            continue
        rec = check(d, spec)
        count += 1
        if keep_records:
            records.append(rec)
        if not rec.passed:
            failures.append(rec)
            _assert_small_large_disjunction(d, spec)
        sl = slack(rec, spec)
        if sl is not None:
            if min_sl is None or sl < min_sl:
                min_sl = sl
                extremal = [rec]
            elif sl == min_sl:
                extremal.append(rec)
    return Report(corpus, spec, shard_count, (shard_index,), count,
                  tuple(failures), min_sl, tuple(extremal), tuple(records))


def _assert_small_large_disjunction(d: Digraph, spec: ConjectureSpec) -> None:
    """For alpha <= 1/2 a digraph cannot break both the small and the large
    bound: a minimum quasi-kernel larger than (1-alpha) n dominates itself,
    which is already alpha n coverage.  Observed double failure means a
    solver bug, so it raises instead of reporting."""
    if spec.alpha > Fraction(1, 2) or spec.variant not in ("small", "large"):
        return
    if spec.variant == "small":
        other = ConjectureSpec("large", spec.alpha)
        if not check(d, other).passed:
            raise PostconditionViolationError(
                "small and large bounds both failed; impossible for alpha <= 1/2")
    else:
        if not is_sink_free(d):
            return
        other = ConjectureSpec("small", spec.alpha, sink_free_version=True)
        if not check(d, other).passed:
            raise PostconditionViolationError(
                "small and large bounds both failed; impossible for alpha <= 1/2")


def merge_reports(a: Report, b: Report) -> Report:
    """Associative shard merge; corpus, spec, and shard_count must match."""
    if a.corpus != b.corpus or a.spec != b.spec or a.shard_count != b.shard_count:
        raise ValueError("reports come from different sweeps")
    if a.version != b.version:
        raise ValueError("reports come from different harness versions")
    overlap = set(a.shard_ids) & set(b.shard_ids)
    if overlap:
        raise ValueError(f"shards {sorted(overlap)} appear in both reports")
    if a.min_slack is None:
        min_sl, extremal = b.min_slack, b.extremal
    elif b.min_slack is None or a.min_slack < b.min_slack:
        min_sl, extremal = a.min_slack, a.extremal
    elif b.min_slack < a.min_slack:
        min_sl, extremal = b.min_slack, b.extremal
    else:
        min_sl, extremal = a.min_slack, a.extremal + b.extremal
    return Report(a.corpus, a.spec, a.shard_count, a.shard_ids + b.shard_ids,
                  a.count + b.count, a.failures + b.failures, min_sl, extremal,
                  a.records + b.records, a.version)


def report_to_csv(report: Report) -> str:
    """One row per checked digraph; requires a sweep with keep_records."""
    if report.count and not report.records:
        raise ValueError("CSV export needs a sweep run with keep_records=True")
    lines = ["adjacency_hex,n,objective,bound_num,bound_den,pass"]
    for rec in report.records:
        lines.append(
            f"{rec.code_hex},{rec.n},{rec.objective},"
            f"{rec.bound.numerator},{rec.bound.denominator},{int(rec.passed)}")
    return "\n".join(lines) + "\n"


def extremal_over(digraphs: Iterable[Digraph], spec: ConjectureSpec, corpus: str) -> Report:
    """Sweep keeping only the aggregate plus all slack minimizers."""
    return sweep(digraphs, spec, corpus)


def iter_shard(digraphs: Iterable[Digraph], shard_count: int, shard_index: int) -> Iterator[Digraph]:
    """The subsequence a given shard would check; exposed for parallel runs."""
    for i, d in enumerate(digraphs):
        if i % shard_count == shard_index:
            yield d
