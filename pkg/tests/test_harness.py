import dataclasses
import json
from fractions import Fraction

import pytest

from quasikernel import (
    ConjectureSpec,
    Digraph,
    ParseError,
    adjacency_code,
    check,
    extremal_over,
    iter_shard,
    make,
    merge_reports,
    parse_alpha,
    parse_family,
    report_to_csv,
    slack,
    sweep,
)

from conftest import all_digraphs, dg, mask_to_set
from oracles import oracle_max_large, oracle_max_sharp, oracle_min_qk


HALF = Fraction(1, 2)
SMALL_HALF = ConjectureSpec("small", HALF, sink_free_version=True)


# ---------------------------------------------------------------------------
# alpha parsing and spec validation


@pytest.mark.parametrize("text,value", [
    ("1/2", Fraction(1, 2)),
    ("2/4", Fraction(1, 2)),
    ("1/1", Fraction(1)),
    (" 1/3 ", Fraction(1, 3)),
])
def test_parse_alpha(text, value):
    assert parse_alpha(text) == value


@pytest.mark.parametrize("text", [
    "0.5", "1", "1/0", "3/2", "0/2", "-1/2", "1/2/3", "a/b", "", "1/ 2",
])
def test_parse_alpha_rejects(text):
    with pytest.raises(ParseError):
        parse_alpha(text)


def test_spec_validation():
    spec = ConjectureSpec("large", Fraction(2, 4))
    assert spec.alpha == HALF
    with pytest.raises(ValueError):
        ConjectureSpec("small", HALF)  # small without the sink-free flag
    with pytest.raises(ValueError):
        ConjectureSpec("tiny", HALF, sink_free_version=True)
    with pytest.raises(ValueError):
        ConjectureSpec("large", Fraction(0))
    with pytest.raises(ValueError):
        ConjectureSpec("large", Fraction(2))


def test_spec_describe():
    assert SMALL_HALF.describe() == "small:1/2:sink-free"
    assert ConjectureSpec("sharp", Fraction(1, 3)).describe() == "sharp:1/3"


# ---------------------------------------------------------------------------
# single-digraph checks


def test_check_small_golden(c4):
    rec = check(c4, SMALL_HALF)
    assert rec.n == 4
    assert rec.objective == 2
    assert rec.bound == Fraction(2)
    assert rec.passed
    assert mask_to_set(rec.witness) == {0, 2}
    assert rec.digraph() == c4


def test_check_sources_discount():
    # one source feeding a 2-cycle: s = 1 tightens the bound by alpha
    d = dg(3, [(0, 1), (1, 2), (2, 1)])
    rec = check(d, ConjectureSpec("sources", HALF))
    assert rec.objective == 1
    assert rec.bound == Fraction(5, 2)
    assert rec.passed


def test_check_rejects_sinky_input_for_sink_free_spec():
    d = dg(2, [(0, 1)])
    with pytest.raises(ValueError):
        check(d, ConjectureSpec("large", HALF, sink_free_version=True))
    assert check(d, ConjectureSpec("large", HALF)).passed


def test_check_record_json(c4):
    rec = check(c4, SMALL_HALF)
    obj = rec.to_json()
    assert obj == {
        "n": 4,
        "adjacency_hex": format(adjacency_code(c4), "x"),
        "objective": 2,
        "bound": "2/1",
        "passed": True,
        "witness": [0, 2],
    }
    json.dumps(obj)


@pytest.mark.parametrize("alpha", [Fraction(1, 3), HALF, Fraction(1)])
def test_check_matches_oracles_n3(alpha):
    sources_spec = ConjectureSpec("sources", alpha)
    large_spec = ConjectureSpec("large", alpha)
    sharp_spec = ConjectureSpec("sharp", alpha)
    small_spec = ConjectureSpec("small", alpha, sink_free_version=True)
    for d in all_digraphs(3):
        n = d.n
        s = sum(1 for v in range(n) if d.in_rows[v] == 0 and d.rows[v] != 0)
        min_size = len(oracle_min_qk(d))
        rec = check(d, sources_spec)
        assert rec.objective == min_size
        assert rec.passed == (min_size <= n - alpha * s)

        rec = check(d, large_spec)
        assert rec.objective == oracle_max_large(d)
        assert rec.passed == (rec.objective >= alpha * n)

        rec = check(d, sharp_spec)
        assert rec.objective == oracle_max_sharp(d)
        assert rec.passed == (rec.objective >= 2 * alpha * n)

        if all(d.rows[v] for v in range(n)):
            rec = check(d, small_spec)
            assert rec.objective == min_size
            assert rec.passed == (min_size <= (1 - alpha) * n)


# ---------------------------------------------------------------------------
# slack


def test_slack_signs(c3, c4):
    rec = check(c4, ConjectureSpec("large", HALF))
    assert slack(rec, ConjectureSpec("large", HALF)) == HALF  # (4 - 2) / 4

    failing = ConjectureSpec("small", Fraction(1), sink_free_version=True)
    rec = check(c3, failing)
    assert not rec.passed
    assert slack(rec, failing) < 0

    rec = check(Digraph(0, ()), ConjectureSpec("sources", HALF))
    assert slack(rec, ConjectureSpec("sources", HALF)) is None


def test_slack_nonnegative_iff_passed():
    spec = ConjectureSpec("sharp", Fraction(2, 3))
    for d in all_digraphs(3):
        if d.n == 0:
            continue
        rec = check(d, spec)
        assert rec.passed == (slack(rec, spec) >= 0)


# ---------------------------------------------------------------------------
# sweeping


def test_sweep_sink_free_n3_golden():
    rep = sweep(all_digraphs(3, sink_free=True), SMALL_HALF, "labeled:n=3:sink_free")
    assert rep.count == 27
    assert rep.failures == ()
    assert rep.min_slack == Fraction(1, 6)
    assert rep.records == ()
    assert rep.extremal
    for rec in rep.extremal:
        assert slack(rec, SMALL_HALF) == Fraction(1, 6)


def test_sweep_collects_failures():
    spec = ConjectureSpec("small", Fraction(1), sink_free_version=True)
    rep = sweep(all_digraphs(3, sink_free=True), spec, "c")
    assert rep.count == 27
    assert len(rep.failures) == 27  # bound is 0 and every minimum is >= 1
    assert rep.min_slack < 0


def test_sweep_shard_validation():
    for count, index in [(0, 0), (2, 2), (2, -1)]:
        with pytest.raises(ValueError):
            sweep([], SMALL_HALF, "c", shard_count=count, shard_index=index)


def test_sweep_empty_and_trivial_corpus():
    rep = sweep([], SMALL_HALF, "c")
    assert rep.count == 0 and rep.min_slack is None and rep.extremal == ()
    rep = sweep([Digraph(0, ())], SMALL_HALF, "c")
    assert rep.count == 1 and rep.failures == () and rep.min_slack is None


def test_sweep_keep_records_and_csv(two_cycle):
    spec = ConjectureSpec("large", HALF)
    rep = sweep([two_cycle], spec, "c", keep_records=True)
    assert len(rep.records) == 1
    text = report_to_csv(rep)
    code = format(adjacency_code(two_cycle), "x")
    assert text == (
        "adjacency_hex,n,objective,bound_num,bound_den,pass\n"
        f"{code},2,2,1,1,1\n"
    )


def test_csv_requires_records(two_cycle):
    rep = sweep([two_cycle], ConjectureSpec("large", HALF), "c")
    with pytest.raises(ValueError):
        report_to_csv(rep)
    # an empty sweep exports an empty table without complaint
    assert report_to_csv(sweep([], ConjectureSpec("large", HALF), "c")).count("\n") == 1


def test_sharp_is_tight_on_circulant_five():
    d = make(parse_family("circulant:5"))
    spec = ConjectureSpec("sharp", HALF)
    rec = check(d, spec)
    assert rec.objective == 5
    assert rec.bound == Fraction(5)
    assert rec.passed
    assert slack(rec, spec) == 0


# ---------------------------------------------------------------------------
# sharding and merging


def test_iter_shard_partitions():
    corpus = all_digraphs(3)
    parts = [list(iter_shard(corpus, 3, i)) for i in range(3)]
    assert sorted(len(p) for p in parts) == [21, 21, 22]
    seen = [d for i in range(3) for d in parts[i]]
    assert sorted(adjacency_code(d) for d in seen) == sorted(adjacency_code(d) for d in corpus)


def _aggregate(rep):
    return (rep.count, rep.min_slack, sorted(r.code_hex for r in rep.extremal),
            sorted(r.code_hex for r in rep.failures))


def test_merge_reassembles_shards():
    corpus = all_digraphs(3, sink_free=True)
    whole = sweep(corpus, SMALL_HALF, "c")
    shards = [sweep(corpus, SMALL_HALF, "c", shard_count=3, shard_index=i)
              for i in range(3)]
    assert sum(s.count for s in shards) == whole.count

    left = merge_reports(merge_reports(shards[0], shards[1]), shards[2])
    right = merge_reports(shards[0], merge_reports(shards[1], shards[2]))
    swapped = merge_reports(shards[2], merge_reports(shards[0], shards[1]))
    for merged in (left, right, swapped):
        assert sorted(merged.shard_ids) == [0, 1, 2]
        assert merged.shard_count == 3
        assert _aggregate(merged) == _aggregate(whole)


def test_merge_rejects_mismatches():
    corpus = all_digraphs(2)
    a = sweep(corpus, ConjectureSpec("large", HALF), "c", shard_count=2, shard_index=0)
    b = sweep(corpus, ConjectureSpec("large", HALF), "c", shard_count=2, shard_index=1)
    with pytest.raises(ValueError):
        merge_reports(a, a)  # overlapping shard ids
    with pytest.raises(ValueError):
        merge_reports(a, sweep(corpus, ConjectureSpec("large", HALF), "other",
                               shard_count=2, shard_index=1))
    with pytest.raises(ValueError):
        merge_reports(a, sweep(corpus, ConjectureSpec("large", Fraction(1, 3)), "c",
                               shard_count=2, shard_index=1))
    with pytest.raises(ValueError):
        merge_reports(a, sweep(corpus, ConjectureSpec("large", HALF), "c"))
    with pytest.raises(ValueError):
        merge_reports(a, dataclasses.replace(b, version="0"))


def test_extremal_over_equals_plain_sweep():
    corpus = all_digraphs(3, sink_free=True)
    a = extremal_over(corpus, SMALL_HALF, "c")
    b = sweep(corpus, SMALL_HALF, "c")
    assert _aggregate(a) == _aggregate(b)


def test_report_json_roundtrip():
    rep = sweep(all_digraphs(2), ConjectureSpec("sharp", HALF), "labeled:n=2",
                keep_records=True)
    obj = rep.to_json()
    json.dumps(obj)
    assert obj["version"] == "1"
    assert obj["corpus"] == "labeled:n=2"
    assert obj["conjecture"] == {"variant": "sharp", "alpha": "1/2",
                                 "sink_free_version": False}
    assert obj["count"] == rep.count == 4
    assert len(obj["records"]) == 4
    assert obj["min_slack"] is not None
