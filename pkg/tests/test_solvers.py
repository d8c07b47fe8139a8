import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quasikernel import (
    BudgetExceededError,
    Digraph,
    chromatic_number,
    dichromatic_number,
    find_kernel,
    heavy_independent_set,
    is_kernel,
    is_kernel_perfect,
    is_quasi_kernel,
    kernel_perfect_number,
    large_score,
    mask_of,
    max_large_quasi_kernel,
    max_sharp_quasi_kernel,
    maximalize_quasi_kernel,
    min_quasi_kernel,
    minimalize_quasi_kernel,
    n_minus_closed,
    n_minus_set,
    n_plus_set,
    odd_dicycle_free,
    quasi_kernels,
    sharp_score,
    vertices_of,
)
from quasikernel.digraph import digraph_from_code, enumerate_digraphs
from quasikernel.solvers import _has_kernel_table, _masks_by_size, check_set

import oracles
from conftest import all_digraphs, dg, mask_to_set


n4_codes = st.integers(min_value=0, max_value=(1 << 12) - 1)
n5_codes = st.integers(min_value=0, max_value=(1 << 20) - 1)


def test_masks_by_size_order():
    got = list(_masks_by_size(3))
    assert got == [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]


# ---------------------------------------------------------------------------
# kernels


def test_kernel_predicates_match_oracle():
    for d in all_digraphs(3):
        for s in range(8):
            sset = mask_to_set(s)
            assert is_kernel(d, s) == oracles.oracle_is_kernel(d, sset)
            assert is_quasi_kernel(d, s) == oracles.oracle_is_qk(d, sset)


def test_find_kernel_none_on_odd_cycles(c3, c5):
    assert find_kernel(c3).witness is None
    assert find_kernel(c5).witness is None
    assert find_kernel(c3).verified


def test_find_kernel_picks_lexicographically_first(c4):
    res = find_kernel(c4)
    assert res.witness == mask_of([0, 2])
    assert res.objective == 2


@given(n4_codes)
def test_find_kernel_matches_oracle(code):
    d = digraph_from_code(4, code)
    res = find_kernel(d)
    kernels = oracles.oracle_kernels(d)
    if res.witness is None:
        assert kernels == []
    else:
        assert frozenset(vertices_of(res.witness)) in kernels
        assert res.objective == min(len(k) for k in kernels)


def test_every_tournament_without_kernel_has_one_loser():
    # in a tournament a kernel is a single vertex beating everyone, i.e. an
    # in-dominating vertex; check the equivalence on all 3-vertex tournaments
    for arcs in itertools.product([(0, 1), (1, 0)], [(0, 2), (2, 0)], [(1, 2), (2, 1)]):
        d = dg(3, list(arcs))
        has = find_kernel(d).witness is not None
        wins = any(d.in_rows[v] == (d.vertex_mask ^ (1 << v)) for v in range(3))
        assert has == wins


# ---------------------------------------------------------------------------
# quasi-kernels


def test_min_quasi_kernel_matches_oracle_exhaustively():
    for d in all_digraphs(3):
        res = min_quasi_kernel(d)
        assert res.objective == len(oracles.oracle_min_qk(d))
        assert res.objective == res.witness.bit_count()
        assert res.verified


@given(n4_codes)
def test_min_quasi_kernel_matches_oracle(code):
    d = digraph_from_code(4, code)
    assert min_quasi_kernel(d).objective == len(oracles.oracle_min_qk(d))


def test_min_quasi_kernel_is_first_by_size_then_mask(c4):
    assert min_quasi_kernel(c4).witness == mask_of([0, 2])
    d = dg(3, [(0, 1), (2, 1)])
    # {1} dominates 0 and 2 in one step; vertex 1 is the smallest such mask
    assert min_quasi_kernel(d).witness == mask_of([1])


@given(n4_codes)
def test_max_large_matches_oracle(code):
    d = digraph_from_code(4, code)
    res = max_large_quasi_kernel(d)
    assert res.objective == oracles.oracle_max_large(d)
    assert res.objective == large_score(d, res.witness)


@given(n4_codes)
def test_max_sharp_matches_oracle(code):
    d = digraph_from_code(4, code)
    res = max_sharp_quasi_kernel(d)
    assert res.objective == oracles.oracle_max_sharp(d)
    assert res.objective == sharp_score(d, res.witness)


@given(n5_codes)
@settings(max_examples=40)
def test_sharp_dominates_large_objective(code):
    d = digraph_from_code(5, code)
    # |Q| + 2|N^-(Q)| >= |Q| + |N^-(Q)| pointwise, so the maxima compare too
    assert max_sharp_quasi_kernel(d).objective >= max_large_quasi_kernel(d).objective


def test_minimalize_quasi_kernel():
    d = dg(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    q = mask_of([0, 2])
    assert minimalize_quasi_kernel(d, q) == q
    with pytest.raises(ValueError):
        minimalize_quasi_kernel(d, mask_of([0, 1]))


@given(n4_codes)
def test_minimalize_yields_inclusion_minimal(code):
    d = digraph_from_code(4, code)
    q = max_large_quasi_kernel(d).witness
    m = minimalize_quasi_kernel(d, q)
    assert m & ~q == 0
    assert is_quasi_kernel(d, m)
    for v in vertices_of(m):
        assert not is_quasi_kernel(d, m ^ (1 << v))


@given(n4_codes)
def test_maximalize_yields_maximal_independent(code):
    d = digraph_from_code(4, code)
    q = min_quasi_kernel(d).witness
    m = maximalize_quasi_kernel(d, q)
    assert q & ~m == 0
    assert is_quasi_kernel(d, m)
    und = 0
    for v in vertices_of(m):
        und |= d.rows[v] | d.in_rows[v] | (1 << v)
    assert und == d.vertex_mask


def test_maximalize_rejects_non_quasi_kernel(c4):
    with pytest.raises(ValueError):
        maximalize_quasi_kernel(c4, mask_of([0, 1]))


def test_quasi_kernels_enumerates_exactly():
    for d in all_digraphs(3):
        got = list(quasi_kernels(d))
        want = [m for m in range(8) if oracles.oracle_is_qk(d, mask_to_set(m))]
        assert got == want


def test_quasi_kernels_budget():
    with pytest.raises(BudgetExceededError):
        next(quasi_kernels(Digraph(21, tuple([0] * 21))))


# ---------------------------------------------------------------------------
# kernel-perfect sets and partition numbers


def test_is_kernel_perfect_matches_oracle():
    for d in all_digraphs(3):
        for s in range(8):
            assert is_kernel_perfect(d, s) == oracles.oracle_is_kernel_perfect(d, mask_to_set(s))


def test_has_kernel_table_matches_search():
    for d in all_digraphs(3):
        table = _has_kernel_table(d)
        for s in range(8):
            from quasikernel.digraph import induced
            sub, _ = induced(d, s)
            assert bool(table[s]) == (find_kernel(sub).witness is not None)


def test_odd_free_digraphs_are_kernel_perfect(c4):
    assert odd_dicycle_free(c4)
    assert is_kernel_perfect(c4, c4.vertex_mask)


def test_is_kernel_perfect_budget():
    d = Digraph(17, tuple([0] * 17))
    with pytest.raises(BudgetExceededError):
        is_kernel_perfect(d, d.vertex_mask)


def test_kernel_perfect_number_golden(c3, c4):
    k, part = kernel_perfect_number(c3)
    assert k == 2
    assert part.parts == (mask_of([0, 1]), mask_of([2]))
    k4, part4 = kernel_perfect_number(c4)
    assert k4 == 1
    assert part4.parts == (c4.vertex_mask,)


@given(n4_codes)
@settings(max_examples=60)
def test_kernel_perfect_number_matches_oracle(code):
    d = digraph_from_code(4, code)
    k, part = kernel_perfect_number(d)
    assert k == oracles.oracle_kp_number(d)
    assert sum(p.bit_count() for p in part.parts) == d.n
    for p in part.parts:
        assert is_kernel_perfect(d, p)


def test_partition_budgets():
    big = Digraph(13, tuple([0] * 13))
    for fn in (kernel_perfect_number, chromatic_number, dichromatic_number):
        with pytest.raises(BudgetExceededError):
            fn(big)


def test_chromatic_and_dichromatic_match_oracles():
    for d in all_digraphs(3):
        assert chromatic_number(d) == oracles.oracle_chromatic(d)
        assert dichromatic_number(d) == oracles.oracle_dichromatic(d)


@given(n4_codes)
@settings(max_examples=60)
def test_number_chain_small(code):
    d = digraph_from_code(4, code)
    kp, _ = kernel_perfect_number(d)
    di = dichromatic_number(d)
    ch = chromatic_number(d)
    assert kp <= di <= ch


def test_empty_digraph_numbers():
    d = Digraph(0, ())
    k, part = kernel_perfect_number(d)
    assert k == 0 and part.parts == ()
    assert chromatic_number(d) == 0
    assert dichromatic_number(d) == 0
    assert find_kernel(d).witness == 0
    assert min_quasi_kernel(d).witness == 0


# ---------------------------------------------------------------------------
# heavy independent sets


def test_heavy_set_on_the_greedy_defeater():
    # the digraph that breaks per-step greedy rules; see the solver docstring
    d = dg(4, [(1, 0), (0, 2), (3, 1)])
    r = heavy_independent_set(d)
    assert n_minus_set(d, r).bit_count() >= n_plus_set(d, r).bit_count()


@given(n5_codes)
@settings(max_examples=80)
def test_heavy_set_properties(code):
    d = digraph_from_code(5, code)
    r = heavy_independent_set(d)
    check_set(d, r)
    assert n_minus_set(d, r).bit_count() >= n_plus_set(d, r).bit_count()
    und = r
    for v in vertices_of(r):
        und |= d.rows[v] | d.in_rows[v]
        assert not (d.rows[v] & r)
    assert und == d.vertex_mask


def test_heavy_budget():
    with pytest.raises(BudgetExceededError):
        heavy_independent_set(Digraph(21, tuple([0] * 21)))
