"""Constructive quasi-kernel bounds from kernel-perfect partitions.

Three pipelines, each returning a verified witness:

* ``quasi_kernel_covering`` -- given a kernel-perfect set P, produce a
  quasi-kernel Q with P inside ``n_minus_closed(D, Q)`` and Q disjoint from
  ``n_minus_set(D, P)``.  Method: grow P by repeatedly absorbing the
  smallest-index vertex with no out-arc into the grown set (each absorbed
  vertex is a sink of the grown induced subdigraph, which preserves
  kernel-perfectness), until every outside vertex has an arc into the grown
  set; then a kernel of the grown induced subdigraph covers the grown set in
  one step and everything else in two.

* ``small_qk_from_partition`` -- a sink-free digraph split into k >= 2
  kernel-perfect parts has a quasi-kernel of size at most (k-1)/k * n.  The
  first part is grown as above, a kernel K of the grown part is shrunk to a
  core with the same in-neighbourhood (so the core is at most half of the
  core-plus-in-neighbourhood slab), and the leftover kernel vertices plus
  the remainder of the other parts are handled by whichever is cheaper:
  covering one remaining part inside the remainder, or taking the core plus
  the leftover kernel vertices that can step into the remainder.  Both
  candidate shapes are quasi-kernels unconditionally; the branch test just
  picks the one whose size the counting argument controls.

* ``small_qk_with_sources`` -- with s source-not-sink vertices the bound
  relaxes to n - s/k.  Sources are pruned to a single out-arc, the rest of
  the digraph is blown up so that a vertex fed by many sources becomes a
  huge block, and a coverage-maximizing quasi-kernel of the blowup is
  projected back: blocks its closed in-neighbourhood misses are exactly the
  vertices whose sources must be taken wholesale.  The witness is finally
  transferred back to the unpruned digraph.

``large_qk_from_partition`` is the coverage-side counterpart: covering the
largest part yields ``n_minus_closed`` of size at least n/k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .digraph import (
    Digraph,
    Partition,
    check_partition,
    check_set,
    compress_set,
    expand_set,
    induced,
    is_sink_free,
    iter_bits,
    n_minus_closed,
    n_minus_set,
    sources_not_sinks,
    vertices_of,
)
from .exceptions import PostconditionViolationError
from .reductions import block_coverage_split, project_blowup_qk, weighted_blowup
from .solvers import (
    SolveResult,
    find_kernel,
    is_kernel_perfect,
    is_quasi_kernel,
    maximalize_quasi_kernel,
)


def extend_to_dominating_kp_set(d: Digraph, p: int, check_pre: bool = True) -> int:
    """Grow a kernel-perfect set until every outside vertex has an arc into it.

    Vertices are absorbed one at a time, smallest index first, and a vertex
    is eligible only while it has no out-arc into the grown set -- it joins
    as a sink of the grown induced subdigraph, so kernel-perfectness is
    preserved without re-checking.  Consequently the grown set never meets
    ``n_minus_set(d, p)``.
    """
    check_set(d, p)
    if check_pre and not is_kernel_perfect(d, p):
        raise ValueError("input set is not kernel-perfect")
    rows = d.rows
    cur = p
    outside = d.vertex_mask & ~p
    while True:
        probe = outside
        added = False
        while probe:
            low = probe & -probe
            if rows[low.bit_length() - 1] & cur == 0:
                cur |= low
                outside ^= low
                added = True
                break
            probe ^= low
        if not added:
            break
    if n_minus_closed(d, cur) != d.vertex_mask:
        raise PostconditionViolationError("grown set is not dominating")
    if (cur & ~p) & n_minus_set(d, p):
        raise PostconditionViolationError("grown set leaked into the in-neighbourhood of p")
    return cur


def quasi_kernel_covering(d: Digraph, p: int, check_pre: bool = True) -> int:
    """Quasi-kernel Q with p inside n_minus_closed(d, Q) and Q disjoint from
    n_minus_set(d, p); p must be kernel-perfect."""
    ext = extend_to_dominating_kp_set(d, p, check_pre=check_pre)
    sub, emb = induced(d, ext)
    kres = find_kernel(sub)
    if kres.witness is None:
        raise PostconditionViolationError("kernel-perfect grown set has no kernel; table or growth bug")
    q = expand_set(kres.witness, emb)
    if not is_quasi_kernel(d, q):
        raise PostconditionViolationError("covering produced a non-quasi-kernel")
    if p & ~n_minus_closed(d, q):
        raise PostconditionViolationError("covering left part of p undominated")
    if q & n_minus_set(d, p):
        raise PostconditionViolationError("covering witness meets the in-neighbourhood of p")
    return q


@dataclass(frozen=True)
class SmallQkTrace:
    """Audit trail of small_qk_from_partition.

    kernel        -- kernel of the grown first part;
    core          -- minimal subset of the kernel with the same in-neighbourhood;
    refined_parts -- the reshuffled partition (leftover kernel vertices,
                     in-neighbourhood slab plus core, then the shrunk parts);
    remainder     -- everything outside the slab part;
    branch        -- "part:i" when part i was covered inside the remainder,
                     "otherwise" for the core-plus-steppers shape;
    result        -- the verified quasi-kernel.
    """

    kernel: int
    core: int
    refined_parts: tuple[int, ...]
    remainder: int
    branch: str
    result: int

    def to_json(self) -> dict:
        return {
            "kernel": list(vertices_of(self.kernel)),
            "core": list(vertices_of(self.core)),
            "refined_parts": [list(vertices_of(p)) for p in self.refined_parts],
            "remainder": list(vertices_of(self.remainder)),
            "branch": self.branch,
            "result": list(vertices_of(self.result)),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _checked_parts(d: Digraph, partition: Partition, check_parts: bool) -> list[int]:
    check_partition(d, partition)
    parts = list(partition.parts)
    while len(parts) < 2:
        parts.append(0)
    if check_parts:
        for i, part in enumerate(parts):
            if not is_kernel_perfect(d, part):
                raise ValueError(f"part {i} is not kernel-perfect")
    return parts


def small_qk_from_partition(d: Digraph, partition: Partition, check_parts: bool = True) -> SmallQkTrace:
    """Quasi-kernel of size <= (k-1)/k * n from k kernel-perfect parts.

    Requires a sink-free digraph: the "otherwise" shape covers a leftover
    kernel vertex by following one of its out-arcs, which must exist.
    Partitions with fewer than two parts are padded with empty parts.
    """
    if not is_sink_free(d):
        raise ValueError("construction requires a sink-free digraph (no out-degree-0 vertex)")
    parts = _checked_parts(d, partition, check_parts)
    k = len(parts)
    n = d.n
    rows = d.rows

    ext = extend_to_dominating_kp_set(d, parts[0], check_pre=False)
    shrunk = [parts[i] & ~ext for i in range(1, k)]

    sub, emb = induced(d, ext)
    kres = find_kernel(sub)
    if kres.witness is None:
        raise PostconditionViolationError("grown kernel-perfect part has no kernel")
    kernel = expand_set(kres.witness, emb)

    in_of_kernel = n_minus_set(d, kernel)
    core = kernel
    for v in reversed(vertices_of(kernel)):
        cand = core ^ (1 << v)
        if n_minus_set(d, cand) == in_of_kernel:
            core = cand

    leftover = kernel & ~core
    slab = in_of_kernel | core
    refined = [leftover, slab] + [s & ~in_of_kernel for s in shrunk]
    if sum(p.bit_count() for p in refined) != n or _union(refined) != d.vertex_mask:
        raise PostconditionViolationError("refined parts do not partition the vertex set")
    remainder = d.vertex_mask & ~slab

    branch = "otherwise"
    result = None
    w_size = remainder.bit_count()
    for i in range(2, k + 1):
        part_i = refined[i]
        if k * (n_minus_set(d, part_i) & leftover).bit_count() >= w_size:
            sub_w, emb_w = induced(d, remainder)
            q_w = quasi_kernel_covering(sub_w, compress_set(part_i, emb_w), check_pre=False)
            q_w = expand_set(q_w, emb_w)
            result = q_w | (core & ~n_minus_set(d, q_w))
            branch = f"part:{i}"
            break
    if result is None:
        steppers = 0
        for v in iter_bits(leftover):
            if rows[v] & remainder:
                steppers |= 1 << v
        result = core | steppers

    if not is_quasi_kernel(d, result):
        raise PostconditionViolationError("construction produced a non-quasi-kernel")
    if k * result.bit_count() > (k - 1) * n:
        raise PostconditionViolationError(
            f"witness of size {result.bit_count()} exceeds (k-1)/k * n for k={k}, n={n}; "
            "potential counterexample")
    return SmallQkTrace(kernel, core, tuple(refined), remainder, branch, result)


def _union(masks) -> int:
    acc = 0
    for m in masks:
        acc |= m
    return acc


def large_qk_from_partition(d: Digraph, partition: Partition, check_parts: bool = True) -> SolveResult:
    """Quasi-kernel whose n_minus_closed has size >= n/k: cover the largest
    part (first largest on ties)."""
    parts = _checked_parts(d, partition, check_parts)
    k = len(parts)
    largest = max(parts, key=lambda p: p.bit_count())
    q = quasi_kernel_covering(d, largest, check_pre=False)
    objective = n_minus_closed(d, q).bit_count()
    if k * objective < d.n:
        raise PostconditionViolationError(
            f"coverage {objective} below n/k for k={k}, n={d.n}; potential counterexample")
    return SolveResult(q, objective, True)


def small_qk_with_sources(d: Digraph, partition: Partition, check_parts: bool = True) -> SolveResult:
    """Quasi-kernel of size <= n - s/k where s counts source-not-sink
    vertices; sinks are allowed.

    Pipeline: keep one out-arc per source (the smallest-index one); blow up
    the sourceless core so a vertex fed by c sources becomes a block of
    C*c + 1 copies with C = k*t + 1 (t = core size); take a
    coverage-maximizing quasi-kernel of the blowup, grown to a maximal
    independent set so blocks behave all-or-nothing; project it back; every
    core vertex whose block the projection fails to reach in one step gets
    its sources instead.  C is large enough that the counting argument
    closes by integrality, and the result transfers to the unpruned digraph
    after dropping sources whose restored arcs land in the witness.
    """
    parts = _checked_parts(d, partition, check_parts)
    k = len(parts)
    n = d.n

    source_mask = sources_not_sinks(d)
    s = source_mask.bit_count()
    core_mask = d.vertex_mask & ~source_mask
    t = core_mask.bit_count()

    pruned_rows = list(d.rows)
    for v in iter_bits(source_mask):
        row = pruned_rows[v]
        pruned_rows[v] = row & -row
    d0 = Digraph(n, tuple(pruned_rows))

    sub_a, emb_a = induced(d0, core_mask)
    c_factor = k * t + 1
    mult = tuple(c_factor * (d0.in_rows[a] & source_mask).bit_count() + 1 for a in emb_a)
    blown, bmap = weighted_blowup(sub_a, mult)

    blown_parts = []
    for part in parts:
        acc = 0
        for v in iter_bits(part & core_mask):
            acc |= bmap.blocks[emb_a.index(v)]
        blown_parts.append(acc)
    lres = large_qk_from_partition(blown, Partition(tuple(blown_parts), partition.kind),
                                   check_parts=False)
    qb = maximalize_quasi_kernel(blown, lres.witness)
    for block in bmap.blocks:
        hit = block & qb
        if hit and hit != block:
            raise PostconditionViolationError("maximal quasi-kernel took part of a block")

    q_core_sub = project_blowup_qk(bmap, qb)
    _, missed_sub = block_coverage_split(bmap, qb)
    q_core = expand_set(q_core_sub, emb_a)
    missed = expand_set(missed_sub, emb_a)

    extras = 0
    for a in iter_bits(missed):
        extras |= d0.in_rows[a] & source_mask
    witness0 = q_core | extras
    if not is_quasi_kernel(d0, witness0):
        raise PostconditionViolationError("projected witness fails on the pruned digraph")

    drop = 0
    for v in iter_bits(witness0 & source_mask):
        if d.rows[v] & witness0 & ~(1 << v):
            drop |= 1 << v
    witness = witness0 & ~drop
    if not is_quasi_kernel(d, witness):
        raise PostconditionViolationError("witness fails on the original digraph")
    if k * witness.bit_count() > k * n - s:
        raise PostconditionViolationError(
            f"witness of size {witness.bit_count()} exceeds n - s/k for k={k}, n={n}, s={s}; "
            "potential counterexample")
    return SolveResult(witness, witness.bit_count(), True)
