"""Immutable digraphs as machine-word bit rows, plus the neighbourhood calculus.

Everything downstream (solvers, constructive pipelines, the sweep harness) is
a pure function over two value types defined here:

* ``Digraph``  -- a loop-free simple digraph on at most 63 vertices, stored as
  one out-adjacency bit row per vertex: bit ``j`` of ``rows[i]`` is set iff
  the arc ``i -> j`` exists.  Antiparallel pairs (directed 2-cycles) are
  allowed; parallel arcs and self-loops are not.
* vertex sets -- plain ``int`` bit masks over ``0 .. n-1``.

Distance is shortest directed path length.  Set neighbourhoods are the
distance-based ones:

* ``n_minus_set(D, S)``        = vertices at distance exactly 1 *to* S
  (never contains a member of S);
* ``n_minus_closed(D, S)``     = S plus the above (distance <= 1);
* ``n_minus_minus_closed(D,S)``= everything within distance 2 to S.

A vertex is a sink iff its out-degree is 0 and a source iff its in-degree
is 0; ``sources_not_sinks`` is the set the with-sources conjecture variant
discounts.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

from .exceptions import BudgetExceededError, ParseError

MAX_VERTICES = 63

ENUMERATE_ALL_BUDGET = 5
ENUMERATE_CANONICAL_BUDGET = 6
CANONICAL_FORM_BUDGET = 8


class Infinite(Enum):
    """Sentinel for unreachable vertex pairs in dist()."""

    INF = "inf"

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "INF"


INF = Infinite.INF


def mask_of(vertices: Iterable[int]) -> int:
    """Bit mask of an iterable of vertex indices."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    """Ascending tuple of the vertex indices in a mask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def expand_set(mask: int, embedding: tuple[int, ...]) -> int:
    """Map a vertex set of an induced subdigraph back to original labels."""
    out = 0
    for j, orig in enumerate(embedding):
        if mask >> j & 1:
            out |= 1 << orig
    return out


def compress_set(mask: int, embedding: tuple[int, ...]) -> int:
    """Map a vertex set given in original labels into induced labels.

    Every vertex of ``mask`` must appear in ``embedding``.
    """
    out = 0
    rest = mask
    for j, orig in enumerate(embedding):
        bit = 1 << orig
        if rest & bit:
            out |= 1 << j
            rest ^= bit
    if rest:
        raise ValueError("set contains vertices outside the embedding")
    return out


@dataclass(frozen=True)
class Digraph:
    """Loop-free digraph on ``n <= 63`` vertices with bit-row adjacency."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 0..{MAX_VERTICES}, got {self.n}")
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(rows)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(rows):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        if not 0 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 0..{MAX_VERTICES}, got {n}")
        rows = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if rows[u] >> v & 1:
                raise ValueError(f"duplicate arc ({u}, {v})")
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    @cached_property
    def in_rows(self) -> tuple[int, ...]:
        """Bit rows of the reversed digraph: bit j of in_rows[i] iff j -> i."""
        acc = [0] * self.n
        for u, row in enumerate(self.rows):
            bit = 1 << u
            while row:
                low = row & -row
                acc[low.bit_length() - 1] |= bit
                row ^= low
        return tuple(acc)

    @cached_property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def arc_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def has_arc(self, u: int, v: int) -> bool:
        _check_vertex(self, u)
        _check_vertex(self, v)
        return bool(self.rows[u] >> v & 1)

    def arcs(self) -> Iterator[tuple[int, int]]:
        """Arcs in lexicographic (tail, head) order."""
        for u, row in enumerate(self.rows):
            while row:
                low = row & -row
                yield u, low.bit_length() - 1
                row ^= low


def _check_vertex(d: Digraph, v: int) -> None:
    if not 0 <= v < d.n:
        raise ValueError(f"vertex {v} out of range for n={d.n}")


def check_set(d: Digraph, mask: int) -> None:
    """Reject masks with bits outside 0..n-1 (or negative masks)."""
    if mask < 0 or mask & ~d.vertex_mask:
        raise ValueError(f"vertex set {bin(mask)} has bits outside 0..{d.n - 1}")


# ---------------------------------------------------------------------------
# neighbourhoods and distance


def out_neighbors(d: Digraph, v: int) -> int:
    _check_vertex(d, v)
    return d.rows[v]


def in_neighbors(d: Digraph, v: int) -> int:
    _check_vertex(d, v)
    return d.in_rows[v]


def closed_out_neighbors(d: Digraph, v: int) -> int:
    _check_vertex(d, v)
    return d.rows[v] | (1 << v)


def closed_in_neighbors(d: Digraph, v: int) -> int:
    _check_vertex(d, v)
    return d.in_rows[v] | (1 << v)


def n_plus_set(d: Digraph, s: int) -> int:
    """Vertices at directed distance exactly 1 from S (excludes S itself)."""
    check_set(d, s)
    rows = d.rows
    acc = 0
    m = s
    while m:
        low = m & -m
        acc |= rows[low.bit_length() - 1]
        m ^= low
    return acc & ~s


def n_minus_set(d: Digraph, s: int) -> int:
    """Vertices at directed distance exactly 1 to S (excludes S itself)."""
    check_set(d, s)
    in_rows = d.in_rows
    acc = 0
    m = s
    while m:
        low = m & -m
        acc |= in_rows[low.bit_length() - 1]
        m ^= low
    return acc & ~s


def n_minus_closed(d: Digraph, s: int) -> int:
    """S together with every vertex at distance 1 to S."""
    check_set(d, s)
    in_rows = d.in_rows
    acc = s
    m = s
    while m:
        low = m & -m
        acc |= in_rows[low.bit_length() - 1]
        m ^= low
    return acc


def n_minus_minus_closed(d: Digraph, s: int) -> int:
    """Every vertex within directed distance 2 to S."""
    return n_minus_closed(d, n_minus_closed(d, s))


def dist(d: Digraph, u: int, v: int) -> int | Infinite:
    """Length of a shortest directed u->v path; INF when unreachable."""
    _check_vertex(d, u)
    _check_vertex(d, v)
    if u == v:
        return 0
    rows = d.rows
    seen = 1 << u
    frontier = seen
    target = 1 << v
    steps = 0
    while frontier:
        steps += 1
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= rows[low.bit_length() - 1]
            frontier ^= low
        if nxt & target:
            return steps
        frontier = nxt & ~seen
        seen |= nxt
    return INF


# ---------------------------------------------------------------------------
# predicates


def is_independent(d: Digraph, s: int) -> bool:
    """No arc joins two members of S (in either direction)."""
    check_set(d, s)
    rows = d.rows
    m = s
    while m:
        low = m & -m
        if rows[low.bit_length() - 1] & s:
            return False
        m ^= low
    return True


def is_acyclic_set(d: Digraph, s: int) -> bool:
    """The subdigraph induced by S has no directed cycle."""
    check_set(d, s)
    rows = d.rows
    m = s
    # peel vertices with no out-arc inside the remainder; a cycle survives
    while m:
        peeled = 0
        probe = m
        while probe:
            low = probe & -probe
            if rows[low.bit_length() - 1] & m == 0:
                peeled |= low
            probe ^= low
        if not peeled:
            return False
        m &= ~peeled
    return True


def is_sink_free(d: Digraph) -> bool:
    """Every vertex has out-degree at least 1."""
    return all(row for row in d.rows)


def sinks(d: Digraph) -> int:
    """Mask of vertices with out-degree 0."""
    m = 0
    for v, row in enumerate(d.rows):
        if not row:
            m |= 1 << v
    return m


def sources_not_sinks(d: Digraph) -> int:
    """Mask of vertices with in-degree 0 and out-degree at least 1."""
    m = 0
    in_rows = d.in_rows
    for v, row in enumerate(d.rows):
        if row and not in_rows[v]:
            m |= 1 << v
    return m


# ---------------------------------------------------------------------------
# constructions


def induced(d: Digraph, s: int) -> tuple[Digraph, tuple[int, ...]]:
    """Subdigraph induced by S plus the embedding (new index -> old vertex).

    Vertices are relabelled 0..|S|-1 in increasing original order, so
    ``embedding[j]`` is the original label of new vertex ``j``.
    """
    check_set(d, s)
    emb = vertices_of(s)
    rows = d.rows
    sub_rows = []
    for orig in emb:
        row = rows[orig] & s
        new_row = 0
        for j, other in enumerate(emb):
            if row >> other & 1:
                new_row |= 1 << j
        sub_rows.append(new_row)
    return Digraph(len(emb), tuple(sub_rows)), emb


def disjoint_union(d1: Digraph, d2: Digraph) -> Digraph:
    """Disjoint union; the second digraph's vertices are shifted by d1.n."""
    if d1.n + d2.n > MAX_VERTICES:
        raise ValueError(f"union on {d1.n + d2.n} vertices exceeds {MAX_VERTICES}")
    rows = d1.rows + tuple(r << d1.n for r in d2.rows)
    return Digraph(d1.n + d2.n, rows)


def reverse(d: Digraph) -> Digraph:
    """Reverse every arc."""
    return Digraph(d.n, d.in_rows)


# ---------------------------------------------------------------------------
# odd dicycles

_SPREAD: dict[int, int] = {0: 0}


def _spread(row: int) -> int:
    """Move bit w to bit 2w, memoized (rows repeat heavily across sweeps)."""
    try:
        return _SPREAD[row]
    except KeyError:
        acc = 0
        m = row
        while m:
            low = m & -m
            acc |= 1 << (2 * (low.bit_length() - 1))
            m ^= low
        _SPREAD[row] = acc
        return acc


def odd_dicycle_free(d: Digraph) -> bool:
    """True iff the digraph contains no directed cycle of odd length.

    Works on the parity double cover: node ``2v+p`` is "at v having walked a
    path of parity p"; an odd closed walk exists iff some ``2v`` reaches
    ``2v+1``, and any odd closed walk contains an odd dicycle.
    """
    n = d.n
    if n == 0:
        return True
    reach = [0] * (2 * n)
    for u, row in enumerate(d.rows):
        even = _spread(row)
        reach[2 * u] = even << 1  # parity 0 -> parity 1
        reach[2 * u + 1] = even  # parity 1 -> parity 0
    m = 2 * n
    for k in range(m):
        rk = reach[k]
        if not rk:
            continue
        bitk = 1 << k
        for i in range(m):
            if reach[i] & bitk:
                reach[i] |= rk
    for v in range(n):
        if reach[2 * v] >> (2 * v + 1) & 1:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration

# Adjacency codes pack the n*(n-1) possible arcs row-major: the arcs out of
# vertex u occupy bits u*(n-1) .. u*(n-1)+n-2, heads in increasing order with
# the diagonal skipped.


def _row_from_chunk(u: int, chunk: int) -> int:
    low = chunk & ((1 << u) - 1)
    return low | ((chunk >> u) << (u + 1))


def _chunk_from_row(u: int, row: int) -> int:
    low = row & ((1 << u) - 1)
    return low | ((row >> (u + 1)) << u)


def adjacency_code(d: Digraph) -> int:
    """Row-major arc-indicator integer; the label-order identity of d."""
    n = d.n
    code = 0
    for u, row in enumerate(d.rows):
        code |= _chunk_from_row(u, row) << (u * (n - 1))
    return code


def digraph_from_code(n: int, code: int) -> Digraph:
    """Inverse of adjacency_code."""
    if n < 0 or code < 0 or code >> (n * (n - 1) if n else 0):
        raise ValueError(f"adjacency code out of range for n={n}")
    w = n - 1
    m = (1 << w) - 1 if n else 0
    rows = tuple(_row_from_chunk(u, (code >> (u * w)) & m) for u in range(n))
    return Digraph(n, rows)


def canonical_form(d: Digraph) -> int:
    """Minimum adjacency code over all relabellings (isomorphism invariant)."""
    n = d.n
    if n > CANONICAL_FORM_BUDGET:
        raise BudgetExceededError(f"canonical form is exact only for n <= {CANONICAL_FORM_BUDGET}")
    if n <= 1:
        return adjacency_code(d)
    w = n - 1
    arcs = tuple(d.arcs())
    best = None
    for perm in itertools.permutations(range(n)):
        code = 0
        for u, v in arcs:
            pu = perm[u]
            pv = perm[v]
            code |= 1 << (pu * w + (pv if pv < pu else pv - 1))
        if best is None or code < best:
            best = code
    return best if best is not None else 0


def enumerate_digraphs(n: int, sink_free: bool = False, canonical: bool = False) -> Iterator[Digraph]:
    """All labeled digraphs on n vertices in increasing adjacency-code order.

    With ``sink_free=True`` only digraphs with no out-degree-0 vertex are
    produced (generated directly, not by filtering).  With ``canonical=True``
    only the least-code representative of each isomorphism class is yielded.
    The stream order is deterministic, so consumers may split work by index.
    """
    budget = ENUMERATE_CANONICAL_BUDGET if canonical else ENUMERATE_ALL_BUDGET
    if not 0 <= n <= budget:
        raise BudgetExceededError(f"enumeration budget is n <= {budget} (canonical={canonical})")

    def stream() -> Iterator[Digraph]:
        if n == 0:
            yield Digraph(0, ())
            return
        w = n - 1
        if sink_free:
            if n == 1:
                return
            # most-significant row chunk first keeps codes increasing
            for chunks in itertools.product(range(1, 1 << w), repeat=n):
                rows = tuple(_row_from_chunk(u, chunks[n - 1 - u]) for u in range(n))
                yield Digraph(n, rows)
        else:
            for code in range(1 << (n * w)):
                yield digraph_from_code(n, code)

    if not canonical:
        yield from stream()
        return
    for d in stream():
        if adjacency_code(d) == canonical_form(d):
            yield d


# ---------------------------------------------------------------------------
# text and JSON formats


def parse(text: str) -> Digraph:
    """Parse the line format: a vertex-count header, then one "u v" per arc.

    Blank lines are skipped and ``#`` starts a comment anywhere on a line.
    """
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            entries.append(line)
    if not entries:
        raise ParseError("missing header line with the vertex count")
    header = entries[0]
    try:
        n = int(header)
    except ValueError:
        raise ParseError(f"malformed header {header!r}: expected a vertex count") from None
    if not 0 <= n <= MAX_VERTICES:
        raise ParseError(f"vertex count must be in 0..{MAX_VERTICES}, got {n}")
    rows = [0] * n
    for line in entries[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"malformed arc line {line!r}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"malformed arc line {line!r}: expected two integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"arc ({u}, {v}) out of range for n={n}")
        if u == v:
            raise ParseError(f"self-loop at vertex {u}")
        if rows[u] >> v & 1:
            raise ParseError(f"duplicate arc ({u}, {v})")
        rows[u] |= 1 << v
    return Digraph(n, tuple(rows))


def serialize(d: Digraph) -> str:
    """Line format emitted with arcs in lexicographic order; round-trips."""
    lines = [str(d.n)]
    lines.extend(f"{u} {v}" for u, v in d.arcs())
    return "\n".join(lines) + "\n"


def digraph_to_json(d: Digraph) -> dict:
    return {"n": d.n, "arcs": [[u, v] for u, v in d.arcs()]}


def digraph_from_json(obj: object) -> Digraph:
    if not isinstance(obj, dict):
        raise ParseError("digraph JSON must be an object")
    try:
        n = obj["n"]
        arcs = obj["arcs"]
    except KeyError as e:
        raise ParseError(f"digraph JSON is missing key {e.args[0]!r}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("digraph JSON field 'n' must be an integer")
    if not isinstance(arcs, list):
        raise ParseError("digraph JSON field 'arcs' must be a list")
    pairs = []
    for item in arcs:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in item)):
            raise ParseError(f"malformed arc entry {item!r}")
        pairs.append((item[0], item[1]))
    if not 0 <= n <= MAX_VERTICES:
        raise ParseError(f"vertex count must be in 0..{MAX_VERTICES}, got {n}")
    try:
        return Digraph.from_arcs(n, pairs)
    except ValueError as e:
        raise ParseError(str(e)) from None


def loads_json(text: str) -> Digraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    return digraph_from_json(obj)


def dumps_json(d: Digraph) -> str:
    return json.dumps(digraph_to_json(d), separators=(",", ":"))


# ---------------------------------------------------------------------------
# partitions

PART_KINDS = ("kernel-perfect", "acyclic", "independent")


@dataclass(frozen=True)
class Partition:
    """Ordered partition of the vertex set into parts of a declared kind.

    Empty parts are permitted (the constructions pad single-part partitions).
    """

    parts: tuple[int, ...]
    kind: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if self.kind not in PART_KINDS:
            raise ValueError(f"unknown partition kind {self.kind!r}; expected one of {PART_KINDS}")


def check_partition(d: Digraph, partition: Partition) -> None:
    """Reject part families that overlap or fail to cover the vertex set."""
    acc = 0
    for i, part in enumerate(partition.parts):
        check_set(d, part)
        if part & acc:
            raise ValueError(f"partition parts overlap at part {i}")
        acc |= part
    if acc != d.vertex_mask:
        raise ValueError("partition parts do not cover the vertex set")
