"""Deterministic digraph families and seeded random corpora.

Random digraphs use SplitMix64 as a counter-based generator so corpora are
reproducible bit-for-bit across platforms and reimplementations: arc (u, v)
is included iff the next 64-bit output r satisfies r * q < p * 2^64 for the
exact inclusion probability p/q, drawing in row-major (u, v) order with the
diagonal skipped.  Tournaments draw one word per unordered pair {u < v} and
orient u -> v on an even word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .digraph import Digraph, disjoint_union
from .exceptions import ParseError


class SplitMix64:
    """SplitMix64: a tiny, well-known 64-bit mixing generator."""

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int) -> None:
        self._state = seed & self._MASK

    def next_word(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & self._MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)


def cycle(n: int) -> Digraph:
    """Directed cycle 0 -> 1 -> ... -> n-1 -> 0 (n >= 2)."""
    if n < 2:
        raise ValueError(f"cycle needs n >= 2, got {n}")
    return Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Digraph:
    """Directed path 0 -> 1 -> ... -> n-1."""
    if n < 1:
        raise ValueError(f"path needs n >= 1, got {n}")
    return Digraph.from_arcs(n, [(i, i + 1) for i in range(n - 1)])


def edgeless(n: int) -> Digraph:
    if n < 0:
        raise ValueError(f"edgeless needs n >= 0, got {n}")
    return Digraph(n, (0,) * n)


def circulant_tournament(n: int) -> Digraph:
    """Rotational tournament on odd n: arcs i -> i+j (mod n), j = 1..(n-1)/2.

    Every vertex has in- and out-degree (n-1)/2.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"circulant tournament needs odd n >= 3, got {n}")
    half = (n - 1) // 2
    return Digraph.from_arcs(n, [(i, (i + j) % n) for i in range(n) for j in range(1, half + 1)])


def c3_power(k: int) -> Digraph:
    """k-fold triangle blowup of the single vertex.

    c3_power(0) is the one-vertex digraph; each further step replaces every
    vertex by a directed triangle and every arc by the complete set of arcs
    between the two triangles, so c3_power(k) has 3^k vertices.
    """
    if k < 0:
        raise ValueError(f"power must be >= 0, got {k}")
    from .reductions import c3_blowup  # local import to avoid a cycle

    d = Digraph(1, (0,))
    for _ in range(k):
        d, _ = c3_blowup(d)
    return d


def random_digraph(n: int, p: Fraction, seed: int) -> Digraph:
    """Each of the n(n-1) possible arcs independently with exact probability p."""
    if n < 0:
        raise ValueError(f"random digraph needs n >= 0, got {n}")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"arc probability must be in [0, 1], got {p}")
    rng = SplitMix64(seed)
    threshold_num = p.numerator << 64
    q = p.denominator
    rows = [0] * n
    for u in range(n):
        for v in range(n):
            if v == u:
                continue
            if rng.next_word() * q < threshold_num:
                rows[u] |= 1 << v
    return Digraph(n, tuple(rows))


def random_tournament(n: int, seed: int) -> Digraph:
    """One arc per unordered pair, orientation decided by the word's parity."""
    if n < 0:
        raise ValueError(f"random tournament needs n >= 0, got {n}")
    rng = SplitMix64(seed)
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.next_word() & 1 == 0:
                rows[u] |= 1 << v
            else:
                rows[v] |= 1 << u
    return Digraph(n, tuple(rows))


@dataclass(frozen=True)
class FamilySpec:
    """Parsed family expression; see parse_family for the grammar."""

    kind: str
    n: int | None = None
    power: int | None = None
    probability: Fraction | None = None
    seed: int | None = None
    members: tuple["FamilySpec", ...] = field(default=())


def make(spec: FamilySpec) -> Digraph:
    kind = spec.kind
    if kind == "cycle":
        return cycle(_want(spec.n, kind, "n"))
    if kind == "path":
        return path(_want(spec.n, kind, "n"))
    if kind == "edgeless":
        return edgeless(_want(spec.n, kind, "n"))
    if kind == "circulant_tournament":
        return circulant_tournament(_want(spec.n, kind, "n"))
    if kind == "c3_power":
        return c3_power(_want(spec.power, kind, "power"))
    if kind == "random":
        return random_digraph(
            _want(spec.n, kind, "n"),
            _want(spec.probability, kind, "probability"),
            _want(spec.seed, kind, "seed"),
        )
    if kind == "random_tournament":
        return random_tournament(_want(spec.n, kind, "n"), _want(spec.seed, kind, "seed"))
    if kind == "union":
        return union_family(spec.members)
    raise ValueError(f"unknown family kind {kind!r}")


def _want(value, kind: str, name: str):
    if value is None:
        raise ValueError(f"family {kind!r} needs parameter {name!r}")
    return value


def union_family(specs) -> Digraph:
    """Disjoint union of the family members, in order; empty gives n=0."""
    d = Digraph(0, ())
    for spec in specs:
        d = disjoint_union(d, make(spec))
    return d


def parse_family(text: str) -> FamilySpec:
    """Grammar: cycle:N | path:N | edgeless:N | circulant:N | c3pow:K
    | random:N:P/Q:SEED | random_tournament:N:SEED
    | union:MEMBER,MEMBER,...  (members are any non-union expression).
    """
    text = text.strip()
    head, sep, rest = text.partition(":")
    if head == "union":
        if not sep or not rest:
            raise ParseError("union needs at least one member, e.g. union:cycle:2,cycle:4")
        members = tuple(parse_family(part) for part in rest.split(","))
        if any(m.kind == "union" for m in members):
            raise ParseError("nested unions are not supported")
        return FamilySpec("union", members=members)
    args = rest.split(":") if sep else []
    if head in ("cycle", "path", "edgeless", "circulant"):
        kind = "circulant_tournament" if head == "circulant" else head
        return FamilySpec(kind, n=_int_arg(text, args, 1, 0))
    if head == "c3pow":
        return FamilySpec("c3_power", power=_int_arg(text, args, 1, 0))
    if head == "random":
        if len(args) != 3:
            raise ParseError(f"bad family expression {text!r}: expected random:N:P/Q:SEED")
        num, _, den = args[1].partition("/")
        try:
            prob = Fraction(int(num), int(den)) if den else None
        except (ValueError, ZeroDivisionError):
            prob = None
        if prob is None:
            raise ParseError(f"bad arc probability {args[1]!r}: expected P/Q")
        return FamilySpec("random", n=_int_only(text, args[0]), probability=prob, seed=_int_only(text, args[2]))
    if head == "random_tournament":
        if len(args) != 2:
            raise ParseError(f"bad family expression {text!r}: expected random_tournament:N:SEED")
        return FamilySpec("random_tournament", n=_int_only(text, args[0]), seed=_int_only(text, args[1]))
    raise ParseError(f"unknown family {head!r}")


def _int_arg(text: str, args: list[str], want: int, idx: int) -> int:
    if len(args) != want:
        raise ParseError(f"bad family expression {text!r}: expected {want} parameter(s)")
    return _int_only(text, args[idx])


def _int_only(text: str, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad family expression {text!r}: {token!r} is not an integer") from None
