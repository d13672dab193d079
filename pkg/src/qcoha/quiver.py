"""Quivers, dimension vectors, bilinear forms and the standard quiver transforms.

Dimension vectors are plain tuples of nonnegative integers aligned with
``Quiver.vertices``; every public function also accepts a ``{vertex: n}``
mapping (or a bare int for one-vertex quivers) and normalizes it through
:meth:`Quiver.dim`.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping, Sequence, Union

FRAMING_VERTEX = "∞"

DimLike = Union[int, Mapping[str, int], Sequence[int]]


class QuiverError(ValueError):
    """Malformed quiver data or a dimension vector over the wrong vertex set."""


class Quiver:
    """Finite quiver with loops and parallel arrows.

    Vertices are strings kept in lexicographic order; arrows keep their input order.
    """

    __slots__ = ("vertices", "arrows", "index")

    def __init__(self, vertices: Iterable[str], arrows: Iterable[tuple[str, str]] = ()):
        verts = [str(x) for x in vertices]
        if len(set(verts)) != len(verts):
            raise QuiverError(f"duplicate vertex ids in {verts}")
        self.vertices: tuple[str, ...] = tuple(sorted(verts))
        self.index = {name: k for k, name in enumerate(self.vertices)}
        arr = []
        for src, tgt in arrows:
            src, tgt = str(src), str(tgt)
            if src not in self.index or tgt not in self.index:
                raise QuiverError(f"arrow {src}->{tgt} has an undeclared endpoint")
            arr.append((src, tgt))
        self.arrows: tuple[tuple[str, str], ...] = tuple(arr)

    # -- basic data -----------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    def arrow_indices(self) -> list[tuple[int, int]]:
        return [(self.index[s], self.index[t]) for s, t in self.arrows]

    def loops(self, vertex: str) -> int:
        return sum(1 for s, t in self.arrows if s == t == vertex)

    def adjacency(self) -> list[list[int]]:
        """Matrix whose (i, j) entry counts arrows i -> j."""
        m = [[0] * self.n for _ in range(self.n)]
        for s, t in self.arrow_indices():
            m[s][t] += 1
        return m

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(t, s) for s, t in self.arrows])

    def dim(self, v: DimLike) -> tuple[int, ...]:
        """Normalize a dimension vector to a tuple in vertex order."""
        if isinstance(v, bool):
            raise QuiverError("boolean is not a dimension vector")
        if isinstance(v, int):
            if self.n != 1:
                raise QuiverError("a bare integer dimension needs a one-vertex quiver")
            out = (v,)
        elif isinstance(v, Mapping):
            extra = set(v) - set(self.vertices)
            if extra:
                raise QuiverError(f"dimension vector mentions unknown vertices {sorted(extra)}")
            out = tuple(int(v.get(name, 0)) for name in self.vertices)
        else:
            out = tuple(int(x) for x in v)
            if len(out) != self.n:
                raise QuiverError(f"dimension vector {out} does not match {self.n} vertices")
        if any(x < 0 for x in out):
            raise QuiverError(f"negative entry in dimension vector {out}")
        return out

    def dim_dict(self, v: DimLike) -> dict[str, int]:
        return {name: x for name, x in zip(self.vertices, self.dim(v)) if x}

    def delta(self, vertex: str) -> tuple[int, ...]:
        return tuple(int(name == vertex) for name in self.vertices)

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "arrows": [{"src": s, "tgt": t} for s, t in self.arrows]}

    @classmethod
    def from_json(cls, data: Union[str, Mapping]) -> "Quiver":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["vertices"], [(a["src"], a["tgt"]) for a in data.get("arrows", [])])
        except (KeyError, TypeError) as exc:
            raise QuiverError(f"bad quiver JSON: {exc}") from exc

    def __eq__(self, other) -> bool:
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self) -> int:
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        arr = ", ".join(f"{s}->{t}" for s, t in self.arrows)
        return f"Quiver({list(self.vertices)}, [{arr}])"


def jordan_quiver() -> Quiver:
    return loop_quiver(1)


def loop_quiver(g: int, vertex: str = "i") -> Quiver:
    return Quiver([vertex], [(vertex, vertex)] * g)


def a2_quiver() -> Quiver:
    return Quiver(["i", "j"], [("i", "j")])


# -- bilinear forms ------------------------------------------------------

def ringel_form(Q: Quiver, v: DimLike, w: DimLike) -> int:
    """<v,w> = v.w - sum over arrows h of v_{source} w_{target}."""
    v, w = Q.dim(v), Q.dim(w)
    return sum(a * b for a, b in zip(v, w)) - sum(v[s] * w[t] for s, t in Q.arrow_indices())


def euler_form(Q: Quiver, v: DimLike, w: DimLike) -> int:
    return ringel_form(Q, v, w) + ringel_form(Q, w, v)


def d_v(Q: Quiver, v: DimLike) -> int:
    v = Q.dim(v)
    return sum(x * x for x in v) - euler_form(Q, v, v) // 2


def d_vw(Q: Quiver, v: DimLike, w: DimLike) -> int:
    """Dimension of the smooth framed quiver variety: 2 v.w - (v,v)."""
    v, w = Q.dim(v), Q.dim(w)
    return 2 * sum(a * b for a, b in zip(v, w)) - euler_form(Q, v, v)


# -- framing -------------------------------------------------------------

@dataclass(frozen=True)
class FramedQuiver:
    """The one-point extension by a vertex carrying ``w_i`` arrows to each ``i``."""

    base: Quiver
    w: tuple[int, ...]
    quiver: Quiver

    def lift(self, v: DimLike, a: int | None = None) -> tuple[int, ...]:
        """v + a*delta_inf, with a defaulting to 1 when the framing is nonzero."""
        v = self.base.dim(v)
        if a is None:
            a = 1 if any(self.w) else 0
        d = dict(zip(self.base.vertices, v))
        d[FRAMING_VERTEX] = a
        return self.quiver.dim(d)


def framed_quiver(Q: Quiver, w: DimLike) -> FramedQuiver:
    if FRAMING_VERTEX in Q.index:
        raise QuiverError(f"vertex id {FRAMING_VERTEX!r} is reserved for the framing vertex")
    w = Q.dim(w)
    arrows = list(Q.arrows)
    for name, k in zip(Q.vertices, w):
        arrows.extend([(FRAMING_VERTEX, name)] * k)
    return FramedQuiver(Q, w, Quiver(Q.vertices + (FRAMING_VERTEX,), arrows))


def framed_euler_closed_form(Q: Quiver, w: DimLike, v: DimLike, a: int, v2: DimLike, a2: int,
                             framing_coefficient: int = 2) -> int:
    """Closed form of the framed Euler form in terms of the unframed one.

    The genuine form is (v,v')_Q + 2aa' - sum_i w_i (v_i a' + v'_i a).  Passing
    ``framing_coefficient=1`` gives the variant with a single aa' term, kept only
    to measure its disagreement with the genuine form.
    """
    w, v, v2 = Q.dim(w), Q.dim(v), Q.dim(v2)
    cross = sum(wi * (x * a2 + y * a) for wi, x, y in zip(w, v, v2))
    return euler_form(Q, v, v2) + framing_coefficient * a * a2 - cross


# -- transforms ----------------------------------------------------------

def double_quiver(Q: Quiver) -> Quiver:
    """Arrow list is the original arrows followed by their reversed partners, in order."""
    return Quiver(Q.vertices, list(Q.arrows) + [(t, s) for s, t in Q.arrows])


def graded_vertex(i: str, level: int) -> str:
    return f"{i}@{level}"


def graded_quiver(Q: Quiver, l_min: int, l_max: int) -> Quiver:
    """Level-graded quiver on I x [l_min, l_max].

    Original arrows go from level l to level l-1, reversed arrows stay in their level.
    """
    if l_min > l_max:
        raise QuiverError("empty level window")
    levels = range(l_min, l_max + 1)
    verts = [graded_vertex(i, l) for i in Q.vertices for l in levels]
    arrows = []
    for s, t in Q.arrows:
        for l in levels:
            if l - 1 >= l_min:
                arrows.append((graded_vertex(s, l), graded_vertex(t, l - 1)))
    for s, t in Q.arrows:
        for l in levels:
            arrows.append((graded_vertex(t, l), graded_vertex(s, l)))
    return Quiver(verts, arrows)


def bipartite_vertex(i: str, side: int) -> str:
    return f"{i}.{side}"


def bipartite_quiver(Q: Quiver) -> Quiver:
    """Quiver on I x {1,2}: an arrow h'_1 -> h''_2 per arrow h, plus i_1 -> i_2 per vertex.

    Arrow order: the arrows coming from Q first, then the vertex arrows.
    """
    verts = [bipartite_vertex(i, k) for i in Q.vertices for k in (1, 2)]
    arrows = [(bipartite_vertex(s, 1), bipartite_vertex(t, 2)) for s, t in Q.arrows]
    arrows += [(bipartite_vertex(i, 1), bipartite_vertex(i, 2)) for i in Q.vertices]
    out = Quiver(verts, arrows)
    if not is_acyclic(out):
        raise AssertionError("bipartite quiver has an oriented cycle")
    return out


def is_acyclic(Q: Quiver) -> bool:
    graph: dict[str, set[str]] = {name: set() for name in Q.vertices}
    for s, t in Q.arrows:
        if s == t:
            return False
        graph[t].add(s)
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError:
        return False
    return True


# -- compositions --------------------------------------------------------

COMPOSITION_LIMIT = 10**6


@dataclass(frozen=True)
class Composition:
    """Ordered tuple of nonzero dimension vectors; ``restricted`` means each part sits at one vertex."""

    parts: tuple[tuple[int, ...], ...]
    restricted: bool = False

    def __post_init__(self):
        if not self.parts:
            raise QuiverError("a composition has at least one part")
        for p in self.parts:
            if not any(p):
                raise QuiverError("zero part in composition")
            if self.restricted and sum(1 for x in p if x) != 1:
                raise QuiverError(f"part {p} is not concentrated at one vertex")

    @property
    def total(self) -> tuple[int, ...]:
        return tuple(map(sum, zip(*self.parts)))

    def __len__(self) -> int:
        return len(self.parts)


def _count_compositions(v: tuple[int, ...], restricted: bool) -> int:
    box = [range(x + 1) for x in v]
    counts: dict[tuple[int, ...], int] = {}
    for u in itertools.product(*box):
        if not any(u):
            counts[u] = 1
            continue
        total = 0
        for part in _parts_below(u, restricted):
            total += counts[tuple(a - b for a, b in zip(u, part))]
        counts[u] = total
    return counts[v]


def _parts_below(u: tuple[int, ...], restricted: bool):
    if restricted:
        for k, x in enumerate(u):
            for m in range(1, x + 1):
                yield tuple(m if j == k else 0 for j in range(len(u)))
    else:
        for part in itertools.product(*(range(x + 1) for x in u)):
            if any(part):
                yield part


def compositions(v: DimLike, restricted: bool, limit: int = COMPOSITION_LIMIT) -> list[Composition]:
    """All compositions of v, ordered by number of parts, then lexicographically decreasing.

    ``v`` is a tuple (or an int, read as a one-vertex dimension).
    """
    v = (v,) if isinstance(v, int) else tuple(v)
    if any(x < 0 for x in v):
        raise QuiverError("negative dimension vector")
    if not any(v):
        return []
    size = _count_compositions(v, restricted)
    if size > limit:
        raise QuiverError(f"{size} compositions of {v} exceed the limit {limit}")
    out: list[tuple[tuple[int, ...], ...]] = []

    def rec(rest, prefix):
        if not any(rest):
            out.append(tuple(prefix))
            return
        for part in _parts_below(rest, restricted):
            prefix.append(part)
            rec(tuple(a - b for a, b in zip(rest, part)), prefix)
            prefix.pop()

    rec(v, [])
    out.sort(key=lambda parts: (len(parts), tuple(tuple(-x for x in p) for p in parts)))
    return [Composition(parts, restricted) for parts in out]


def _as_vector_parts(parts) -> list[tuple[int, ...]]:
    if isinstance(parts, Composition):
        return list(parts.parts)
    return [(p,) if isinstance(p, int) else tuple(p) for p in parts]


def antidominant_leq(mu, nu) -> bool:
    """mu precedes nu iff every partial sum of mu dominates the matching partial sum of nu.

    Vector parts are compared componentwise. Totals must agree.
    """
    a, b = _as_vector_parts(mu), _as_vector_parts(nu)
    width = len(a[0]) if a else len(b[0])
    zero = (0,) * width
    tot_a = tuple(map(sum, zip(zero, *a)))
    tot_b = tuple(map(sum, zip(zero, *b)))
    if tot_a != tot_b:
        raise QuiverError("anti-dominant order compares compositions of the same total only")
    sa, sb = list(zero), list(zero)
    for k in range(max(len(a), len(b))):
        if k < len(a):
            sa = [x + y for x, y in zip(sa, a[k])]
        if k < len(b):
            sb = [x + y for x, y in zip(sb, b[k])]
        if any(x < y for x, y in zip(sa, sb)):
            return False
    return True


# -- stability characters --------------------------------------------------

GENERICITY_CAP = 10**7


def is_generic_character(Q: Quiver, theta: Sequence[int], v: DimLike, w: DimLike,
                         cap: int = GENERICITY_CAP) -> bool:
    """No u in the box 0 <= u <= v solves theta.u = 0 (u != 0) or theta.u = theta.v (u != v).

    The second equation is the framed one and only applies when w != 0.
    Implemented as a DP over partial sums that counts solutions up to two.
    """
    v, w = Q.dim(v), Q.dim(w)
    theta = tuple(int(x) for x in theta)
    if len(theta) != Q.n:
        raise QuiverError("character length does not match the vertex count")
    box = 1
    for x in v:
        box *= x + 1
    if box > cap:
        raise QuiverError(f"genericity box of size {box} exceeds the cap {cap}")
    sums = {0: 1}
    for th, x in zip(theta, v):
        nxt: dict[int, int] = {}
        for s, c in sums.items():
            for m in range(x + 1):
                key = s + th * m
                nxt[key] = min(2, nxt.get(key, 0) + c)
        sums = nxt
    if sums.get(0, 0) >= 2:
        return False
    if any(w):
        target = sum(th * x for th, x in zip(theta, v))
        if sums.get(target, 0) >= 2:
            return False
    return True
