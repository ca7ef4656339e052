"""Ordered simplicial complexes, constructions, and manifold validation.

Vertices are nonnegative ints.  A complex carries an integer rank per
vertex; inside every simplex the ranks are strictly increasing, and simplex
tuples are always stored in rank order.  Only the relative order within
simplices ever matters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    BoundaryNotFull,
    EmptyBoundary,
    NeedsSubdivision,
    NotPseudoManifold,
    OrderingViolation,
    TieInSimplex,
)

Simplex = Tuple[int, ...]


class OrderedComplex:
    """Vertex-ordered simplicial complex, closed under faces."""

    def __init__(
        self,
        simplices_by_dim: Mapping[int, Sequence[Simplex]],
        rank: Mapping[int, int],
        labels: Optional[Mapping[int, str]] = None,
    ) -> None:
        self.rank: Dict[int, int] = dict(rank)
        self.simplices_by_dim: Dict[int, Tuple[Simplex, ...]] = {
            k: tuple(sorted(set(map(tuple, sims))))
            for k, sims in simplices_by_dim.items()
            if sims
        }
        self.labels: Dict[int, str] = dict(labels) if labels else {}
        self._simplex_set = frozenset(
            s for sims in self.simplices_by_dim.values() for s in sims
        )
        self._index: Dict[int, Dict[Simplex, int]] = {}
        self._check()

    def _check(self) -> None:
        for k, sims in self.simplices_by_dim.items():
            for s in sims:
                if len(s) != k + 1:
                    raise ValueError(f"simplex {s} filed under dimension {k}")
                ranks = [self.rank[v] for v in s]
                if any(a >= b for a, b in zip(ranks, ranks[1:])):
                    raise TieInSimplex(f"ranks not strictly increasing in {s}")
                if k > 0:
                    for face in itertools.combinations(s, k):
                        if face not in self._simplex_set:
                            raise ValueError(f"face {face} of {s} missing")

    # -- basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self.simplices_by_dim, default=-1)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(s[0] for s in self.simplices_by_dim.get(0, ()))

    @property
    def vertex_count(self) -> int:
        return len(self.simplices_by_dim.get(0, ()))

    def simplices(self, k: int) -> Tuple[Simplex, ...]:
        return self.simplices_by_dim.get(k, ())

    def all_simplices(self) -> Iterable[Simplex]:
        for k in sorted(self.simplices_by_dim):
            yield from self.simplices_by_dim[k]

    def has_simplex(self, s: Simplex) -> bool:
        return tuple(s) in self._simplex_set

    def index(self, k: int) -> Dict[Simplex, int]:
        """Position of each k-simplex in the canonical (sorted) enumeration."""
        if k not in self._index:
            self._index[k] = {s: j for j, s in enumerate(self.simplices(k))}
        return self._index[k]

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.simplices(k)) for k in range(self.dim + 1))

    def euler(self) -> int:
        return sum((-1) ** k * len(self.simplices(k)) for k in range(self.dim + 1))

    def sort_simplex(self, vertices: Iterable[int]) -> Simplex:
        """Order a vertex set by rank, rejecting rank ties."""
        out = tuple(sorted(set(vertices), key=lambda v: (self.rank[v], v)))
        ranks = [self.rank[v] for v in out]
        if any(a == b for a, b in zip(ranks, ranks[1:])):
            raise TieInSimplex(f"ranks tie in {out}")
        return out

    def __repr__(self) -> str:
        return f"OrderedComplex(f={self.f_vector()})"


def build_complex(
    maximal_simplices: Iterable[Sequence[int]],
    rank: Optional[Mapping[int, int]] = None,
    labels: Optional[Mapping[int, str]] = None,
) -> OrderedComplex:
    """Close the given simplices under faces; default rank is the vertex id."""
    maximal = [tuple(s) for s in maximal_simplices]
    verts = sorted({v for s in maximal for v in s})
    if rank is None:
        rank = {v: v for v in verts}
    else:
        rank = dict(rank)
        for v in verts:
            rank.setdefault(v, v)
    sorted_maximal = []
    for s in maximal:
        t = tuple(sorted(set(s), key=lambda v: rank[v]))
        if len(t) != len(s):
            raise TieInSimplex(f"repeated vertex in simplex {s}")
        ranks = [rank[v] for v in t]
        if any(a == b for a, b in zip(ranks, ranks[1:])):
            raise TieInSimplex(f"ranks tie in simplex {s}")
        sorted_maximal.append(t)
    by_dim: Dict[int, set] = {}
    for s in sorted_maximal:
        for r in range(1, len(s) + 1):
            for face in itertools.combinations(s, r):
                by_dim.setdefault(r - 1, set()).add(face)
    return OrderedComplex(by_dim, {v: rank[v] for v in verts}, labels)


class SimplicialMap:
    """Weakly order preserving simplicial map between ordered complexes."""

    def __init__(
        self,
        source: OrderedComplex,
        target: OrderedComplex,
        vertex_map: Mapping[int, int],
    ) -> None:
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        self._check()

    def _check(self) -> None:
        rank_t = self.target.rank
        for s in self.source.all_simplices():
            img = [self.vertex_map[v] for v in s]
            ranks = [rank_t[w] for w in img]
            if any(a > b for a, b in zip(ranks, ranks[1:])):
                raise ValueError(f"map not order preserving on {s}")
            dedup = self.image(s)
            if not self.target.has_simplex(dedup):
                raise ValueError(f"image {dedup} of {s} is not a target simplex")

    def image(self, s: Simplex) -> Simplex:
        """Image simplex with repeats deleted."""
        img = [self.vertex_map[v] for v in s]
        out = [img[0]]
        for w in img[1:]:
            if w != out[-1]:
                out.append(w)
        return tuple(out)

    def nondegenerate_image(self, s: Simplex) -> Optional[Simplex]:
        """Image simplex, or None when the image is degenerate."""
        img = tuple(self.vertex_map[v] for v in s)
        return img if len(set(img)) == len(img) else None

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """self after inner (inner.source -> self.target)."""
        vm = {v: self.vertex_map[w] for v, w in inner.vertex_map.items()}
        return SimplicialMap(inner.source, self.target, vm)

    def __repr__(self) -> str:
        return f"SimplicialMap({self.source!r} -> {self.target!r})"


def identity_map(x: OrderedComplex) -> SimplicialMap:
    return SimplicialMap(x, x, {v: v for v in x.vertices})


class ComplexPair:
    """An ambient complex with a face-closed subcomplex."""

    def __init__(self, ambient: OrderedComplex, sub: Iterable[Simplex]) -> None:
        self.ambient = ambient
        self.sub = frozenset(map(tuple, sub))
        for s in self.sub:
            if not ambient.has_simplex(s):
                raise ValueError(f"sub simplex {s} not in ambient")
            if len(s) > 1:
                for face in itertools.combinations(s, len(s) - 1):
                    if face not in self.sub:
                        raise ValueError(f"sub not face-closed at {s}")
        self.sub_vertices = frozenset(s[0] for s in self.sub if len(s) == 1)

    def in_sub(self, s: Simplex) -> bool:
        return tuple(s) in self.sub

    def relative_simplices(self, k: int) -> Tuple[Simplex, ...]:
        return tuple(s for s in self.ambient.simplices(k) if s not in self.sub)

    def sub_complex(self) -> OrderedComplex:
        by_dim: Dict[int, List[Simplex]] = {}
        for s in self.sub:
            by_dim.setdefault(len(s) - 1, []).append(s)
        rank = {v: self.ambient.rank[v] for v in self.sub_vertices}
        return OrderedComplex(by_dim, rank)

    def __repr__(self) -> str:
        return f"ComplexPair(ambient={self.ambient!r}, |sub|={len(self.sub)})"


def absolute_pair(x: OrderedComplex) -> ComplexPair:
    return ComplexPair(x, ())


# -- manifolds -----------------------------------------------------------


@dataclass(frozen=True)
class ManifoldDiagnosis:
    pseudo_manifold: bool
    boundary_full: bool
    ordering_ok: bool
    orientable: bool
    problems: Tuple[str, ...]


class ManifoldPair:
    """A pseudo-manifold with boundary subcomplex and optional orientation."""

    def __init__(
        self,
        pair: ComplexPair,
        n: int,
        orientation: Optional[Mapping[Simplex, int]],
        boundary_full: bool,
        ordering_ok: bool,
    ) -> None:
        self.pair = pair
        self.n = n
        self.orientation = dict(orientation) if orientation is not None else None
        self.boundary_full = boundary_full
        self.ordering_ok = ordering_ok
        self._boundary_cache: Optional[OrderedComplex] = None

    @property
    def complex(self) -> OrderedComplex:
        return self.pair.ambient

    @property
    def fundamental(self) -> Tuple[Simplex, ...]:
        return self.pair.ambient.simplices(self.n)

    @property
    def closed(self) -> bool:
        return not self.pair.sub

    @property
    def orientable(self) -> bool:
        return self.orientation is not None

    def boundary_complex(self) -> OrderedComplex:
        if not self.pair.sub:
            raise EmptyBoundary("manifold is closed")
        if self._boundary_cache is None:
            self._boundary_cache = self.pair.sub_complex()
        return self._boundary_cache

    def __repr__(self) -> str:
        kind = "closed" if self.closed else "bounded"
        return f"ManifoldPair(n={self.n}, {kind}, f={self.complex.f_vector()})"


def _coface_counts(x: OrderedComplex, n: int) -> Dict[Simplex, List[Simplex]]:
    if n == 0:
        return {}
    cofaces: Dict[Simplex, List[Simplex]] = {s: [] for s in x.simplices(n - 1)}
    for top in x.simplices(n):
        for face in itertools.combinations(top, n):
            cofaces[face].append(top)
    return cofaces


def _orient(x: OrderedComplex, n: int, interior: List[Simplex],
            cofaces: Dict[Simplex, List[Simplex]]) -> Optional[Dict[Simplex, int]]:
    """Propagate compatible orientations; None when nonorientable."""
    sign: Dict[Simplex, int] = {}
    adjacency: Dict[Simplex, List[Tuple[Simplex, int]]] = {s: [] for s in x.simplices(n)}
    for face in interior:
        a, b = cofaces[face]
        ja = a.index(next(v for v in a if v not in face))
        jb = b.index(next(v for v in b if v not in face))
        rel = -((-1) ** (ja + jb))
        adjacency[a].append((b, rel))
        adjacency[b].append((a, rel))
    for seed in x.simplices(n):
        if seed in sign:
            continue
        sign[seed] = 1
        queue = [seed]
        while queue:
            cur = queue.pop()
            for nxt, rel in adjacency[cur]:
                want = sign[cur] * rel
                if nxt in sign:
                    if sign[nxt] != want:
                        return None
                else:
                    sign[nxt] = want
                    queue.append(nxt)
    return sign


def validate_manifold(
    x,
    n: Optional[int] = None,
    *,
    boundary="auto",
    orientation="auto",
    require_full: bool = True,
    require_ordering: bool = True,
) -> ManifoldPair:
    """Check the manifold-pair conditions and assemble a ManifoldPair.

    Raises NotPseudoManifold for structural failures.  Fullness and the
    boundary-vertices-first rank condition raise NeedsSubdivision (one
    barycentric subdivision always repairs both) unless the corresponding
    require_* flag is off, in which case the defect is recorded on the
    result.
    """
    if isinstance(x, ComplexPair):
        given_sub = x.sub
        x = x.ambient
        if boundary == "auto":
            boundary = given_sub
    if n is None:
        n = x.dim
    if x.dim != n:
        raise NotPseudoManifold(f"complex has dimension {x.dim}, expected {n}")
    top_faces = set()
    for top in x.simplices(n):
        for r in range(1, n + 1):
            top_faces.update(itertools.combinations(top, r))
    for k in range(n):
        for s in x.simplices(k):
            if s not in top_faces:
                raise NotPseudoManifold(f"simplex {s} is not a face of any top simplex")
    cofaces = _coface_counts(x, n)
    computed_boundary = []
    interior = []
    for face, tops in cofaces.items():
        if len(tops) == 1:
            computed_boundary.append(face)
        elif len(tops) == 2:
            interior.append(face)
        else:
            raise NotPseudoManifold(f"{face} has {len(tops)} top cofaces")
    sub: set = set()
    for s in computed_boundary:
        for r in range(1, len(s) + 1):
            sub.update(itertools.combinations(s, r))
    if boundary != "auto":
        if set(map(tuple, boundary)) != sub:
            raise NotPseudoManifold("declared boundary differs from the computed one")
    pair = ComplexPair(x, sub)

    problems: List[str] = []
    boundary_full = True
    for s in x.all_simplices():
        if s not in pair.sub and all(v in pair.sub_vertices for v in s):
            boundary_full = False
            problems.append(f"boundary not full at {s}")
            break
    ordering_ok = True
    for s in x.all_simplices():
        seen_interior = False
        for v in s:
            if v in pair.sub_vertices:
                if seen_interior:
                    ordering_ok = False
                    problems.append(f"boundary vertex after interior vertex in {s}")
                    break
            else:
                seen_interior = True
        if not ordering_ok:
            break
    if require_full and not boundary_full:
        raise NeedsSubdivision([p for p in problems if "full" in p])
    if require_ordering and not ordering_ok:
        raise NeedsSubdivision([p for p in problems if "ordering" in p or "vertex" in p])

    if orientation == "auto":
        orient = _orient(x, n, interior, cofaces)
    elif orientation is None:
        orient = None
    else:
        orient = dict(orientation)
        for face in interior:
            a, b = cofaces[face]
            ja = a.index(next(v for v in a if v not in face))
            jb = b.index(next(v for v in b if v not in face))
            if orient[a] * (-1) ** ja + orient[b] * (-1) ** jb != 0:
                raise NotPseudoManifold(f"orientation signs do not cancel at {face}")
    return ManifoldPair(pair, n, orient, boundary_full, ordering_ok)


def diagnose_manifold(x, n: Optional[int] = None) -> ManifoldDiagnosis:
    try:
        m = validate_manifold(x, n, require_full=False, require_ordering=False)
    except NotPseudoManifold as e:
        return ManifoldDiagnosis(False, False, False, False, (str(e),))
    problems = []
    if not m.boundary_full:
        problems.append("boundary not full")
    if not m.ordering_ok:
        problems.append("boundary-vertices-first ordering fails")
    return ManifoldDiagnosis(True, m.boundary_full, m.ordering_ok,
                             m.orientable, tuple(problems))


# -- constructions -------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    complex: OrderedComplex
    to_base: SimplicialMap
    vertex_of: Dict[Simplex, int] = field(repr=False)
    simplex_of: Dict[int, Simplex] = field(repr=False)


def barycentric_subdivide(x: OrderedComplex) -> Subdivision:
    """First barycentric subdivision with the canonical dimension ranks.

    New vertices are the simplices of x, ranked by dimension; simplices are
    flags of faces.  The returned map sends each barycenter to the maximum
    vertex of its underlying simplex.
    """
    cells = sorted(x.all_simplices(), key=lambda s: (len(s), s))
    vertex_of = {s: j for j, s in enumerate(cells)}
    simplex_of = {j: s for s, j in vertex_of.items()}
    rank = {j: len(simplex_of[j]) - 1 for j in simplex_of}
    maximal = []
    coface_count = {s: 0 for s in cells}
    for s in cells:
        if len(s) > 1:
            for face in itertools.combinations(s, len(s) - 1):
                coface_count[face] += 1
    top = [s for s in cells if coface_count[s] == 0]
    for s in top:
        for perm in itertools.permutations(s):
            flag = []
            for r in range(1, len(perm) + 1):
                flag.append(vertex_of[tuple(sorted(perm[:r]))])
            maximal.append(tuple(flag))
    sd = build_complex(maximal, rank)
    b = SimplicialMap(sd, x, {j: simplex_of[j][-1] for j in simplex_of})
    return Subdivision(sd, b, vertex_of, simplex_of)


@dataclass(frozen=True)
class Cone:
    pair: ComplexPair
    apex: int
    base: OrderedComplex

    @property
    def complex(self) -> OrderedComplex:
        return self.pair.ambient


def cone(x: OrderedComplex) -> Cone:
    """Cone with the apex ranked after every vertex of the base."""
    apex = max(x.vertices) + 1
    rank = dict(x.rank)
    rank[apex] = max(rank.values()) + 1
    by_dim: Dict[int, List[Simplex]] = {0: [(apex,)]}
    for s in x.all_simplices():
        by_dim.setdefault(len(s) - 1, []).append(s)
        by_dim.setdefault(len(s), []).append(s + (apex,))
    cx = OrderedComplex(by_dim, rank)
    return Cone(ComplexPair(cx, x.all_simplices()), apex, x)


@dataclass(frozen=True)
class SuspensionComplex:
    complex: OrderedComplex
    base: OrderedComplex
    upper: int
    lower: int


def suspension(x: OrderedComplex) -> SuspensionComplex:
    """Union of an upper cone (vertex ranked last) and a lower cone (first)."""
    lower = max(x.vertices) + 1
    upper = lower + 1
    rank = dict(x.rank)
    rank[lower] = min(x.rank.values()) - 1
    rank[upper] = max(x.rank.values()) + 1
    by_dim: Dict[int, List[Simplex]] = {0: [(lower,), (upper,)]}
    for s in x.all_simplices():
        by_dim.setdefault(len(s) - 1, []).append(s)
        by_dim.setdefault(len(s), []).append(s + (upper,))
        by_dim.setdefault(len(s), []).append((lower,) + s)
    sx = OrderedComplex(by_dim, rank)
    return SuspensionComplex(sx, x, upper, lower)


@dataclass(frozen=True)
class Cylinder:
    complex: OrderedComplex
    base: OrderedComplex
    end0: SimplicialMap
    end1: SimplicialMap
    projection: SimplicialMap
    manifold: Optional[ManifoldPair]


def cylinder(x: OrderedComplex) -> Cylinder:
    """Prism triangulation of I x X, level 0 ranked before level 1.

    Each k-simplex (v0..vk) contributes the k+1 simplices
    ((0,v0)..(0,vi),(1,vi)..(1,vk)).  When x is a closed pseudo-manifold the
    result is validated as a ManifoldPair (its boundary, the two ends, is
    not a full subcomplex; quadratic-function operations on cylinders use
    the extension-by-zero form of the boundary transfer).
    """
    verts = sorted(x.vertices)
    vid = {v: j for j, v in enumerate(verts)}
    nverts = len(verts)
    shift = max(x.rank.values()) - min(x.rank.values()) + 1

    def at(level: int, v: int) -> int:
        return vid[v] + level * nverts

    rank = {}
    for v in verts:
        rank[at(0, v)] = x.rank[v]
        rank[at(1, v)] = x.rank[v] + shift
    maximal = []
    for s in x.all_simplices():
        k = len(s) - 1
        for i in range(k + 1):
            prism = tuple(at(0, v) for v in s[: i + 1]) + tuple(
                at(1, v) for v in s[i:]
            )
            maximal.append(prism)
    cx = build_complex(maximal, rank)
    end0 = SimplicialMap(x, cx, {v: at(0, v) for v in verts})
    end1 = SimplicialMap(x, cx, {v: at(1, v) for v in verts})
    proj_map = {at(0, v): v for v in verts}
    proj_map.update({at(1, v): v for v in verts})
    projection = SimplicialMap(cx, x, proj_map)
    manifold = None
    try:
        base_m = validate_manifold(x, require_full=False, require_ordering=False)
        if base_m.closed:
            manifold = validate_manifold(
                cx, x.dim + 1, require_full=False, require_ordering=False
            )
    except NotPseudoManifold:
        manifold = None
    return Cylinder(cx, x, end0, end1, projection, manifold)


@dataclass(frozen=True)
class Collapse:
    map: SimplicialMap
    cone: Cone
    boundary: OrderedComplex


def collapse_map(m: ManifoldPair) -> Collapse:
    """Collapse (M, bd M) -> (C+ bd M, bd M): identity on the boundary, all
    interior vertices to the cone vertex."""
    if m.closed:
        raise EmptyBoundary("collapse map needs a boundary")
    if not m.boundary_full:
        raise BoundaryNotFull("collapse map needs a full boundary subcomplex")
    if not m.ordering_ok:
        raise OrderingViolation("collapse map needs boundary vertices ranked first")
    boundary = m.boundary_complex()
    c = cone(boundary)
    vm = {}
    for v in m.complex.vertices:
        vm[v] = v if v in m.pair.sub_vertices else c.apex
    return Collapse(SimplicialMap(m.complex, c.complex, vm), c, boundary)


def disjoint_union(
    x: OrderedComplex, y: OrderedComplex
) -> Tuple[OrderedComplex, SimplicialMap, SimplicialMap]:
    offset = max(x.vertices) + 1
    rank = dict(x.rank)
    by_dim: Dict[int, List[Simplex]] = {}
    for s in x.all_simplices():
        by_dim.setdefault(len(s) - 1, []).append(s)
    for v in y.vertices:
        rank[v + offset] = y.rank[v]
    for s in y.all_simplices():
        by_dim.setdefault(len(s) - 1, []).append(tuple(v + offset for v in s))
    z = OrderedComplex(by_dim, rank)
    ix = SimplicialMap(x, z, {v: v for v in x.vertices})
    iy = SimplicialMap(y, z, {v: v + offset for v in y.vertices})
    return z, ix, iy
