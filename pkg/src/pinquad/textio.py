"""Line-oriented text formats for complexes and cochains.

Complex files:  `dim <n>`, optional `rank <v> <r>` lines, `simplex <v0> ...`
for maximal simplices, `boundary auto` or explicit `boundary <v0> ...`
lines, optional `orient <v0> ... <+1|-1>` lines, `#` comments.  Vertices
are nonnegative integers and all parsing is bit-exact.

Cochain files: a `cochain <ring> <degree>` header followed by lines
`<v0> <v1> ... -> <value>`; Z2 values are 0/1, Z4 values 0..3, QmodZ
values `num/den`.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .cochains import Cochain, QMODZ, RINGS
from .complexes import ManifoldPair, OrderedComplex, Simplex, build_complex, validate_manifold
from .errors import ParseError


@dataclass
class ComplexSpec:
    dim: Optional[int] = None
    rank: Dict[int, int] = field(default_factory=dict)
    maximal: List[Simplex] = field(default_factory=list)
    boundary: object = "auto"
    orientation: Optional[Dict[Simplex, int]] = None


def parse_complex(text: str) -> ComplexSpec:
    spec = ComplexSpec()
    explicit_boundary: List[Simplex] = []
    saw_boundary = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        try:
            if key == "dim":
                spec.dim = int(args[0])
            elif key == "rank":
                spec.rank[int(args[0])] = int(args[1])
            elif key == "simplex":
                spec.maximal.append(tuple(int(a) for a in args))
            elif key == "boundary":
                saw_boundary = True
                if args == ["auto"]:
                    pass
                else:
                    explicit_boundary.append(tuple(int(a) for a in args))
            elif key == "orient":
                sign = {"+1": 1, "1": 1, "-1": -1}[args[-1]]
                simplex = tuple(int(a) for a in args[:-1])
                if spec.orientation is None:
                    spec.orientation = {}
                spec.orientation[simplex] = sign
            else:
                raise ParseError(f"unknown directive {key!r}", lineno)
        except ParseError:
            raise
        except Exception as e:
            raise ParseError(f"cannot parse {raw.strip()!r} ({e})", lineno)
    if not spec.maximal:
        raise ParseError("no simplex lines found")
    if saw_boundary and explicit_boundary:
        spec.boundary = explicit_boundary
    return spec


def complex_from_spec(spec: ComplexSpec) -> OrderedComplex:
    rank = spec.rank if spec.rank else None
    x = build_complex(spec.maximal, rank)
    if spec.dim is not None and x.dim != spec.dim:
        raise ParseError(f"declared dim {spec.dim} but complex has dim {x.dim}")
    return x


def complex_from_text(text: str) -> OrderedComplex:
    return complex_from_spec(parse_complex(text))


def manifold_from_text(
    text: str, *, require_full: bool = True, require_ordering: bool = True
) -> ManifoldPair:
    spec = parse_complex(text)
    x = complex_from_spec(spec)
    boundary = spec.boundary
    if boundary != "auto":
        closed: set = set()
        for s in boundary:
            t = x.sort_simplex(s)
            for r in range(1, len(t) + 1):
                closed.update(itertools.combinations(t, r))
        boundary = closed
    orientation = "auto"
    if spec.orientation is not None:
        orientation = {x.sort_simplex(s): v for s, v in spec.orientation.items()}
    return validate_manifold(
        x,
        spec.dim,
        boundary=boundary,
        orientation=orientation,
        require_full=require_full,
        require_ordering=require_ordering,
    )


def format_complex(x: OrderedComplex, *, orientation=None, name: str = "") -> str:
    lines = []
    if name:
        lines.append(f"# {name}")
    lines.append(f"dim {x.dim}")
    if any(x.rank[v] != v for v in x.vertices):
        for v in x.vertices:
            lines.append(f"rank {v} {x.rank[v]}")
    coface_count = {s: 0 for s in x.all_simplices()}
    for s in x.all_simplices():
        if len(s) > 1:
            for face in itertools.combinations(s, len(s) - 1):
                coface_count[face] += 1
    for s in x.all_simplices():
        if coface_count[s] == 0:
            lines.append("simplex " + " ".join(map(str, s)))
    lines.append("boundary auto")
    if orientation:
        for s in sorted(orientation):
            sign = "+1" if orientation[s] > 0 else "-1"
            lines.append("orient " + " ".join(map(str, s)) + f" {sign}")
    return "\n".join(lines) + "\n"


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


# -- cochains -------------------------------------------------------------


def parse_cochain(text: str, complex: OrderedComplex) -> Cochain:
    ring = None
    degree = None
    values: Dict[Simplex, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("cochain"):
            parts = line.split()
            if len(parts) != 3 or parts[1] not in RINGS:
                raise ParseError(f"bad header {line!r}", lineno)
            ring = parts[1]
            degree = int(parts[2])
            continue
        if ring is None:
            raise ParseError("value line before the cochain header", lineno)
        if "->" not in line:
            raise ParseError(f"expected '<vertices> -> <value>' in {line!r}", lineno)
        left, right = line.split("->")
        try:
            simplex = tuple(int(a) for a in left.split())
            value = Fraction(right.strip()) if ring == QMODZ else int(right)
        except Exception as e:
            raise ParseError(f"cannot parse {line!r} ({e})", lineno)
        values[simplex] = value
    if ring is None:
        raise ParseError("missing cochain header")
    return Cochain(complex, degree, ring, values)


def format_cochain(c: Cochain) -> str:
    lines = [f"cochain {c.ring} {c.degree}"]
    for s in sorted(c.values):
        v = c.values[s]
        text = f"{v.numerator}/{v.denominator}" if c.ring == QMODZ else str(v)
        lines.append(" ".join(map(str, s)) + f" -> {text}")
    return "\n".join(lines) + "\n"
