"""The groups G_n^pin(X, Y) and the G_n^spin profile.

Elements are pairs (w, p) of relative cochains with dp = 0 and dw = Sq^2 p
(pin; dw = (1/2) Sq^2 p with R/Z values for spin), multiplied by

    (w, p)(v, q) = (w + v + p u_{n-2} q, p + q),

modulo the subgroup {(df + Sq^2 c, dc)}.  The closed-form engine reads the
abelian quotient off the short exact sequence ends QH^n and SH^{n-1} and
the rank of phi: [p] -> [Sq^1 p]; the brute-force oracle enumerates every
pair and merges cosets with union-find.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ._gf2 import Echelon, low_bit, nullspace, rank
from .cochains import (
    Cochain,
    CohomologySolver,
    QMODZ,
    Z2,
    cup_i,
    d,
    dual_cochain,
    embed_z2_qmodz,
    integrate,
    pullback,
    sq,
    zero_cochain,
)
from .complexes import ComplexPair, ManifoldPair, SimplicialMap
from .errors import BudgetExceeded, NotACocycle, NotRelative, PairMismatch
from .quadratic import PIN, SPIN, QuadraticFunction, eval_quadratic, make_quadratic

__all__ = [
    "GPair", "g_pair", "g_identity", "g_product", "g_inverse", "g_pullback",
    "pin_to_spin", "qh_sh", "g_pin", "g_pin_bruteforce", "GGroupStructure",
    "quad_to_linear", "linear_to_quad", "g_spin_profile", "SpinProfile",
]


@dataclass(frozen=True)
class GPair:
    """A pair (w, p) with dp = 0 and dw = Sq^2 p (scaled by 1/2 for spin)."""

    pair: ComplexPair
    n: int
    mode: str
    w: Cochain
    p: Cochain

    def __post_init__(self) -> None:
        n, mode = self.n, self.mode
        if self.p.degree != n - 1 or self.p.ring != Z2:
            raise ValueError("p must be a Z2 cochain of degree n-1")
        if not self.p.is_relative(self.pair) or not self.w.is_relative(self.pair):
            raise NotRelative("G-pairs are relative cochain pairs")
        if not d(self.p).is_zero():
            raise NotACocycle("dp != 0")
        sq2 = sq(2, self.p)
        if mode == PIN:
            if self.w.ring != Z2 or self.w.degree != n:
                raise ValueError("pin w must be a Z2 cochain of degree n")
            if d(self.w) != sq2:
                raise NotACocycle("dw != Sq^2 p")
        elif mode == SPIN:
            if self.w.ring != QMODZ or self.w.degree != n:
                raise ValueError("spin w must be a QmodZ cochain of degree n")
            if d(self.w) != embed_z2_qmodz(sq2):
                raise NotACocycle("dw != (1/2) Sq^2 p")
        else:
            raise ValueError(f"unknown mode {mode!r}")

    def _match(self, other: "GPair") -> None:
        if (self.pair is not other.pair or self.n != other.n
                or self.mode != other.mode):
            raise PairMismatch("pairs live on different (X, Y, n, mode)")


def g_pair(pair: ComplexPair, n: int, w: Cochain, p: Cochain,
           mode: str = PIN) -> GPair:
    return GPair(pair, n, mode, w, p)


def g_identity(pair: ComplexPair, n: int, mode: str = PIN) -> GPair:
    ring = Z2 if mode == PIN else QMODZ
    x = pair.ambient
    return GPair(pair, n, mode, zero_cochain(x, n, ring), zero_cochain(x, n - 1, Z2))


def g_product(a: GPair, b: GPair) -> GPair:
    a._match(b)
    cross = cup_i(a.p, b.p, a.n - 2)
    if a.mode == SPIN:
        cross = embed_z2_qmodz(cross)
    return GPair(a.pair, a.n, a.mode, a.w + b.w + cross, a.p + b.p)


def g_inverse(a: GPair) -> GPair:
    corr = sq(1, a.p)
    if a.mode == SPIN:
        corr = embed_z2_qmodz(corr)
    return GPair(a.pair, a.n, a.mode, -a.w + corr, a.p)


def g_pullback(f: SimplicialMap, target_pair: ComplexPair,
               source_pair: ComplexPair, a: GPair) -> GPair:
    """Functoriality: pull a pair on the target back along f."""
    if a.pair is not target_pair:
        raise PairMismatch("pair does not live on the map target")
    return GPair(source_pair, a.n, a.mode, pullback(f, a.w), pullback(f, a.p))


def pin_to_spin(a: GPair) -> GPair:
    """(w, p) -> ((1/2) w, p), a homomorphism at the pair level."""
    if a.mode != PIN:
        raise ValueError("expected a pin pair")
    return GPair(a.pair, a.n, SPIN, embed_z2_qmodz(a.w), a.p)


# -- exact sequence data ----------------------------------------------------


class _SequenceData:
    def __init__(self, pair: ComplexPair, n: int) -> None:
        self.pair = pair
        self.n = n
        self.s_nm2 = CohomologySolver(pair, n - 2) if n >= 2 else None
        self.s_nm1 = CohomologySolver(pair, n - 1)
        self.s_n = CohomologySolver(pair, n)
        self.s_np1 = CohomologySolver(pair, n + 1)

        def coords_bits(solver: CohomologySolver, c: Cochain) -> int:
            coords, _ = solver.decompose(c)
            return sum(bit << j for j, bit in enumerate(coords))

        # image of Sq^2 from H^{n-2} inside H^n
        self.b_rows: List[int] = []
        if self.s_nm2 is not None:
            for c in self.s_nm2.basis:
                self.b_rows.append(coords_bits(self.s_n, sq(2, c)))
        self.b_rank = rank(self.b_rows)

        # Sq^2 out of H^{n-1}, kernel = SH
        sq2_cols = [coords_bits(self.s_np1, sq(2, p)) for p in self.s_nm1.basis]
        self.sh_kernel: List[int] = nullspace(sq2_cols)

        # phi on classes: [p] -> [Sq^1 p]
        self.phi_cols = [coords_bits(self.s_n, sq(1, p)) for p in self.s_nm1.basis]

    def phi_of(self, combo_bits: int) -> int:
        out = 0
        while combo_bits:
            j = low_bit(combo_bits)
            combo_bits &= combo_bits - 1
            out ^= self.phi_cols[j]
        return out

    @property
    def qh_dim(self) -> int:
        return self.s_n.dim - self.b_rank

    @property
    def sh_dim(self) -> int:
        return len(self.sh_kernel)

    @property
    def phi_rank(self) -> int:
        ech = Echelon()
        for r in self.b_rows:
            ech.add(r)
        base = ech.rank
        for kv in self.sh_kernel:
            ech.add(self.phi_of(kv))
        return ech.rank - base


def _sequence_data(pair: ComplexPair, n: int) -> _SequenceData:
    if not hasattr(pair, "_gg_cache"):
        pair._gg_cache = {}
    if n not in pair._gg_cache:
        pair._gg_cache[n] = _SequenceData(pair, n)
    return pair._gg_cache[n]


def qh_sh(pair: ComplexPair, n: int, mode: str = PIN) -> Tuple[int, int, int]:
    """(dim QH^n, dim SH^{n-1}, rank phi) over F2."""
    data = _sequence_data(pair, n)
    return data.qh_dim, data.sh_dim, data.phi_rank


@dataclass
class GGroupStructure:
    """Abelian profile (Z/4)^a + (Z/2)^b with generator certificates."""

    n: int
    dims: Tuple[int, int, int]  # (dim QH, dim SH, rank phi)
    summands: Tuple[int, ...]
    order: int
    generators: Tuple[GPair, ...] = ()

    def profile(self) -> str:
        parts = [f"Z/{k}" for k in self.summands]
        return " + ".join(parts) if parts else "0"

    def same_profile(self, other: "GGroupStructure") -> bool:
        return sorted(self.summands) == sorted(other.summands)


def _solve_dw(pair: ComplexPair, n: int, target: Cochain) -> Cochain:
    """A particular w with dw = target among relative n-cochains."""
    x = pair.ambient
    n_simps = pair.relative_simplices(n)
    np1 = pair.relative_simplices(n + 1)
    if target.is_zero() or not np1:
        return zero_cochain(x, n, Z2)
    np1_idx = {s: j for j, s in enumerate(np1)}
    ech = Echelon()
    for j, s in enumerate(n_simps):
        bits = 0
        for t, v in d(dual_cochain(x, s)).values.items():
            if v and t in np1_idx:
                bits |= 1 << np1_idx[t]
        ech.add(bits, 1 << j)
    tbits = 0
    for s, v in target.values.items():
        if v:
            tbits |= 1 << np1_idx[s]
    rem, track = ech.reduce(tbits)
    if rem:
        raise NotACocycle("Sq^2 p is not a relative coboundary")
    vals = {}
    while track:
        j = low_bit(track)
        track &= track - 1
        vals[n_simps[j]] = 1
    return Cochain(x, n, Z2, vals)


def g_pin(pair: ComplexPair, n: int) -> GGroupStructure:
    """(Z/4)^{rank phi} + (Z/2)^{dim SH - rank phi} + (Z/2)^{dim QH - rank phi},
    with one generator certificate per cyclic summand.

    A pair (w, p) squares to (Sq^1 p, 0), so [p] in SH gives a Z/4 summand
    exactly when [Sq^1 p] survives in QH; the remaining SH directions are
    corrected by the chosen Z/4 vectors so their certificates have honest
    order 2.
    """
    data = _sequence_data(pair, n)
    qh, sh, rphi = data.qh_dim, data.sh_dim, data.phi_rank

    # echelon over H^n coords; track records which Z/4 picks were consumed
    ech = Echelon()
    for r in data.b_rows:
        ech.add(r, 0)
    picks4: List[int] = []
    sh2: List[int] = []
    for kv in data.sh_kernel:
        phi_bits = data.phi_of(kv)
        rem, track = ech.reduce(phi_bits, 0)
        if rem:
            ech.add(phi_bits, 1 << len(picks4))
            picks4.append(kv)
        else:
            corrected = kv
            while track:
                j = low_bit(track)
                track &= track - 1
                corrected ^= picks4[j]
            sh2.append(corrected)

    def sh_cert(kv: int) -> GPair:
        p = _combo(data.s_nm1, kv)
        w = _solve_dw(pair, n, sq(2, p))
        return GPair(pair, n, PIN, w, p)

    gens = [sh_cert(kv) for kv in picks4]
    orders = [4] * len(picks4)
    for kv in sh2:
        gens.append(sh_cert(kv))
        orders.append(2)
    for j in range(data.s_n.dim):
        rem, _ = ech.add(1 << j, 0)
        if rem:
            gens.append(GPair(pair, n, PIN, data.s_n.basis[j],
                              zero_cochain(pair.ambient, n - 1, Z2)))
            orders.append(2)
    summands = tuple(sorted(orders, reverse=True))
    assert summands == (4,) * rphi + (2,) * (sh - rphi) + (2,) * (qh - rphi)
    return GGroupStructure(
        n=n,
        dims=(qh, sh, rphi),
        summands=summands,
        order=1 << (qh + sh),
        generators=tuple(gens),
    )


def _combo(solver: CohomologySolver, bits: int) -> Cochain:
    out = zero_cochain(solver.pair.ambient, solver.degree, Z2)
    while bits:
        j = low_bit(bits)
        bits &= bits - 1
        out = out + solver.basis[j]
    return out


def g_is_trivial(a: GPair) -> bool:
    """Whether (w, p) lies in the relation subgroup {(df + Sq^2 c, dc)}.

    Requires p = dc exactly for some relative c; then w + Sq^2 c must be a
    coboundary up to Sq^2 of a cocycle, i.e. its class must lie in the
    Sq^2-image inside H^n.
    """
    if a.mode != PIN:
        raise ValueError("triviality test implemented for pin pairs")
    data = _sequence_data(a.pair, a.n)
    coords, cert = data.s_nm1.decompose(a.p)
    if any(coords):
        return False
    w_corr = a.w + sq(2, cert)
    wcoords, _ = data.s_n.decompose(w_corr)
    bits = sum(b << j for j, b in enumerate(wcoords))
    ech = Echelon()
    for r in data.b_rows:
        ech.add(r)
    return ech.reduce(bits)[0] == 0


def g_order(a: GPair, limit: int = 8) -> int:
    """Order of a pair in the quotient group (small orders only)."""
    acc = a
    for k in range(1, limit + 1):
        if g_is_trivial(acc):
            return k
        acc = g_product(acc, a)
    raise ValueError(f"order exceeds {limit}")


# -- brute-force oracle ------------------------------------------------------


class _UnionFind:
    def __init__(self, size: int) -> None:
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def g_pin_bruteforce(pair: ComplexPair, n: int,
                     size_budget: int = 1 << 24) -> GGroupStructure:
    """Enumerate all pairs, merge cosets of the relation subgroup, and read
    off the abelian profile.  Exact; feasible at fixture scale."""
    x = pair.ambient
    e_list = pair.relative_simplices(n - 1)
    t_list = pair.relative_simplices(n - 2) if n >= 2 else ()
    n_list = pair.relative_simplices(n)
    ne, nn = len(e_list), len(n_list)
    e_idx = {s: j for j, s in enumerate(e_list)}
    n_idx = {s: j for j, s in enumerate(n_list)}

    def p_bits_of(c: Cochain) -> int:
        bits = 0
        for s, v in c.values.items():
            if v:
                bits |= 1 << e_idx[s]
        return bits

    def n_bits_of(c: Cochain) -> int:
        bits = 0
        for s, v in c.values.items():
            if v:
                bits |= 1 << n_idx[s]
        return bits

    def p_cochain(bits: int) -> Cochain:
        vals = {}
        while bits:
            j = low_bit(bits)
            bits &= bits - 1
            vals[e_list[j]] = 1
        return Cochain(x, n - 1, Z2, vals)

    # cocycle spaces
    d_cols_p = [n_bits_of(d(dual_cochain(x, e))) for e in e_list]
    z_p = nullspace(d_cols_p)
    np1_list = pair.relative_simplices(n + 1)
    np1_idx = {s: j for j, s in enumerate(np1_list)}
    d_cols_w = []
    for s in n_list:
        bits = 0
        for t, v in d(dual_cochain(x, s)).values.items():
            if v and t in np1_idx:
                bits |= 1 << np1_idx[t]
        d_cols_w.append(bits)
    z_w = nullspace(d_cols_w)

    total = 1 << (len(z_p) + len(z_w))
    if total > size_budget:
        raise BudgetExceeded(f"{total} pairs exceed the budget {size_budget}")

    # solve dw = Sq^2 p deterministically
    wech = Echelon()
    for j, col in enumerate(d_cols_w):
        wech.add(col, 1 << j)

    elems: List[int] = []
    index: Dict[int, int] = {}
    for a in range(1 << len(z_p)):
        pb = 0
        ab = a
        while ab:
            j = low_bit(ab)
            ab &= ab - 1
            pb ^= z_p[j]
        p = p_cochain(pb)
        sq2 = sq(2, p)
        if sq2.is_zero() or not np1_list:
            w0 = 0
            solvable = sq2.is_zero()
        else:
            tb = 0
            for s, v in sq2.values.items():
                if v:
                    tb |= 1 << np1_idx[s]
            rem, w0 = wech.reduce(tb)
            solvable = rem == 0
        if not solvable:
            continue
        for b in range(1 << len(z_w)):
            wb = w0
            bb = b
            while bb:
                j = low_bit(bb)
                bb &= bb - 1
                wb ^= z_w[j]
            packed = (wb << ne) | pb
            index[packed] = len(elems)
            elems.append(packed)

    # relation generators and their cup rows
    gens: List[Tuple[int, int, List[int]]] = []  # (w bits, p bits, cup rows)
    def cup_rows(rp: Cochain) -> List[int]:
        return [n_bits_of(cup_i(dual_cochain(x, e), rp, n - 2)) for e in e_list]

    for e in e_list:
        f = dual_cochain(x, e)
        gens.append((n_bits_of(d(f)), 0, cup_rows(zero_cochain(x, n - 1, Z2))))
    for t in t_list:
        c = dual_cochain(x, t)
        gens.append((n_bits_of(sq(2, c)), p_bits_of(d(c)), cup_rows(d(c))))

    uf = _UnionFind(len(elems))
    mask_e = (1 << ne) - 1
    for idx, packed in enumerate(elems):
        pb = packed & mask_e
        wb = packed >> ne
        for rw, rp, rows in gens:
            cross = 0
            tmp = pb
            while tmp:
                j = low_bit(tmp)
                tmp &= tmp - 1
                cross ^= rows[j]
            newp = pb ^ rp
            neww = wb ^ rw ^ cross
            uf.union(idx, index[(neww << ne) | newp])

    roots: Dict[int, int] = {}
    for idx in range(len(elems)):
        r = uf.find(idx)
        if r not in roots:
            roots[r] = idx
    size = len(roots)

    def multiply(i1: int, i2: int) -> int:
        pk1, pk2 = elems[i1], elems[i2]
        p1, w1 = pk1 & mask_e, pk1 >> ne
        p2, w2 = pk2 & mask_e, pk2 >> ne
        cross = n_bits_of(cup_i(p_cochain(p1), p_cochain(p2), n - 2))
        return index[((w1 ^ w2 ^ cross) << ne) | (p1 ^ p2)]

    ident_root = uf.find(index[0])
    involutions = 0
    for r, rep in roots.items():
        if uf.find(multiply(rep, rep)) == ident_root:
            involutions += 1
    s = size.bit_length() - 1
    t_log = involutions.bit_length() - 1
    a = s - t_log
    b = 2 * t_log - s
    assert (1 << s) == size and (1 << t_log) == involutions and a >= 0 and b >= 0
    summands = (4,) * a + (2,) * b
    data = _sequence_data(pair, n)
    return GGroupStructure(
        n=n,
        dims=(data.qh_dim, data.sh_dim, data.phi_rank),
        summands=summands,
        order=size,
    )


# -- quadratic functions as linear functionals -----------------------------------------------------


def quad_to_linear(q: QuadraticFunction) -> Callable[[GPair], Fraction]:
    """L_Q(w, p) = Q(p) + (1/2) int w, an R/Z-valued functional on G-pairs."""
    m = q.manifold
    witness = None

    def functional(a: GPair) -> Fraction:
        if a.pair.ambient is not m.complex:
            raise PairMismatch("pair lives on a different complex")
        qp = eval_quadratic(q, a.p).rmodz
        if a.mode == PIN:
            iw = Fraction(integrate(m, a.w) % 2, 2)
        else:
            iw = integrate(m, a.w)
        return (qp + iw) % 1

    return functional


def linear_to_quad(m: ManifoldPair, mode: str,
                   functional: Callable[[GPair], Fraction]) -> QuadraticFunction:
    """Inverse bridge: read Q off the functional via Q(p_j) = L(0, p_j)."""
    from .quadratic import quad_context

    ctx = quad_context(m)
    pair = m.pair
    ring = Z2 if mode == PIN else QMODZ
    values = []
    for p in ctx.solver.basis:
        a = GPair(pair, m.n, mode, zero_cochain(m.complex, m.n, ring), p)
        val = functional(a)
        values.append(int((val % 1) * 4) if mode == PIN else int((val % 1) * 2) * 2)
    return make_quadratic(m, mode, values)


# -- spin profile -------------------------------------------------------------


def _absolute(m: ManifoldPair) -> ComplexPair:
    stash = getattr(m, "_gg_abs", None)
    if stash is None:
        m._gg_abs = ComplexPair(m.complex, ())
    return m._gg_abs


@dataclass
class SpinProfile:
    """Structural report for G_n^spin: exact-sequence terms, resolved only
    when no divisible summand can occur."""

    n: int
    sh_dim: int
    hn_f2_dim: int
    sq2_into_hn_rank: int
    resolved: bool
    summands: Optional[Tuple[int, ...]]
    note: str


def g_spin_profile(m, n: int) -> SpinProfile:
    pair = m.pair if isinstance(m, ManifoldPair) else m
    data = _sequence_data(pair, n)
    manifold = m if isinstance(m, ManifoldPair) else None
    connected = (manifold is not None
                 and CohomologySolver(_absolute(manifold), 0).dim == 1)
    if (manifold is not None and n == manifold.n and connected
            and not manifold.orientable):
        # H^n(M, bd M; R/Z) = Hom(H_n; R/Z) = 0 for connected nonorientable M,
        # so the sequence collapses onto SH^{n-1}.
        return SpinProfile(
            n=n,
            sh_dim=data.sh_dim,
            hn_f2_dim=data.s_n.dim,
            sq2_into_hn_rank=data.b_rank,
            resolved=True,
            summands=(2,) * data.sh_dim,
            note="QH^n(R/Z) vanishes; group is SH^{n-1}",
        )
    note = (
        "H^n(X; R/Z) carries a divisible summand or undetermined torsion; "
        "sequence terms reported, extension unresolved"
    )
    if manifold is not None and n == manifold.n and manifold.orientable:
        note = "orientable: H^n(M, bd M; R/Z) has a circle summand; unresolved"
    return SpinProfile(
        n=n,
        sh_dim=data.sh_dim,
        hn_f2_dim=data.s_n.dim,
        sq2_into_hn_rank=data.b_rank,
        resolved=False,
        summands=None,
        note=note,
    )
