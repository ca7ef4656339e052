import random

import pytest

from pinquad.cochains import (
    Cochain,
    CohomologySolver,
    Z2,
    cup_i,
    d,
    dual_cochain,
    integrate,
    pullback,
    sq,
    zero_cochain,
)
from pinquad.complexes import SimplicialMap, build_complex, validate_manifold
from pinquad.errors import (
    ConstraintViolation,
    DegreeZero,
    EmptyBoundary,
    NotClosedSurface,
    NotNeatlyEmbedded,
    SpinOnNonorientable,
    WuObstruction,
)
from pinquad.fixtures import catalog
from pinquad.quadratic import (
    PIN,
    SPIN,
    act,
    boundary_manifold,
    boundary_quadratic,
    brown_gauss,
    cylinder_extend,
    cylinder_restrict,
    disjoint_sum,
    enumerate_quadratics,
    eval_quadratic,
    make_quadratic,
    negate,
    pushforward,
    quad_context,
    random_relative_cocycle,
    restrict_codim0,
    submanifold,
    transfer_subdivision,
    v1_witness,
    verify_axioms,
)


def klein_grid_vertex(r, c):
    if c == 3:
        c = 0
    if r == 3:
        r, c = 0, (-c) % 3
    return 3 * r + c


def klein_band(columns):
    tris = []
    for r in range(3):
        for c in columns:
            a, b = klein_grid_vertex(r, c), klein_grid_vertex(r, c + 1)
            aa, bb = klein_grid_vertex(r + 1, c), klein_grid_vertex(r + 1, c + 1)
            tris.append(tuple(sorted((a, b, bb))))
            tris.append(tuple(sorted((a, aa, bb))))
    return tris


class TestMake:
    def test_rp2_values_forced_odd(self, rp2):
        q = make_quadratic(rp2, PIN, [1])
        assert q.basis_values == (1,)
        with pytest.raises(ConstraintViolation):
            make_quadratic(rp2, PIN, [0])

    def test_torus_zero_values(self, torus):
        q = make_quadratic(torus, PIN, [0, 0])
        assert verify_axioms(q, 50, seed=0).ok

    def test_klein_has_a_forced_odd_generator(self, klein):
        ctx = quad_context(klein)
        assert 1 in ctx.sq1

    def test_spin_needs_orientation(self, rp2, torus):
        with pytest.raises(SpinOnNonorientable):
            make_quadratic(rp2, SPIN, [1])
        q = make_quadratic(torus, SPIN, [0, 2])
        assert q.basis_values == (0, 2)

    def test_wu_obstruction_on_cp2(self, cp2):
        with pytest.raises(WuObstruction):
            make_quadratic(cp2, PIN, [])


class TestEnumerate:
    def test_counts_match_betti(self, rp2, torus, klein, mobius, annulus,
                                solid_torus, sphere1, sphere2, disk2):
        for m in (rp2, torus, klein, mobius, annulus, solid_torus,
                  sphere1, sphere2, disk2):
            h = CohomologySolver(m.pair, m.n - 1).dim
            assert len(enumerate_quadratics(m, PIN)) == 2 ** h

    def test_rp2_values(self, rp2):
        assert [q.basis_values for q in enumerate_quadratics(rp2, PIN)] == [(1,), (3,)]

    def test_torus_spin_values_even(self, torus):
        qs = enumerate_quadratics(torus, SPIN)
        assert len(qs) == 4
        assert all(v in (0, 2) for q in qs for v in q.basis_values)

    def test_circle_has_two(self, sphere1):
        assert len(enumerate_quadratics(sphere1, PIN)) == 2

    def test_deterministic_order(self, torus):
        a = [q.basis_values for q in enumerate_quadratics(torus, PIN)]
        b = [q.basis_values for q in enumerate_quadratics(torus, PIN)]
        assert a == b == sorted(a)


class TestEval:
    def test_zero_cocycle(self, rp2):
        q = enumerate_quadratics(rp2, PIN)[0]
        z = zero_cochain(rp2.complex, 1, Z2)
        assert eval_quadratic(q, z).z4 == 0

    def test_coboundary_duals_vanish(self, rp2, torus):
        for m in (rp2, torus):
            q = enumerate_quadratics(m, PIN)[0]
            for s in m.pair.relative_simplices(m.n - 2):
                w = d(dual_cochain(m.complex, s))
                assert eval_quadratic(q, w).z4 == 0

    def test_descends_on_surfaces(self, rp2):
        q = make_quadratic(rp2, PIN, [1])
        solver = q.solver
        (x,) = solver.basis
        rng = random.Random(11)
        for _ in range(40):
            noise = {s: 1 for s in rp2.complex.simplices(0) if rng.random() < 0.5}
            p = x + d(Cochain(rp2.complex, 0, Z2, noise))
            assert eval_quadratic(q, p).z4 == 1

    def test_certificate_independence(self, torus):
        # same class reached through different cocycle representatives
        q = enumerate_quadratics(torus, PIN)[-1]
        rng = random.Random(13)
        for _ in range(25):
            p = random_relative_cocycle(rng, q)
            noise = {s: 1 for s in torus.complex.simplices(0) if rng.random() < 0.5}
            p2 = p + d(Cochain(torus.complex, 0, Z2, noise))
            v1 = eval_quadratic(q, p).z4
            v2 = eval_quadratic(q, p2).z4
            cross = integrate(torus, cup_i(p, p2 - p, torus.n - 2)) % 2
            law = (v1 + eval_quadratic(q, p2 - p).z4 + 2 * cross) % 4
            assert v2 == law

    def test_fold_order_independence(self, klein):
        # Q(p) computed directly equals Q((p+q) - q) via the sum law
        q = enumerate_quadratics(klein, PIN)[2]
        rng = random.Random(17)
        for _ in range(25):
            p1 = random_relative_cocycle(rng, q)
            p2 = random_relative_cocycle(rng, q)
            s = eval_quadratic(q, p1 + p2).z4
            cross = integrate(klein, cup_i(p1, p2, klein.n - 2)) % 2
            assert s == (eval_quadratic(q, p1).z4 + eval_quadratic(q, p2).z4
                         + 2 * cross) % 4

    def test_oriented_values_are_even(self, torus, annulus, solid_torus):
        rng = random.Random(21)
        for m in (torus, annulus, solid_torus):
            for q in enumerate_quadratics(m, PIN):
                for _ in range(15):
                    p = random_relative_cocycle(rng, q)
                    assert eval_quadratic(q, p).z4 % 2 == 0

    def test_two_torsion_relation(self, rp2, klein):
        # 2 Q(p) = 2 int Sq^1 p for every relative cocycle
        rng = random.Random(19)
        for m in (rp2, klein):
            q = enumerate_quadratics(m, PIN)[1]
            for _ in range(20):
                p = random_relative_cocycle(rng, q)
                lhs = (2 * eval_quadratic(q, p).z4) % 4
                rhs = (2 * (integrate(m, sq(1, p)) % 2)) % 4
                assert lhs == rhs


class TestActNegate:
    def test_act_by_zero(self, torus):
        q = enumerate_quadratics(torus, PIN)[0]
        a = zero_cochain(torus.complex, 1, Z2)
        assert act(q, a) == q

    def test_rp2_generator_swaps(self, rp2):
        q0, q1 = enumerate_quadratics(rp2, PIN)
        (x,) = q0.solver.basis
        assert act(q0, x) == q1 and act(q1, x) == q0

    def test_action_free_and_transitive(self, rp2, torus, klein, mobius,
                                        annulus, sphere1):
        for m in (rp2, torus, klein, mobius, annulus, sphere1):
            qs = enumerate_quadratics(m, PIN)
            solver = CohomologySolver(m.pair if m.closed else
                                      __import__("pinquad.complexes",
                                                 fromlist=["absolute_pair"]
                                                 ).absolute_pair(m.complex), 1)
            reps = []
            for bits in range(1 << solver.dim):
                reps.append(solver.reconstruct([(bits >> j) & 1
                                                for j in range(solver.dim)]))
            orbit = {act(qs[0], a) for a in reps}
            assert len(orbit) == len(qs)
            assert set(qs) == orbit

    def test_action_depends_only_on_class(self, klein):
        q = enumerate_quadratics(klein, PIN)[0]
        solver = CohomologySolver(
            __import__("pinquad.complexes", fromlist=["absolute_pair"]
                       ).absolute_pair(klein.complex), 1)
        a = solver.basis[0]
        noise = Cochain(klein.complex, 0, Z2,
                        {(v,): 1 for v in klein.complex.vertices[:4]})
        assert act(q, a) == act(q, a + d(noise))

    def test_negate_fixes_spin(self, torus):
        for q in enumerate_quadratics(torus, SPIN):
            assert negate(q) == q

    def test_negate_swaps_rp2(self, rp2):
        q0, q1 = enumerate_quadratics(rp2, PIN)
        assert negate(q0) == q1

    def test_negate_is_involution(self, klein):
        for q in enumerate_quadratics(klein, PIN):
            assert negate(negate(q)) == q

    def test_negate_is_action_by_v1(self, rp2, klein, mobius):
        for m in (rp2, klein, mobius):
            a = v1_witness(m)
            assert d(a).is_zero()
            for q in enumerate_quadratics(m, PIN):
                assert negate(q) == act(q, a)


class TestBoundary:
    def test_disk_boundary_trivial(self, disk2):
        (q,) = enumerate_quadratics(disk2, PIN)
        bq = boundary_quadratic(q)
        assert all(v == 0 for v in bq.basis_values)

    def test_closed_raises(self, rp2):
        with pytest.raises(EmptyBoundary):
            boundary_quadratic(enumerate_quadratics(rp2, PIN)[0])

    def _circle_indicators(self, m):
        bm = boundary_manifold(m)
        comps = []
        verts = set(bm.complex.vertices)
        edges = list(bm.complex.simplices(1))
        while verts:
            seed = min(verts)
            comp = {seed}
            grew = True
            while grew:
                grew = False
                for a, b in edges:
                    if a in comp and b not in comp:
                        comp.add(b)
                        grew = True
                    elif b in comp and a not in comp:
                        comp.add(a)
                        grew = True
            comps.append(sorted(comp))
            verts -= comp
        return bm, [Cochain(bm.complex, 0, Z2, {(v,): 1 for v in comp})
                    for comp in comps]

    def test_annulus_even_nontrivial_circles(self, annulus):
        bm, indicators = self._circle_indicators(annulus)
        assert len(indicators) == 2
        seen = set()
        for q in enumerate_quadratics(annulus, PIN):
            bq = boundary_quadratic(q)
            count = sum(1 for u in indicators if eval_quadratic(bq, u).z4 != 0)
            assert count % 2 == 0
            seen.add(count)
        assert 2 in seen  # some Q is nontrivial on both circles

    def test_boundary_functions_are_quadratic(self, annulus, mobius):
        for m in (annulus, mobius):
            for q in enumerate_quadratics(m, PIN):
                assert verify_axioms(boundary_quadratic(q), 40, seed=5).ok

    def test_solid_torus_lagrangian(self, solid_torus):
        from pinquad.complexes import absolute_pair

        st = solid_torus
        bq_values = []
        extendable = CohomologySolver(absolute_pair(st.complex), 1)
        bc = st.boundary_complex()
        for q in enumerate_quadratics(st, PIN):
            bq = boundary_quadratic(q)
            for z in extendable.basis:
                rest = Cochain(bc, 1, Z2,
                               {s: v for s, v in z.values.items()
                                if bc.has_simplex(s)})
                assert eval_quadratic(bq, rest).z4 == 0
            assert brown_gauss(bq) == 0  # Arf surrogate vanishes
            bq_values.append(bq.basis_values)


class TestRestriction:
    def test_whole_manifold(self, torus):
        q = enumerate_quadratics(torus, PIN)[1]
        assert restrict_codim0(q, torus) == q
        # a rebuilt copy of the full complex restricts to the same values
        v = submanifold(torus, torus.complex.simplices(2))
        qv = restrict_codim0(q, v)
        rng = random.Random(23)
        for _ in range(10):
            p = random_relative_cocycle(rng, q)
            p_on_v = Cochain(v.complex, p.degree, Z2, p.values)
            assert eval_quadratic(q, p).z4 == eval_quadratic(qv, p_on_v).z4

    def test_mobius_inside_klein(self, klein):
        v = submanifold(klein, klein_band([1]))
        assert not v.orientable and v.complex.euler() == 0
        for q in enumerate_quadratics(klein, PIN):
            qv = restrict_codim0(q, v)
            assert verify_axioms(qv, 25, seed=1).ok
            assert all(x % 2 == 1 for x in qv.basis_values)

    def test_annulus_inside_klein(self, klein):
        v = submanifold(klein, klein_band([0]))
        assert v.orientable and v.complex.euler() == 0
        for q in enumerate_quadratics(klein, PIN):
            qv = restrict_codim0(q, v)
            assert all(x % 2 == 0 for x in qv.basis_values)

    def test_torus_minus_star(self, torus):
        piece = [t for t in torus.complex.simplices(2) if 0 not in t]
        v = submanifold(torus, piece)
        for q in enumerate_quadratics(torus, PIN)[:2]:
            assert verify_axioms(restrict_codim0(q, v), 25, seed=2).ok

    def test_foreign_simplices_rejected(self, torus, rp2):
        q = enumerate_quadratics(torus, PIN)[0]
        other = submanifold(rp2, rp2.complex.simplices(2))
        with pytest.raises(NotNeatlyEmbedded):
            restrict_codim0(q, other)


class TestComplementaryRestrictions:
    def _shared_boundary_values(self, q, piece):
        qv = restrict_codim0(q, piece)
        bq = boundary_quadratic(qv)
        bm = boundary_manifold(piece)
        solver = CohomologySolver(bm.pair, bm.n - 1)
        return [(p.values, eval_quadratic(bq, p).z4) for p in solver.basis]

    def test_klein_split_along_the_moebius_band(self, klein):
        # V = the flip-invariant column band, V' = its complement; both see
        # the same circle as boundary and must induce the same function on it
        v = submanifold(klein, klein_band([1]))
        vp = submanifold(klein, klein_band([0, 2]))
        assert set(v.pair.sub) == set(vp.pair.sub)
        for q in enumerate_quadratics(klein, PIN):
            assert (self._shared_boundary_values(q, v)
                    == self._shared_boundary_values(q, vp))

    def test_torus_split_along_a_vertex_link(self, torus):
        star = [t for t in torus.complex.simplices(2) if 0 in t]
        rest = [t for t in torus.complex.simplices(2) if 0 not in t]
        v = submanifold(torus, star)
        vp = submanifold(torus, rest)
        assert set(v.pair.sub) == set(vp.pair.sub)
        for q in enumerate_quadratics(torus, PIN):
            assert (self._shared_boundary_values(q, v)
                    == self._shared_boundary_values(q, vp))


class TestCylinder:
    @pytest.mark.parametrize("name", ["sphere1", "torus", "klein"])
    def test_round_trip_and_stability(self, name):
        m = catalog(name)
        for q0 in enumerate_quadratics(m, PIN):
            ext = cylinder_extend(q0)
            assert cylinder_restrict(ext, 0, m) == q0
            q1 = cylinder_restrict(ext, 1, m)
            ext1 = cylinder_extend(q1)
            assert ext1.function.basis_values == ext.function.basis_values

    def test_cylinder_function_is_quadratic(self, sphere1):
        q0 = enumerate_quadratics(sphere1, PIN)[1]
        ext = cylinder_extend(q0)
        assert verify_axioms(ext.function, 40, seed=3).ok


class TestSubdivisionTransfer:
    @pytest.mark.parametrize("name", ["rp2", "torus"])
    def test_counts_match_and_eval_agrees(self, name):
        m = catalog(name)
        qs = enumerate_quadratics(m, PIN)
        transferred = []
        rng = random.Random(29)
        for q in qs:
            tr = transfer_subdivision(q)
            transferred.append(tr.function)
            for _ in range(20):
                p = random_relative_cocycle(rng, q)
                assert (eval_quadratic(q, p).z4 ==
                        eval_quadratic(tr.function,
                                       pullback(tr.subdivision.to_base, p)).z4)
        assert len({t.basis_values for t in transferred}) == len(qs)

    def test_inverse_via_pushforward(self, klein):
        for q in enumerate_quadratics(klein, PIN):
            tr = transfer_subdivision(q)
            back = pushforward(tr.subdivision.to_base, tr.function, klein)
            assert back == q


class TestPushforward:
    def test_identity_map(self, rp2):
        from pinquad.complexes import identity_map

        q = enumerate_quadratics(rp2, PIN)[0]
        assert pushforward(identity_map(rp2.complex), q, rp2) == q

    @staticmethod
    def _circle_cover(sheets):
        # w_i -> i mod 3, ranks grouped by fiber so the map is order
        # preserving; every edge has a nondegenerate image
        n = 3 * sheets
        edges = [(i, (i + 1) % n) for i in range(n)]
        order = sorted(range(n), key=lambda i: (i % 3, i))
        rank = {v: r for r, v in enumerate(order)}
        cover = build_complex(edges, rank=rank)
        vm = {i: i % 3 for i in range(n)}
        return cover, vm

    def test_odd_circle_cover(self, sphere1):
        cover, vm = self._circle_cover(3)
        mc = validate_manifold(cover, 1)
        f = SimplicialMap(cover, sphere1.complex, vm)
        assert all(f.nondegenerate_image(e) for e in cover.simplices(1))
        for qc in enumerate_quadratics(mc, PIN):
            q = pushforward(f, qc, sphere1)
            assert verify_axioms(q, 20, seed=4).ok

    def test_even_circle_cover_rejected(self, sphere1):
        cover, vm = self._circle_cover(2)
        mc = validate_manifold(cover, 1)
        f = SimplicialMap(cover, sphere1.complex, vm)
        assert all(f.nondegenerate_image(e) for e in cover.simplices(1))
        qc = enumerate_quadratics(mc, PIN)[0]
        with pytest.raises(DegreeZero):
            pushforward(f, qc, sphere1)


class TestBrownGauss:
    def test_rp2(self, rp2):
        q0, q1 = enumerate_quadratics(rp2, PIN)
        assert {brown_gauss(q0), brown_gauss(q1)} == {1, 7}

    def test_torus(self, torus):
        betas = sorted(brown_gauss(q) for q in enumerate_quadratics(torus, PIN))
        assert betas == [0, 0, 0, 4]
        arfs = sorted(brown_gauss(q) for q in enumerate_quadratics(torus, SPIN))
        assert arfs == [0, 0, 0, 1]

    def test_klein(self, klein):
        betas = sorted(brown_gauss(q) for q in enumerate_quadratics(klein, PIN))
        assert betas == [0, 0, 2, 6]

    def test_not_closed_surface(self, annulus, solid_torus):
        for m in (annulus, solid_torus):
            q = enumerate_quadratics(m, PIN)[0]
            with pytest.raises(NotClosedSurface):
                brown_gauss(q)

    def test_degenerate_sum_guard(self):
        from pinquad.errors import DegenerateSum
        from pinquad.quadratic import _eighth_root_exponent

        assert _eighth_root_exponent(2, 0, 2) == 0
        assert _eighth_root_exponent(1, 1, 1) == 1
        with pytest.raises(DegenerateSum):
            _eighth_root_exponent(3, 0, 2)

    def test_additivity(self, rp2, torus, klein):
        rng = random.Random(31)
        pool = [rp2, torus, klein]
        for _ in range(8):
            m1, m2 = rng.choice(pool), rng.choice(pool)
            q1 = rng.choice(enumerate_quadratics(m1, PIN))
            q2 = rng.choice(enumerate_quadratics(m2, PIN))
            _, qz = disjoint_sum(q1, q2)
            assert brown_gauss(qz) == (brown_gauss(q1) + brown_gauss(q2)) % 8


class TestVerify:
    def test_all_enumerated_pass(self, rp2, torus, klein, mobius, annulus):
        for m in (rp2, torus, klein, mobius, annulus):
            for q in enumerate_quadratics(m, PIN):
                assert verify_axioms(q, 60, seed=6).ok

    def test_corrupted_values_rejected_upfront(self, rp2):
        with pytest.raises(ConstraintViolation):
            make_quadratic(rp2, PIN, [2])

    def test_corrupted_eval_detected(self, torus, monkeypatch):
        import pinquad.quadratic as qm

        q = enumerate_quadratics(torus, PIN)[1]
        real_fold = qm._fold

        def broken_fold(ctx, coords, values, cert):
            val = sum(v for j, v in enumerate(values) if coords[j] % 2)
            return val % 4  # drops every cross term and coboundary correction

        monkeypatch.setattr(qm, "_fold", broken_fold)
        report = qm.verify_axioms(q, 60, seed=7)
        monkeypatch.setattr(qm, "_fold", real_fold)
        assert not report.ok
