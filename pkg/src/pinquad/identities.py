"""Seeded randomized suites for the cochain-level identities.

Each suite draws small random ordered complexes (dimension <= 5) and random
cochains, and checks one identity exactly; a trial is one drawn instance.
The suites are shared by the test suite and the command line runner, and a
deliberately wrong sign can be injected as a mutation control.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from .cochains import Cochain, INT, QMODZ, Z2, Z4, cup_i, d, pullback, sq
from .complexes import OrderedComplex, build_complex, suspension
from .suspension import SuspensionContext, suspend, suspension_context

ALL_SUITES = (
    "coboundary",
    "sq2_sum_rule",
    "sq2_sum_rule_cocycle",
    "sq_commutes_d",
    "suspension_shifts_cup",
    "sd_equals_ds",
    "suspension_cup0",
    "dd_zero",
)


@dataclass
class IdentityReport:
    name: str
    trials: int
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _scaled(c: Cochain, sign: int) -> Cochain:
    if sign == 1:
        return c
    return Cochain(c.complex, c.degree, c.ring, {s: -v for s, v in c.values.items()})


def _mutant_cup(u: Cochain, v: Cochain, i: int) -> Cochain:
    """cup_i with a wrong extra sign (-1)^i; the mutation control."""
    return _scaled(cup_i(u, v, i), (-1) ** (i % 2))


def random_complex(rng: random.Random, max_dim: int = 5) -> OrderedComplex:
    """A few top-dimensional simplices on a small vertex set, plus noise.

    Keeping the vertex set tight forces the maximal simplices to share
    faces, which is where the cup_i identities have content.
    """
    nv = rng.randint(5, 8)
    dim = rng.randint(2, max_dim)
    top = min(dim + 1, nv)
    maximal = [tuple(sorted(rng.sample(range(nv), top)))
               for _ in range(rng.randint(2, 4))]
    for _ in range(rng.randint(0, 2)):
        k = rng.randint(1, top)
        maximal.append(tuple(sorted(rng.sample(range(nv), k))))
    return build_complex(maximal)


def random_cochain(rng: random.Random, x: OrderedComplex, k: int,
                   ring: str = INT, density: float = 0.6) -> Cochain:
    vals: Dict = {}
    for s in x.simplices(k):
        if rng.random() < density:
            if ring == INT:
                v = rng.randint(-3, 3)
            elif ring == Z2:
                v = rng.randint(0, 1)
            elif ring == Z4:
                v = rng.randint(0, 3)
            else:
                from fractions import Fraction

                v = Fraction(rng.randint(0, 7), rng.choice((1, 2, 4)))
            if v:
                vals[s] = v
    return Cochain(x, k, ring, vals)


class _Pool:
    """A deterministic pool of complexes plus their suspensions."""

    def __init__(self, rng: random.Random, size: int = 24, max_dim: int = 5):
        self.complexes = [random_complex(rng, max_dim) for _ in range(size)]
        self._susp: Dict[int, SuspensionContext] = {}
        self._solvers: Dict = {}

    def pick(self, rng: random.Random) -> OrderedComplex:
        return self.complexes[rng.randrange(len(self.complexes))]

    def pick_with_suspension(self, rng: random.Random):
        j = rng.randrange(len(self.complexes))
        if j not in self._susp:
            self._susp[j] = suspension_context(suspension(self.complexes[j]))
        return self.complexes[j], self._susp[j]

    def random_cocycle(self, rng: random.Random, x: OrderedComplex,
                       k: int) -> Cochain:
        """A Z2 cocycle: random class representative plus a coboundary."""
        from .cochains import CohomologySolver
        from .complexes import absolute_pair

        key = (id(x), k)
        if key not in self._solvers:
            self._solvers[key] = CohomologySolver(absolute_pair(x), k)
        solver = self._solvers[key]
        z = solver.reconstruct([rng.randint(0, 1) for _ in range(solver.dim)])
        if k >= 1:
            z = z + d(random_cochain(rng, x, k - 1, Z2))
        return z


def _run(name: str, trials: int, seed: int, max_dim: int,
         body: Callable[[random.Random, _Pool, IdentityReport, int], None]
         ) -> IdentityReport:
    rng = random.Random(f"{name}:{seed}")
    pool = _Pool(rng, max_dim=max_dim)
    report = IdentityReport(name, trials)
    for t in range(trials):
        body(rng, pool, report, t)
    return report


def coboundary_suite(trials: int = 1000, seed: int = 0, max_dim: int = 5,
                     cup: Callable = cup_i) -> IdentityReport:
    """d(X u_i Y) = (-1)^i (dX u_i Y + (-1)^|X| X u_i dY
                           - X u_{i-1} Y - (-1)^{i+|X||Y|} Y u_{i-1} X)."""

    def body(rng, pool, report, t):
        x = pool.pick(rng)
        p = rng.randint(0, min(4, x.dim))
        q = rng.randint(0, min(4, x.dim))
        i = rng.randint(0, min(p, q))
        X = random_cochain(rng, x, p, INT)
        Y = random_cochain(rng, x, q, INT)
        lhs = d(cup(X, Y, i))
        rhs = _scaled(
            cup(d(X), Y, i)
            + _scaled(cup(X, d(Y), i), (-1) ** p)
            + _scaled(cup(X, Y, i - 1), -1)
            + _scaled(cup(Y, X, i - 1), -((-1) ** ((i + p * q) % 2))),
            (-1) ** (i % 2),
        )
        if lhs != rhs:
            report.failures.append(f"trial {t}: p={p} q={q} i={i}")

    return _run("coboundary", trials, seed, max_dim, body)


def sq2_sum_rule_suite(trials: int = 1000, seed: int = 0,
                          max_dim: int = 5, cup: Callable = cup_i) -> IdentityReport:
    """Sq^2(c'+c) = Sq^2 c' + Sq^2 c + dc' u_k dc + d(c' u_{k-1} c + dc' u_k c)."""

    def body(rng, pool, report, t):
        x = pool.pick(rng)
        k = rng.randint(1, max(1, min(4, x.dim)))
        cp = random_cochain(rng, x, k, Z2)
        c = random_cochain(rng, x, k, Z2)
        lhs = sq(2, cp + c)
        rhs = (sq(2, cp) + sq(2, c) + cup(d(cp), d(c), k)
               + d(cup(cp, c, k - 1) + cup(d(cp), c, k)))
        if lhs != rhs:
            report.failures.append(f"trial {t}: k={k}")

    return _run("sq2_sum_rule", trials, seed, max_dim, body)


def sq2_sum_rule_cocycle_suite(trials: int = 1000, seed: int = 0,
                          max_dim: int = 5, cup: Callable = cup_i) -> IdentityReport:
    """For a cocycle c': Sq^2(c'+c) = Sq^2 c' + Sq^2 c + d(c' u_{k-1} c)."""

    def body(rng, pool, report, t):
        x = pool.pick(rng)
        k = rng.randint(1, max(1, min(4, x.dim)))
        c = random_cochain(rng, x, k, Z2)
        cp = pool.random_cocycle(rng, x, k)
        lhs = sq(2, cp + c)
        rhs = sq(2, cp) + sq(2, c) + d(cup(cp, c, k - 1))
        if lhs != rhs:
            report.failures.append(f"trial {t}: k={k}")

    return _run("sq2_sum_rule_cocycle", trials, seed, max_dim, body)


def sq_commutes_d_suite(trials: int = 1000, seed: int = 0,
                        max_dim: int = 5, cup: Callable = cup_i) -> IdentityReport:
    """Sq^i(dc) = d(Sq^i c) for Z2 cochains."""

    def body(rng, pool, report, t):
        x = pool.pick(rng)
        k = rng.randint(0, min(4, x.dim))
        i = rng.randint(0, k + 1)
        c = random_cochain(rng, x, k, Z2)
        dc = d(c)
        lhs = cup(dc, dc, (k + 1) - i) + cup(dc, d(dc), (k + 1) - i + 1)
        rhs = d(cup(c, c, k - i) + cup(c, dc, k - i + 1))
        if lhs != rhs:
            report.failures.append(f"trial {t}: k={k} i={i}")

    return _run("sq_commutes_d", trials, seed, max_dim, body)


def suspension_shifts_cup_suite(trials: int = 1000, seed: int = 0,
                        max_dim: int = 4, cup: Callable = cup_i) -> IdentityReport:
    """s(x u_i y) = (-1)^{|x|+i+1} sx u_{i+1} sy over Int and Z2."""

    def body(rng, pool, report, t):
        x, ctx = pool.pick_with_suspension(rng)
        ring = INT if t % 2 == 0 else Z2
        p = rng.randint(0, min(3, x.dim))
        q = rng.randint(0, min(3, x.dim))
        i = rng.randint(0, min(p, q))
        X = random_cochain(rng, x, p, ring)
        Y = random_cochain(rng, x, q, ring)
        lhs = suspend(ctx, cup(X, Y, i))
        rhs = _scaled(cup(suspend(ctx, X), suspend(ctx, Y), i + 1),
                      (-1) ** ((p + i + 1) % 2))
        if lhs != rhs:
            report.failures.append(f"trial {t}: ring={ring} p={p} q={q} i={i}")

    return _run("suspension_shifts_cup", trials, seed, max_dim, body)


def sd_equals_ds_suite(trials: int = 1000, seed: int = 0,
                       max_dim: int = 4, cup: Callable = cup_i) -> IdentityReport:
    """sd = ds over Int, Z2, Z4 and QmodZ."""

    def body(rng, pool, report, t):
        x, ctx = pool.pick_with_suspension(rng)
        ring = (INT, Z2, Z4, QMODZ)[t % 4]
        k = rng.randint(0, min(3, x.dim))
        c = random_cochain(rng, x, k, ring)
        if suspend(ctx, d(c)) != d(suspend(ctx, c)):
            report.failures.append(f"trial {t}: ring={ring} k={k}")

    return _run("sd_equals_ds", trials, seed, max_dim, body)


def suspension_cup0_suite(trials: int = 1000, seed: int = 0,
                          max_dim: int = 4, cup: Callable = cup_i) -> IdentityReport:
    """sx u_0 sy = 0 identically on the suspension."""

    def body(rng, pool, report, t):
        x, ctx = pool.pick_with_suspension(rng)
        p = rng.randint(0, min(3, x.dim))
        q = rng.randint(0, min(3, x.dim))
        X = random_cochain(rng, x, p, INT)
        Y = random_cochain(rng, x, q, INT)
        if not cup(suspend(ctx, X), suspend(ctx, Y), 0).is_zero():
            report.failures.append(f"trial {t}: p={p} q={q}")

    return _run("suspension_cup0", trials, seed, max_dim, body)


def dd_zero_suite(trials: int = 1000, seed: int = 0,
                  max_dim: int = 5, cup: Callable = cup_i) -> IdentityReport:
    """dd = 0 over every ring."""

    def body(rng, pool, report, t):
        x = pool.pick(rng)
        ring = (INT, Z2, Z4, QMODZ)[t % 4]
        k = rng.randint(0, min(4, x.dim))
        c = random_cochain(rng, x, k, ring)
        if not d(d(c)).is_zero():
            report.failures.append(f"trial {t}: ring={ring} k={k}")

    return _run("dd_zero", trials, seed, max_dim, body)


_SUITES: Dict[str, Callable] = {
    "coboundary": coboundary_suite,
    "sq2_sum_rule": sq2_sum_rule_suite,
    "sq2_sum_rule_cocycle": sq2_sum_rule_cocycle_suite,
    "sq_commutes_d": sq_commutes_d_suite,
    "suspension_shifts_cup": suspension_shifts_cup_suite,
    "sd_equals_ds": sd_equals_ds_suite,
    "suspension_cup0": suspension_cup0_suite,
    "dd_zero": dd_zero_suite,
}


def run_suites(trials: int = 1000, seed: int = 0,
               names: Optional[Sequence[str]] = None,
               mutate_signs: bool = False) -> List[IdentityReport]:
    """Run the named suites (all by default); mutate_signs injects the wrong
    cup_i sign as a control and is expected to make the coboundary and
    suspension suites fail."""
    cup = _mutant_cup if mutate_signs else cup_i
    out = []
    for name in names or ALL_SUITES:
        out.append(_SUITES[name](trials=trials, seed=seed, cup=cup))
    return out


def pullback_identity_suite(trials: int = 200, seed: int = 0) -> IdentityReport:
    """f* commutes with d and with every cup_i along subdivision maps."""
    from .complexes import barycentric_subdivide

    rng = random.Random(f"pullback:{seed}")
    report = IdentityReport("pullback", trials)
    pool = [random_complex(rng, 3) for _ in range(8)]
    subs = [barycentric_subdivide(x) for x in pool]
    for t in range(trials):
        j = rng.randrange(len(pool))
        x, sd = pool[j], subs[j]
        p = rng.randint(0, min(3, x.dim))
        q = rng.randint(0, min(3, x.dim))
        i = rng.randint(0, min(p, q))
        X = random_cochain(rng, x, p, INT)
        Y = random_cochain(rng, x, q, INT)
        f = sd.to_base
        if pullback(f, d(X)) != d(pullback(f, X)):
            report.failures.append(f"trial {t}: d")
            continue
        if pullback(f, cup_i(X, Y, i)) != cup_i(pullback(f, X), pullback(f, Y), i):
            report.failures.append(f"trial {t}: cup_{i}")
    return report
