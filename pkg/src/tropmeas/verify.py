"""Randomized verification campaigns for the metric and monad properties.

Each campaign draws seeded random spaces and measures, runs one executable
property per case, and collects a :class:`LemmaReport` holding every
failure with its full inputs and both sides of the comparison.  Campaigns
are reproducible: the same seed and parameters give the same report.

The checks:

* ``axioms``   -- the functional axioms of measure evaluation (constants,
  additive shifts, pointwise maxima) and the metric axioms of the
  truncated transport distance (nonnegativity, exact symmetry, identity
  of indiscernibles, triangle inequality, diameter bound).
* ``oracle``   -- the witness-based transport value against brute-force
  pattern enumeration, compared bitwise.
* ``lemma1``   -- flatten is non-expanding: the distance between two
  level-2 measures dominates the distance of their flattens.
* ``lemma2``   -- the distance from a measure mu to a Dirac equals the
  level-2 distance between the lifted Dirac and any sampled
  flatten-preimage of mu.
* ``lemma3``   -- if mu is at distance >= eps from every Dirac, then its
  unit-pushforward stays at distance >= eps from every lifted Dirac.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import IdempotentMeasure, dirac, evaluate, make_measure, pointwise_max
from .measures import FunctionOnSpace
from .monad import flatten, map_unit, sample_flatten_preimage, unit
from .spaces import FiniteMetricSpace, index_of_measure, lift, lift_extend
from .transport import (
    bottleneck_distance,
    bottleneck_distance_bruteforce,
    distance_to_diracs,
    measure_distance,
)

__all__ = [
    "CaseFailure",
    "LemmaReport",
    "gen_space",
    "gen_measure",
    "check_axioms",
    "check_lemma1",
    "check_lemma2",
    "check_lemma3",
    "run_axioms",
    "run_oracle_equivalence",
    "run_lemma1",
    "run_lemma2",
    "run_lemma3",
    "CAMPAIGN_TOL",
]

#: Default tolerance for inequalities and equalities that cross nested
#: metric levels; two levels of float summation re-associate the same
#: terms and accumulate ulps.  Single-level algebra uses 1e-12.
CAMPAIGN_TOL = 1e-9


@dataclass
class CaseFailure:
    """One violated case: the check, both sides, and the offending inputs."""

    index: int
    check: str
    lhs: float
    rhs: float
    gap: float
    description: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "check": self.check,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "description": self.description,
        }


@dataclass
class LemmaReport:
    """Outcome of a campaign; failures empty iff max violation <= tolerance."""

    check: str
    cases: int
    tolerance: float
    seed: int | None
    failures: list[CaseFailure] = field(default_factory=list)
    max_violation: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, index: int, check: str, lhs: float, rhs: float,
               violation: float, description: str):
        if violation > self.max_violation:
            self.max_violation = violation
        if violation > self.tolerance:
            self.failures.append(
                CaseFailure(index, check, lhs, rhs, violation, description)
            )

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "cases": self.cases,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "passed": self.passed,
            "max_violation": self.max_violation,
            "failures": [f.to_dict() for f in self.failures],
        }

    def to_text(self) -> str:
        lines = [
            f"check {self.check}: {self.cases} cases, seed {self.seed}, "
            f"tol {self.tolerance:g}",
            f"max violation: {self.max_violation:.12g}",
        ]
        if self.passed:
            lines.append("result: PASS")
        else:
            lines.append(f"result: FAIL ({len(self.failures)} violations)")
            first = self.failures[0]
            lines.append(
                f"first counterexample (case {first.index}, {first.check}): "
                f"lhs = {first.lhs:.12g}, rhs = {first.rhs:.12g}, "
                f"gap = {first.gap:.12g}"
            )
            lines.append("  " + first.description)
        return "\n".join(lines)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _describe_space(space: FiniteMetricSpace) -> str:
    rows = "; ".join(
        " ".join(f"{v:.12g}" for v in row) for row in space.dist
    )
    return f"space(level {space.level}, labels {list(space.labels)}, dist [{rows}])"


def _describe_measure(mu: IdempotentMeasure) -> str:
    inner = ", ".join(
        f"{mu.ground.labels[a]}: {w!r}" for a, w in mu.entries()
    )
    return "{" + inner + "}"


def gen_space(point_count: int, rng, *, low: float = 0.1,
              high: float = 2.0) -> FiniteMetricSpace:
    """A random finite metric space: shortest-path closure of a random
    symmetric weight matrix.  Produces varied geometries, including tight
    path-like triangles."""
    rng = _as_rng(rng)
    n = int(point_count)
    if n < 1:
        raise ValueError("need at least one point")
    w = rng.uniform(low, high, size=(n, n))
    w = np.triu(w, 1)
    w = w + w.T
    np.fill_diagonal(w, 0.0)
    for k in range(n):
        np.minimum(w, w[:, [k]] + w[[k], :], out=w)
    return FiniteMetricSpace(tuple(f"p{i}" for i in range(n)), w)


def gen_measure(space: FiniteMetricSpace, max_support: int, rng, *,
                min_support: int = 1,
                weight_span: float | None = None) -> IdempotentMeasure:
    """A random normalized measure: uniform support subset, weights uniform
    in [-weight_span, 0] with one entry forced to exactly 0.  The span
    defaults to twice the diameter."""
    rng = _as_rng(rng)
    n = len(space)
    max_support = min(int(max_support), n)
    if not 1 <= min_support <= max_support:
        raise ValueError("need 1 <= min_support <= max_support <= point count")
    size = int(rng.integers(min_support, max_support + 1))
    atoms = np.sort(rng.choice(n, size=size, replace=False))
    span = 2.0 * space.truncation_diam if weight_span is None else float(weight_span)
    if span <= 0:
        span = 1.0
    weights = rng.uniform(-span, 0.0, size=size)
    weights[int(rng.integers(size))] = 0.0
    return make_measure(space, [(int(a), float(w)) for a, w in zip(atoms, weights)])


def _random_point_count(rng, space_size) -> int:
    if space_size is not None:
        return int(space_size)
    return int(rng.integers(3, 7))


# ---------------------------------------------------------------------------
# per-case checks


def check_axioms(space: FiniteMetricSpace, cases: int, seed,
                 tol: float = CAMPAIGN_TOL) -> LemmaReport:
    """Functional axioms of evaluation and metric axioms of the distance,
    on random data over one fixed space."""
    rng = _as_rng(seed)
    report = LemmaReport("axioms", cases, tol,
                         seed if isinstance(seed, int) else None)
    n = len(space)
    sdesc = _describe_space(space)
    for i in range(cases):
        mu = gen_measure(space, n, rng)
        phi = FunctionOnSpace(space, tuple(rng.uniform(-10, 10, size=n)))
        psi = FunctionOnSpace(space, tuple(rng.uniform(-10, 10, size=n)))
        c = float(rng.uniform(-10, 10))
        mdesc = f"mu = {_describe_measure(mu)} over {sdesc}"

        const = FunctionOnSpace(space, (c,) * n)
        lhs = evaluate(mu, const)
        report.record(i, "constants", lhs, c,
                      0.0 if lhs == c else abs(lhs - c), mdesc)

        lhs = evaluate(mu, phi.shift(c))
        rhs = evaluate(mu, phi) + c
        report.record(i, "shift", lhs, rhs, abs(lhs - rhs), mdesc)

        lhs = evaluate(mu, pointwise_max(phi, psi))
        rhs = max(evaluate(mu, phi), evaluate(mu, psi))
        report.record(i, "max", lhs, rhs,
                      0.0 if lhs == rhs else abs(lhs - rhs), mdesc)

        m1 = gen_measure(space, n, rng)
        m2 = gen_measure(space, n, rng)
        m3 = gen_measure(space, n, rng)
        d12 = measure_distance(m1, m2)
        d21 = measure_distance(m2, m1)
        d13 = measure_distance(m1, m3)
        d23 = measure_distance(m2, m3)
        tdesc = (
            f"m1 = {_describe_measure(m1)}, m2 = {_describe_measure(m2)}, "
            f"m3 = {_describe_measure(m3)} over {sdesc}"
        )
        report.record(i, "nonnegativity", d12, 0.0,
                      0.0 if d12 >= 0 else -d12, tdesc)
        report.record(i, "symmetry", d12, d21,
                      0.0 if d12 == d21 else abs(d12 - d21), tdesc)
        report.record(i, "self-distance", measure_distance(m1, m1), 0.0,
                      abs(measure_distance(m1, m1)), tdesc)
        if m1 != m2:
            report.record(i, "identity-of-indiscernibles", d12, 0.0,
                          0.0 if d12 > 0 else 1.0, tdesc)
        report.record(i, "triangle", d13, d12 + d23,
                      max(0.0, d13 - (d12 + d23)), tdesc)
        diam = space.truncation_diam
        report.record(i, "diameter-bound", d12, diam,
                      max(0.0, d12 - diam), tdesc)
    return report


def check_lemma1(M1: IdempotentMeasure, M2: IdempotentMeasure,
                 tol: float = CAMPAIGN_TOL):
    """(lhs, rhs, violation) for one non-expansion case: rhs is the level-2
    distance, lhs the distance of the flattens; violation is lhs - rhs."""
    lhs = measure_distance(flatten(M1), flatten(M2))
    rhs = measure_distance(M1, M2)
    return lhs, rhs, lhs - rhs


def check_lemma2(mu: IdempotentMeasure, x0: int, group_count: int,
                 extras: int, rng, tol: float = CAMPAIGN_TOL):
    """(lhs, rhs, gap) for one preimage case.

    lhs is the distance from mu to the Dirac at x0; rhs is the level-2
    distance between the lifted Dirac and a sampled flatten-preimage N,
    rebuilt over a lifted space holding N's atoms plus the Dirac.
    """
    N = sample_flatten_preimage(mu, group_count, rng, extras)
    ground = mu.ground
    d0 = dirac(ground, x0)
    lifted = lift(ground, list(N.ground.points) + [d0])
    N2 = make_measure(
        lifted,
        [
            (index_of_measure(lifted, N.ground.points[a]), w)
            for a, w in N.entries()
        ],
    )
    target = unit(d0, lifted)
    lhs = measure_distance(mu, d0)
    rhs = measure_distance(target, N2)
    return lhs, rhs, abs(lhs - rhs), N


def check_lemma3(mu: IdempotentMeasure, sample_count: int, rng,
                 tol: float = CAMPAIGN_TOL):
    """(eps, worst_rhs, violation) for one separation case.

    eps is the distance from mu to the nearest Dirac; the check samples
    measures nu (plus every Dirac of the space) and requires the level-2
    distance between map_unit(mu) and the lifted Dirac at nu to stay
    above eps, up to tolerance.
    """
    rng = _as_rng(rng)
    ground = mu.ground
    eps = distance_to_diracs(mu)
    base = lift(ground, [dirac(ground, a) for a in mu.atoms])
    worst = math.inf
    worst_nu = None
    samples = [dirac(ground, x) for x in range(len(ground))]
    samples += [
        gen_measure(ground, len(ground), rng) for _ in range(sample_count)
    ]
    for nu in samples:
        lifted = lift_extend(base, [nu])
        lifted_mu = map_unit(mu, lifted)
        rhs = measure_distance(lifted_mu, unit(nu, lifted))
        if rhs < worst:
            worst = rhs
            worst_nu = nu
    return eps, worst, max(0.0, eps - worst), worst_nu


# ---------------------------------------------------------------------------
# campaign drivers


def run_axioms(cases: int = 1000, seed: int = 0, tol: float = CAMPAIGN_TOL,
               space_size: int | None = None) -> LemmaReport:
    """Axioms over a fresh random space per case."""
    rng = _as_rng(seed)
    report = LemmaReport("axioms", cases, tol, seed)
    for i in range(cases):
        space = gen_space(_random_point_count(rng, space_size), rng)
        sub = check_axioms(space, 1, rng, tol)
        for f in sub.failures:
            f.index = i
            report.failures.append(f)
        if sub.max_violation > report.max_violation:
            report.max_violation = sub.max_violation
    return report


def run_oracle_equivalence(cases: int = 500, seed: int = 0,
                           tol: float = 0.0,
                           space_size: int | None = None,
                           max_support: int = 4) -> LemmaReport:
    """Witness-based transport value vs. brute-force enumeration, bitwise."""
    rng = _as_rng(seed)
    report = LemmaReport("oracle", cases, tol, seed)
    for i in range(cases):
        space = gen_space(_random_point_count(rng, space_size), rng)
        m1 = gen_measure(space, max_support, rng)
        m2 = gen_measure(space, max_support, rng)
        h = bottleneck_distance(m1, m2)
        o = bottleneck_distance_bruteforce(m1, m2)
        gap = abs(h - o)
        violation = 0.0 if h == o else (gap if gap > 0 else math.inf)
        report.record(
            i, "oracle-equivalence", h, o, violation,
            f"m1 = {_describe_measure(m1)}, m2 = {_describe_measure(m2)} "
            f"over {_describe_space(space)}",
        )
    return report


def run_lemma1(cases: int = 500, seed: int = 0, tol: float = CAMPAIGN_TOL,
               space_size: int | None = None, max_outer: int = 3,
               max_inner: int = 3) -> LemmaReport:
    """Non-expansion of flatten on random level-2 pairs."""
    rng = _as_rng(seed)
    report = LemmaReport("lemma1", cases, tol, seed)
    for i in range(cases):
        space = gen_space(_random_point_count(rng, space_size), rng)
        pool_size = int(rng.integers(2, 2 * max_outer + 1))
        pool = [gen_measure(space, max_inner, rng) for _ in range(pool_size)]
        lifted = lift(space, pool)
        M1 = gen_measure(lifted, max_outer, rng)
        M2 = gen_measure(lifted, max_outer, rng)
        lhs, rhs, violation = check_lemma1(M1, M2, tol)
        report.record(
            i, "non-expansion", lhs, rhs, violation,
            f"M1 = {_describe_measure(M1)}, M2 = {_describe_measure(M2)}, "
            f"inner points = {[_describe_measure(p) for p in lifted.points]} "
            f"over {_describe_space(space)}",
        )
    return report


def run_lemma2(cases: int = 500, seed: int = 0, tol: float = CAMPAIGN_TOL,
               space_size: int | None = None, max_support: int = 4,
               max_extras: int = 3) -> LemmaReport:
    """Dirac distance vs. level-2 distance to sampled flatten-preimages."""
    rng = _as_rng(seed)
    report = LemmaReport("lemma2", cases, tol, seed)
    for i in range(cases):
        space = gen_space(_random_point_count(rng, space_size), rng)
        mu = gen_measure(space, max_support, rng)
        x0 = int(rng.integers(len(space)))
        s = int(rng.integers(1, mu.support_size + 1))
        extras = int(rng.integers(0, max_extras + 1))
        lhs, rhs, gap, N = check_lemma2(mu, x0, s, extras, rng, tol)
        report.record(
            i, "preimage-dirac-distance", lhs, rhs, gap,
            f"mu = {_describe_measure(mu)}, x0 = {space.labels[x0]}, "
            f"groups = {s}, extras = {extras}, "
            f"N = {_describe_measure(N)} with atoms "
            f"{[_describe_measure(p) for p in N.ground.points]} "
            f"over {_describe_space(space)}",
        )
    return report


def run_lemma3(cases: int = 100, seed: int = 0, tol: float = CAMPAIGN_TOL,
               space_size: int | None = None, sample_count: int = 200,
               max_support: int = 4) -> LemmaReport:
    """Separation from the Diracs survives the unit pushforward."""
    rng = _as_rng(seed)
    report = LemmaReport("lemma3", cases, tol, seed)
    for i in range(cases):
        space = gen_space(_random_point_count(rng, space_size), rng)
        mu = gen_measure(space, max_support, rng, min_support=2)
        eps, worst, violation, worst_nu = check_lemma3(mu, sample_count, rng, tol)
        report.record(
            i, "unit-separation", eps, worst, violation,
            f"mu = {_describe_measure(mu)}, eps = {eps!r}, "
            f"worst nu = {_describe_measure(worst_nu)} "
            f"over {_describe_space(space)}",
        )
    return report
