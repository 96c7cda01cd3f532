"""Finite metric spaces, their validation, and lifting to spaces of measures.

A level-0 space is plain user data: distinct point labels plus a distance
matrix that must pass the metric axioms.  A level-k space for k >= 1 is a
"lifted" space whose points are finite-support idempotent measures over
the level k-1 space and whose pairwise distances are the truncated
bottleneck transport metric of :mod:`tropmeas.transport`.

Every space stores an explicit truncation diameter used by the metric's
``min(diam, .)`` truncation.  For level-0 spaces it equals the maximum
pairwise distance exactly.  Lifted spaces inherit the ground diameter:
the space of measures over X has the same diameter as X, and a lifted
space built from a finite sample of measures keeps the full truncation
even when the sampled pairwise distances all stay below it.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FiniteMetricSpace",
    "InvalidSpaceError",
    "MetricViolation",
    "TRIANGLE_TOL",
    "validate",
    "diameter",
    "lift",
    "lift_extend",
    "index_of_measure",
]

#: Slack allowed when checking the triangle inequality on float input.
TRIANGLE_TOL = 1e-9


class InvalidSpaceError(ValueError):
    """Raised when a distance matrix fails the metric axioms."""


@dataclass(frozen=True)
class MetricViolation:
    """First metric axiom violated by a distance matrix."""

    axiom: str
    message: str


class FiniteMetricSpace:
    """A finite labeled point set with a distance matrix.

    Instances are immutable after construction.  ``check=True`` (the
    default) validates the metric axioms and raises
    :class:`InvalidSpaceError` on failure; pass ``check=False`` to build
    an unchecked space for later inspection with :func:`validate`.
    Lifted spaces (``level >= 1``) carry their points explicitly as
    measures and are validated lazily because their distances are
    computed, not user input.
    """

    __slots__ = ("labels", "dist", "truncation_diam", "level", "points", "_rows", "_index")

    def __init__(self, labels, dist, *, truncation_diam=None, level=0,
                 points=None, check=True):
        labels = tuple(labels)
        n = len(labels)
        if n == 0:
            raise InvalidSpaceError("a space needs at least one point")
        if len(set(labels)) != n:
            raise InvalidSpaceError("point labels must be distinct")
        d = np.array(dist, dtype=float)
        if d.shape != (n, n):
            raise InvalidSpaceError(
                f"distance matrix must be {n}x{n}, got shape {d.shape}"
            )
        d.setflags(write=False)

        if level == 0:
            if points is not None:
                raise InvalidSpaceError("level-0 spaces have plain points, not measures")
            if truncation_diam is not None:
                raise InvalidSpaceError(
                    "the truncation diameter of a level-0 space is computed, not supplied"
                )
            truncation_diam = float(d.max())
        else:
            if points is None or len(points) != n:
                raise InvalidSpaceError("a lifted space needs one measure per label")
            points = tuple(points)
            if truncation_diam is None:
                raise InvalidSpaceError("a lifted space needs an explicit truncation diameter")
            truncation_diam = float(truncation_diam)

        self.labels = labels
        self.dist = d
        self.truncation_diam = truncation_diam
        self.level = int(level)
        self.points = points
        # Plain-float rows for hot scalar lookups.
        self._rows = tuple(tuple(float(x) for x in row) for row in d)
        self._index = {lab: i for i, lab in enumerate(labels)}

        if check:
            v = validate(self)
            if v is not None:
                raise InvalidSpaceError(v.message)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown point label {label!r}") from None

    def __repr__(self) -> str:
        return (
            f"FiniteMetricSpace({len(self)} points, level {self.level}, "
            f"diam {self.truncation_diam!r})"
        )


def validate(space: FiniteMetricSpace) -> MetricViolation | None:
    """Report the first violated metric axiom, or None if the space is valid.

    Checks, in order: nonnegativity/finiteness, symmetry, zero diagonal,
    identity of indiscernibles, triangle inequality (within
    ``TRIANGLE_TOL``), and the truncation bound.
    """
    d = space.dist
    labels = space.labels
    n = len(labels)

    bad = ~np.isfinite(d) | (d < 0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return MetricViolation(
            "nonnegativity",
            f"distance at ({labels[i]}, {labels[j]}) is {d[i, j]!r}",
        )

    asym = d != d.T
    if asym.any():
        i, j = np.argwhere(asym)[0]
        return MetricViolation(
            "symmetry",
            f"symmetry violation at ({labels[i]}, {labels[j]}): "
            f"{d[i, j]!r} != {d[j, i]!r}",
        )

    diag = np.diagonal(d)
    if (diag != 0).any():
        i = int(np.argwhere(diag != 0)[0][0])
        return MetricViolation(
            "zero-diagonal", f"nonzero self-distance {d[i, i]!r} at {labels[i]}"
        )

    offdiag_zero = (d == 0) & ~np.eye(n, dtype=bool)
    if offdiag_zero.any():
        i, j = np.argwhere(offdiag_zero)[0]
        return MetricViolation(
            "identity-of-indiscernibles",
            f"distinct points {labels[i]} and {labels[j]} are at distance 0",
        )

    for k in range(n):
        excess = d - (d[:, [k]] + d[[k], :])
        if (excess > TRIANGLE_TOL).any():
            i, j = np.argwhere(excess > TRIANGLE_TOL)[0]
            return MetricViolation(
                "triangle",
                f"triangle violation: d({labels[i]}, {labels[j]}) = {d[i, j]!r} "
                f"> d via {labels[k]} = {(d[i, k] + d[k, j])!r}",
            )

    if space.truncation_diam < d.max():
        return MetricViolation(
            "truncation-bound",
            f"truncation diameter {space.truncation_diam!r} is below the "
            f"maximum pairwise distance {d.max()!r}",
        )
    return None


def diameter(space: FiniteMetricSpace) -> float:
    """The truncation diameter of the space."""
    return space.truncation_diam


def _dedupe(measures, tol: float):
    from .measures import measures_close

    reps = []
    for m in measures:
        if not any(measures_close(m, r, tol) for r in reps):
            reps.append(m)
    return reps


def lift(ground: FiniteMetricSpace, measures, *, check=False) -> FiniteMetricSpace:
    """Build the space of measures over ``ground`` spanned by ``measures``.

    Pairwise distances are the truncated transport metric; duplicate
    measures (equal supports, weights within 1e-9) merge to one point; the
    truncation diameter is inherited from the ground space.  ``check=True``
    additionally runs the metric axioms on the computed matrix, which is
    meant for tests: the triangle inequality of the transport metric is a
    property under test, not an assumption.
    """
    from .measures import SpaceMismatchError
    from .transport import measure_distance

    measures = list(measures)
    if not measures:
        raise InvalidSpaceError("lift needs at least one measure")
    for m in measures:
        if m.ground is not ground:
            raise SpaceMismatchError("all lifted measures must share the ground space")

    reps = _dedupe(measures, 1e-9)
    n = len(reps)
    dmat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = measure_distance(reps[i], reps[j])
            dmat[i, j] = dmat[j, i] = v
    return FiniteMetricSpace(
        tuple(f"mu{i}" for i in range(n)),
        dmat,
        truncation_diam=ground.truncation_diam,
        level=ground.level + 1,
        points=tuple(reps),
        check=check,
    )


def lift_extend(lifted: FiniteMetricSpace, extra_measures, *, check=False) -> FiniteMetricSpace:
    """Extend a lifted space with further measures, reusing known distances.

    Equivalent to re-lifting the union, but the distance block between
    existing points is copied instead of recomputed.
    """
    from .measures import measures_close
    from .transport import measure_distance

    if lifted.level < 1:
        raise InvalidSpaceError("lift_extend needs a lifted space")
    fresh = []
    for m in extra_measures:
        if any(measures_close(m, p) for p in lifted.points) or any(
            measures_close(m, f) for f in fresh
        ):
            continue
        fresh.append(m)
    if not fresh:
        return lifted

    old = len(lifted)
    pts = list(lifted.points) + fresh
    n = len(pts)
    dmat = np.zeros((n, n))
    dmat[:old, :old] = lifted.dist
    for j in range(old, n):
        for i in range(j):
            v = measure_distance(pts[i], pts[j])
            dmat[i, j] = dmat[j, i] = v
    return FiniteMetricSpace(
        tuple(f"mu{i}" for i in range(n)),
        dmat,
        truncation_diam=lifted.truncation_diam,
        level=lifted.level,
        points=tuple(pts),
        check=check,
    )


def index_of_measure(lifted: FiniteMetricSpace, mu, tol: float = 1e-9) -> int:
    """Locate the point of a lifted space equal to ``mu`` (within ``tol``)."""
    from .measures import measures_close

    if lifted.level < 1:
        raise InvalidSpaceError("only lifted spaces have measures as points")
    for i, p in enumerate(lifted.points):
        if measures_close(mu, p, tol):
            return i
    raise ValueError("measure is not a point of this lifted space")
