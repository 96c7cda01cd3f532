"""Seeded defect injection for mutation-guarding the verification campaigns.

Each named defect deliberately corrupts one load-bearing step of the
metric computation.  The test suite turns them on one at a time and
asserts that the campaigns catch the corruption; a campaign that stays
green under every defect would be vacuous.  Production code paths check
:func:`enabled`, which is False for every defect unless a test has
entered :func:`inject`.
"""

from contextlib import contextmanager

__all__ = ["DEFECTS", "enabled", "inject", "active"]

#: Known defect switches:
#: - "drop-cost-abs": pair costs use the signed weight gap instead of its
#:   absolute value.
#: - "skip-truncation": the measure metric returns the raw transport value
#:   without the min(diam, .) truncation.
#: - "skip-column-witnesses": the transport value is computed from row
#:   witnesses only.
DEFECTS = frozenset({"drop-cost-abs", "skip-truncation", "skip-column-witnesses"})

_active: set[str] = set()


def enabled(name: str) -> bool:
    return name in _active


def active() -> frozenset:
    return frozenset(_active)


@contextmanager
def inject(name: str):
    """Enable one defect for the duration of the block (tests only)."""
    if name not in DEFECTS:
        raise ValueError(f"unknown defect {name!r}; known: {sorted(DEFECTS)}")
    _active.add(name)
    try:
        yield
    finally:
        _active.discard(name)
