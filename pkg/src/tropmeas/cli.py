"""Command-line front end.

One JSON document format serves every nesting level: a document holds one
base space and named measures whose support atoms are point labels
(level-1 measures), nested measure terms, or names of other measures in
the same document (levels >= 2).  Commands compute distances, flattens,
pushforwards and evaluations, and drive the randomized verification
campaigns.

Exit codes: 0 success, 1 usage error, 2 parse/validation error,
3 property violation.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .measures import (
    FunctionOnSpace,
    IdempotentMeasure,
    evaluate,
    make_measure,
    pushforward,
)
from .monad import flatten
from .spaces import FiniteMetricSpace, index_of_measure, lift, validate
from .transport import (
    bottleneck_distance,
    bottleneck_distance_bruteforce,
    measure_distance,
)
from .verify import (
    run_axioms,
    run_lemma1,
    run_lemma2,
    run_lemma3,
    run_oracle_equivalence,
)

__all__ = ["main", "parse_document", "document_to_text", "measure_to_term",
           "Document", "DocumentError", "UsageError"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_VIOLATION = 3


class UsageError(Exception):
    pass


class DocumentError(Exception):
    pass


@dataclass
class Document:
    """A parsed document: the base space and its named measures."""

    space: FiniteMetricSpace
    measures: dict

    def measure(self, name: str) -> IdempotentMeasure:
        try:
            return self.measures[name]
        except KeyError:
            raise DocumentError(
                f"unknown measure {name!r}; document defines {sorted(self.measures)}"
            ) from None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# parsing


def _parse_weight(w, name: str) -> float:
    if isinstance(w, str):
        if w == "-inf":
            raise DocumentError(
                f"weight \"-inf\" in support of {name!r}: support weights must be finite"
            )
        raise DocumentError(f"weight {w!r} in {name!r} is not a number")
    if isinstance(w, bool) or not isinstance(w, (int, float)):
        raise DocumentError(f"weight {w!r} in {name!r} is not a number")
    w = float(w)
    if not math.isfinite(w):
        raise DocumentError(
            f"non-finite weight {w!r} in support of {name!r}: "
            "support weights must be finite"
        )
    return w


def _term_support(term, name: str) -> list:
    if not isinstance(term, dict) or "support" not in term:
        raise DocumentError(f"measure {name!r} must be an object with a 'support' list")
    sup = term["support"]
    if not isinstance(sup, list) or not sup:
        raise DocumentError(f"measure {name!r} needs a nonempty 'support' list")
    out = []
    for entry in sup:
        if not isinstance(entry, dict) or "atom" not in entry or "weight" not in entry:
            raise DocumentError(
                f"support entries of {name!r} must carry 'atom' and 'weight'"
            )
        out.append((entry["atom"], _parse_weight(entry["weight"], name)))
    return out


def _space_from_raw(raw) -> FiniteMetricSpace:
    if not isinstance(raw, dict) or "space" not in raw:
        raise DocumentError("document must be a JSON object with a 'space' entry")
    blk = raw["space"]
    if not isinstance(blk, dict) or "points" not in blk or "dist" not in blk:
        raise DocumentError("'space' must carry 'points' and 'dist'")
    points = blk["points"]
    if (not isinstance(points, list) or not points
            or not all(isinstance(p, str) for p in points)):
        raise DocumentError("'points' must be a nonempty list of strings")
    dist = blk["dist"]
    n = len(points)
    if (not isinstance(dist, list) or len(dist) != n
            or any(not isinstance(r, list) or len(r) != n for r in dist)):
        raise DocumentError(f"'dist' must be a {n}x{n} matrix")
    for row in dist:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise DocumentError(f"distance {v!r} is not a number")
    try:
        space = FiniteMetricSpace(points, dist, check=False)
    except Exception as e:
        raise DocumentError(f"invalid space: {e}") from None
    violation = validate(space)
    if violation is not None:
        raise DocumentError(f"invalid space ({violation.axiom}): {violation.message}")
    return space


def parse_document(text: str) -> Document:
    """Parse and fully validate a document.

    All measures are constructed (and therefore normalization-checked) and
    lifted spaces are built level by level, so measures of measures of any
    depth share one lifted space per level.  An atom string resolves to a
    point label first and to a named measure otherwise.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(
            f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None

    space = _space_from_raw(raw)
    raw_measures = raw.get("measures", {})
    if not isinstance(raw_measures, dict):
        raise DocumentError("'measures' must map names to measure terms")
    for name in raw_measures:
        if not isinstance(name, str):
            raise DocumentError(f"measure name {name!r} must be a string")

    labels = set(space.labels)
    levels: dict[int, int] = {}
    terms_by_id: dict[int, tuple] = {}

    def term_level(term, name: str, visiting: tuple) -> int:
        key = id(term)
        if key in levels:
            return levels[key]
        atom_levels = set()
        for atom, _ in _term_support(term, name):
            if isinstance(atom, dict):
                atom_levels.add(term_level(atom, f"{name}(nested)", visiting))
            elif isinstance(atom, str):
                if atom in labels:
                    atom_levels.add(0)
                elif atom in raw_measures:
                    if atom in visiting:
                        cycle = " -> ".join(visiting + (atom,))
                        raise DocumentError(f"cycle in measure references: {cycle}")
                    atom_levels.add(
                        term_level(raw_measures[atom], atom, visiting + (atom,))
                    )
                else:
                    raise DocumentError(
                        f"unknown atom {atom!r} in measure {name!r}: "
                        "neither a point label nor a measure name"
                    )
            else:
                raise DocumentError(
                    f"atom {atom!r} in measure {name!r} must be a label, "
                    "a measure name, or a nested term"
                )
        if len(atom_levels) != 1:
            raise DocumentError(
                f"measure {name!r} mixes atoms of different levels"
            )
        levels[key] = atom_levels.pop() + 1
        terms_by_id[key] = (term, name)
        return levels[key]

    for name, term in raw_measures.items():
        term_level(term, name, (name,))

    # Build every term of one level (named and anonymous alike) before
    # lifting the ground for the next, so each lifted space sees all its
    # member measures at once.
    built: dict[int, IdempotentMeasure] = {}
    ground_for: dict[int, FiniteMetricSpace] = {0: space}
    max_level = max(levels.values(), default=0)
    for lv in range(1, max_level + 1):
        ground = ground_for[lv - 1]
        for key, (term, name) in terms_by_id.items():
            if levels[key] != lv:
                continue
            entries = []
            for atom, w in _term_support(term, name):
                if lv == 1:
                    entries.append((atom, w))
                else:
                    inner_term = raw_measures[atom] if isinstance(atom, str) else atom
                    entries.append(
                        (index_of_measure(ground, built[id(inner_term)]), w)
                    )
            try:
                built[key] = make_measure(ground, entries)
            except ValueError as e:
                raise DocumentError(f"invalid measure {name!r}: {e}") from None
        if lv < max_level:
            members = [built[key] for key, l in levels.items() if l == lv]
            ground_for[lv] = lift(ground_for[lv - 1], members)

    measures = {name: built[id(term)] for name, term in raw_measures.items()}
    return Document(space, measures)


# ---------------------------------------------------------------------------
# rendering


def measure_to_term(mu: IdempotentMeasure) -> dict:
    sup = []
    for a, w in mu.entries():
        if mu.ground.level == 0:
            atom = mu.ground.labels[a]
        else:
            atom = measure_to_term(mu.ground.points[a])
        sup.append({"atom": atom, "weight": w})
    return {"support": sup}


def document_to_text(doc: Document) -> str:
    payload = {
        "space": {
            "points": list(doc.space.labels),
            "dist": [list(row) for row in doc.space.dist.tolist()],
        },
        "measures": {name: measure_to_term(m) for name, m in doc.measures.items()},
    }
    return json.dumps(payload, indent=2)


# ---------------------------------------------------------------------------
# commands


def _load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from None
    return parse_document(text)


def _parse_pairs(spec: str, flag: str) -> dict:
    out = {}
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise UsageError(f"{flag} expects comma-separated key=value pairs, got {chunk!r}")
        key, _, val = chunk.partition("=")
        out[key.strip()] = val.strip()
    if not out:
        raise UsageError(f"{flag} must not be empty")
    return out


def cmd_dist(args) -> int:
    doc = _load(args.file)
    m1 = doc.measure(args.m1)
    m2 = doc.measure(args.m2)
    if m1.ground is not m2.ground:
        raise DocumentError(
            f"{args.m1!r} and {args.m2!r} are measures at different levels"
        )
    h = bottleneck_distance(m1, m2)
    r = measure_distance(m1, m2)
    d = m1.ground.truncation_diam
    if h > d:
        print(f"H = {_fmt(h)}, rho_I = {_fmt(r)} (truncated at diam = {_fmt(d)})")
    else:
        print(f"H = {_fmt(h)}, rho_I = {_fmt(r)} (diam = {_fmt(d)}, no truncation)")
    if args.oracle:
        try:
            o = bottleneck_distance_bruteforce(m1, m2)
        except ValueError as e:
            raise DocumentError(str(e)) from None
        print(f"H_oracle = {_fmt(o)}")
        if o != h:
            print(
                f"MISMATCH: H = {h!r} but H_oracle = {o!r}",
                file=sys.stderr,
            )
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_flatten(args) -> int:
    doc = _load(args.file)
    m = doc.measure(args.m)
    if m.ground.level < 1:
        raise DocumentError(
            f"{args.m!r} is a measure over the base space; flatten needs level >= 2"
        )
    print(json.dumps(measure_to_term(flatten(m)), indent=2))
    return EXIT_OK


def cmd_push(args) -> int:
    doc = _load(args.file)
    m = doc.measure(args.m)
    mapping = _parse_pairs(args.map, "--map")
    try:
        result = pushforward(mapping, m)
    except (ValueError, KeyError) as e:
        raise DocumentError(str(e)) from None
    print(json.dumps(measure_to_term(result), indent=2))
    return EXIT_OK


def cmd_eval(args) -> int:
    doc = _load(args.file)
    m = doc.measure(args.m)
    pairs = _parse_pairs(args.phi, "--phi")
    try:
        values = {k: float(v) for k, v in pairs.items()}
    except ValueError:
        raise UsageError("--phi values must be numbers") from None
    try:
        phi = FunctionOnSpace.from_mapping(m.ground, values)
    except ValueError as e:
        raise DocumentError(str(e)) from None
    print(_fmt(evaluate(m, phi)))
    return EXIT_OK


_CAMPAIGNS = {
    "oracle": (run_oracle_equivalence, 500, 0.0),
    "axioms": (run_axioms, 1000, 1e-9),
    "lemma1": (run_lemma1, 500, 1e-9),
    "lemma2": (run_lemma2, 500, 1e-9),
    "lemma3": (run_lemma3, 100, 1e-9),
}


def cmd_verify(args) -> int:
    runner, default_cases, default_tol = _CAMPAIGNS[args.check]
    cases = default_cases if args.cases is None else args.cases
    tol = default_tol if args.tol is None else args.tol
    report = runner(cases=cases, seed=args.seed, tol=tol, space_size=args.space_size)
    print(report.to_text())
    return EXIT_OK if report.passed else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tropmeas",
                     description="max-plus measures on finite metric spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="transport value and metric between two measures")
    p.add_argument("file")
    p.add_argument("m1")
    p.add_argument("m2")
    p.add_argument("--oracle", action="store_true",
                   help="also run brute-force enumeration and compare")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("flatten", help="collapse a measure of measures")
    p.add_argument("file")
    p.add_argument("m")
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("push", help="pushforward under a point map")
    p.add_argument("file")
    p.add_argument("m")
    p.add_argument("--map", required=True, metavar="a=b,c=d")
    p.set_defaults(func=cmd_push)

    p = sub.add_parser("eval", help="evaluate a measure against a function")
    p.add_argument("file")
    p.add_argument("m")
    p.add_argument("--phi", required=True, metavar="a=1,b=5")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run a randomized verification campaign")
    p.add_argument("check", choices=sorted(_CAMPAIGNS))
    p.add_argument("--space-size", type=int, default=None,
                   help="fixed point count (default: random 3-6 per case)")
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
