"""``unifree`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
JSON reports are emitted with sorted keys, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import ellone, freecat, funcgraph
from .action import SetCarrier
from .errors import InputError, NoFixedPoint, NotEnoughNaturalComponents, UnifreeError
from .monoid import EnumerationBound, monoid_by_name

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(UnifreeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="sampling seed (default 0)")
    common.add_argument(
        "--bound", type=int, default=argparse.SUPPRESS, help="enumeration bound (meaning per command)"
    )
    p = _Parser(prog="unifree", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="decide surjective universality of a self-map")
    a.add_argument("description", type=Path)

    lf = sub.add_parser("lift", parents=[common], help="lift a finite self-map through a described one")
    lf.add_argument("--source", type=Path, required=True, help="self-map description JSON")
    lf.add_argument("--target", type=Path, required=True, help="finite self-map JSON")
    lf.add_argument("--depth", type=int, default=6)
    lf.add_argument("--copies", type=int, default=None)
    lf.add_argument("--fixed-point", default=None, help="designated fixed point of the target")
    lf.add_argument("--output", type=Path, default=None, help="also write the certificate here")

    c = sub.add_parser("certify", parents=[common], help="re-verify a certificate produced by this tool")
    c.add_argument("certificate", type=Path)

    lw = sub.add_parser("laws", parents=[common], help="run the adjunction and nice-epi law checks")
    lw.add_argument("--category", choices=sorted(freecat.INSTANCES), required=True)
    lw.add_argument("--nice", choices=("surjective", "right_invertible"), default="surjective")

    e = sub.add_parser("ellone", parents=[common], help="lift a rational non-expansive operator to l1(nu)")
    e.add_argument("--matrix", required=True, help="JSON rows, or a path to a JSON file")
    e.add_argument("--seed-vectors", default=None, help="JSON list of seed vectors (default: unit basis)")
    e.add_argument("--depth", type=int, default=6)
    e.add_argument("--samples", type=int, default=20)
    e.add_argument("--output", type=Path, default=None)

    u = sub.add_parser("universal", parents=[common], help="build the universal action on a free object")
    u.add_argument("--category", choices=sorted(freecat.INSTANCES), required=True)
    u.add_argument("--monoid", required=True, help="trivial, N, Z, Z<n>, free<k>, freegroup<k>")
    u.add_argument("--index", type=int, default=1, help="size of the index set")
    return p


def parse_args(argv=None) -> argparse.Namespace:
    ns = build_parser().parse_args(argv)
    ns.json = getattr(ns, "json", False)
    ns.seed = getattr(ns, "seed", 0)
    ns.bound = getattr(ns, "bound", None)
    return ns


# -- input helpers --------------------------------------------------------


def _load_json(path_or_text, allow_inline: bool = False) -> Any:
    text = str(path_or_text)
    if allow_inline and text.lstrip().startswith(("[", "{")):
        source = text
    else:
        try:
            source = Path(text).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {text}: {exc.strerror}") from None
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {text}: {exc}") from None


def _rows(data) -> list:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError("expected a list of rows")
    return [[ellone.parse_rational(x) for x in r] for r in data]


# -- commands -------------------------------------------------------------


def cmd_analyze(ns) -> tuple[dict, int]:
    d = funcgraph.SelfMapDescription.from_json(_load_json(ns.description))
    report = decide_report(d)
    return report, EXIT_OK


def decide_report(d) -> dict:
    v = funcgraph.decide_universality(d)
    report = v.to_json()
    report["kind"] = "analysis"
    return report


def _lift(d, f, depth, copies, fixed_point):
    verdict = funcgraph.decide_universality(d)
    if fixed_point is None and verdict.is_universal:
        return verdict.lift(f, depth, copies), None
    try:
        return funcgraph.lift_with_fixed_point(d, f, fixed_point, depth, copies), None
    except (NoFixedPoint, NotEnoughNaturalComponents) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def cmd_lift(ns) -> tuple[dict, int]:
    d_json = _load_json(ns.source)
    f_json = _load_json(ns.target)
    d = funcgraph.SelfMapDescription.from_json(d_json)
    f = funcgraph.FiniteSelfMap.from_json(f_json)
    if ns.depth < 1:
        raise InputError("depth must be positive")
    fixed = None
    if ns.fixed_point is not None:
        by_str = {str(p): p for p in f.points}
        if ns.fixed_point not in by_str:
            raise InputError(f"unknown point {ns.fixed_point!r}")
        fixed = by_str[ns.fixed_point]
    copies = ns.copies or len(f.points)
    lifting, why = _lift(d, f, ns.depth, copies, fixed)
    report = {
        "kind": "selfmap_lifting",
        "source": d.to_json(),
        "target": f.to_json(),
        "depth": ns.depth,
        "copies": copies,
        "fixed_point": ns.fixed_point,
    }
    if lifting is None:
        oracle = funcgraph.brute_force_lifting_exists(d, f, depth=ns.depth, copies=copies)
        report.update({"reason": why, "oracle": oracle.outcome, "oracle_reason": oracle.reason})
        if oracle.outcome != "yes":
            report["passes"] = False
            return report, EXIT_FAIL
        squares, surj = funcgraph.certify_selfmap_lifting(oracle.truncation, f, oracle.witness)
        lifting = funcgraph.SelfMapLifting(oracle.truncation, f, oracle.witness, squares, surj, "search")
    report["certificate"] = lifting.to_json()
    report["passes"] = lifting.passes
    if ns.output:
        ns.output.write_text(_dump(report))
    return report, EXIT_OK if lifting.passes else EXIT_FAIL


def _ellone_run(matrix, seed_vectors, depth, samples, rng_seed):
    target = ellone.RationalTarget.from_rows(matrix)
    if seed_vectors is None:
        seed_vectors = [[int(i == j) for j in range(target.dim)] for i in range(target.dim)]
    return ellone.lift_through_nu(target, seed_vectors, depth=depth, samples=samples, rng_seed=rng_seed)


def cmd_ellone(ns) -> tuple[dict, int]:
    matrix = _rows(_load_json(ns.matrix, allow_inline=True))
    seeds = None if ns.seed_vectors is None else _rows(_load_json(ns.seed_vectors, allow_inline=True))
    lifting = _ellone_run(matrix, seeds, ns.depth, ns.samples, ns.seed)
    report = {
        "kind": "ellone_lifting",
        "certificate": lifting.to_json(),
        "samples": ns.samples,
        "rng_seed": ns.seed,
        "passes": lifting.passes,
    }
    if ns.output:
        ns.output.write_text(_dump(report))
    return report, EXIT_OK if lifting.passes else EXIT_FAIL


def cmd_laws(ns) -> tuple[dict, int]:
    size = ns.bound if ns.bound is not None else 3
    if size < 1:
        raise InputError("bound must be positive")
    inst = freecat.instance_by_name(ns.category, nice=ns.nice)
    reports = freecat.law_suite(inst, size)
    ok = all(r.passed for r in reports)
    report = {
        "kind": "laws",
        "category": ns.category,
        "nice": ns.nice,
        "bound": size,
        "laws": {r.name: r.to_json() for r in reports},
        "passes": ok,
    }
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_universal(ns) -> tuple[dict, int]:
    monoid = monoid_by_name(ns.monoid)
    if ns.index < 1:
        raise InputError("index set must be nonempty")
    bound = EnumerationBound(max_elements=ns.bound if ns.bound is not None else 8)
    inst = freecat.instance_by_name(ns.category)
    index = SetCarrier.finite(range(ns.index))
    act = freecat.universal_action_on_free(inst, monoid, index, bound)
    failures = act.law_failures(bound)
    gens = monoid.generator_elements()
    pts = inst.points(act.obj) if not isinstance(inst, freecat.FinVecQ) else [
        ellone.SparseVec.basis(lbl) for lbl in act.obj.labels
    ]
    tables = {}
    for g in gens:
        tables[monoid.format(g)] = {_show(x): _show(act.act(g)(x)) for x in pts}
    report = {
        "kind": "universal_action",
        "category": ns.category,
        "monoid": str(monoid),
        "index": ns.index,
        "bound": bound.max_elements,
        "points": len(pts),
        "generators": tables,
        "law_failures": [repr(f) for f in failures],
        "passes": not failures,
    }
    return report, EXIT_OK if not failures else EXIT_FAIL


def _show(x) -> str:
    if isinstance(x, ellone.SparseVec):
        return " + ".join(f"{c}*e{_show(s)}" for s, c in sorted(x.items(), key=lambda kv: repr(kv[0]))) or "0"
    if isinstance(x, tuple):
        return "<" + ",".join(_show(v) for v in x) + ">"
    if isinstance(x, SetCarrier):
        return repr(x)
    return str(x)


# -- certificate re-verification ------------------------------------------


def verify_certificate(data: dict) -> dict:
    """Recompute the verdict for a report produced by ``lift`` or ``ellone``."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("certificate must be a JSON object with a 'kind'")
    kind = data["kind"]
    if kind == "selfmap_lifting":
        return _verify_selfmap(data)
    if kind == "ellone_lifting":
        return _verify_ellone(data)
    raise InputError(f"cannot certify reports of kind {kind!r}")


def _verify_selfmap(data: dict) -> dict:
    try:
        d = funcgraph.SelfMapDescription.from_json(data["source"])
        f = funcgraph.FiniteSelfMap.from_json(data["target"])
        depth, copies = data["depth"], data["copies"]
        cert = data["certificate"]
        claimed = cert["map"]
    except (KeyError, TypeError):
        raise InputError("selfmap certificate is missing fields") from None
    if type(depth) is not int or type(copies) is not int or depth < 1 or copies < 1:
        raise InputError("depth and copies must be positive integers")
    tr = funcgraph.truncate(d, depth, copies)
    by_str = {str(p): p for p in f.points}
    q = {}
    for v in tr.vertices:
        vid = funcgraph.vertex_id(v)
        if vid not in claimed:
            return {"kind": "selfmap_lifting", "passes": False, "reason": f"vertex {vid} unmapped"}
        value = claimed[vid]
        if str(value) not in by_str:
            return {"kind": "selfmap_lifting", "passes": False, "reason": f"{value!r} is not a target point"}
        q[v] = by_str[str(value)]
    squares, surj = funcgraph.certify_selfmap_lifting(tr, f, q)
    failing = [sq for sq in squares if not sq.ok]
    out = {
        "kind": "selfmap_lifting",
        "squares": len(squares),
        "failing": len(failing),
        "surjective": surj,
        "passes": surj and not failing,
    }
    if failing:
        out["reason"] = f"square at {funcgraph.vertex_id(failing[0].x)} fails"
    return out


def _verify_ellone(data: dict) -> dict:
    try:
        cert = data["certificate"]
        matrix = _rows(cert["target"])
        seeds = _rows(cert["seed"])
        depth = cert["depth"]
        claimed = cert["columns"]
    except (KeyError, TypeError):
        raise InputError("ellone certificate is missing fields") from None
    redo = _ellone_run(matrix, seeds, depth, data.get("samples", 20), data.get("rng_seed", 0))
    fresh = redo.to_json()
    same = fresh["columns"] == claimed
    return {
        "kind": "ellone_lifting",
        "columns_match": same,
        "rank": redo.rank,
        "passes": same and redo.passes,
    }


def cmd_certify(ns) -> tuple[dict, int]:
    out = verify_certificate(_load_json(ns.certificate))
    return out, EXIT_OK if out["passes"] else EXIT_FAIL


COMMANDS = {
    "analyze": cmd_analyze,
    "lift": cmd_lift,
    "certify": cmd_certify,
    "laws": cmd_laws,
    "ellone": cmd_ellone,
    "universal": cmd_universal,
}


# -- output ---------------------------------------------------------------


def _dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def _human(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k in sorted(report):
        v = report[k]
        if isinstance(v, dict) and v and indent < 2:
            lines.append(f"{pad}{k}:")
            lines.append(_human(v, indent + 1))
        elif isinstance(v, (dict, list)) and len(json.dumps(v, default=str)) > 100:
            lines.append(f"{pad}{k}: <{type(v).__name__} of {len(v)} entries, use --json>")
        else:
            lines.append(f"{pad}{k}: {json.dumps(v, default=str) if not isinstance(v, str) else v}")
    return "\n".join(lines)


def run(ns) -> tuple[dict, int]:
    return COMMANDS[ns.command](ns)


def main(argv=None) -> int:
    try:
        ns = parse_args(argv)
    except UsageError as exc:
        print(f"unifree: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report, code = run(ns)
    except UnifreeError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if ns.json:
            print(_dump(err), end="")
        else:
            print(f"unifree: {err['error']}: {err['message']}", file=sys.stderr)
        return EXIT_INPUT
    print(_dump(report) if ns.json else _human(report), end="\n" if not ns.json else "")
    return code


if __name__ == "__main__":
    sys.exit(main())
