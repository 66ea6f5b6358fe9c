"""Command-line front end.

    softinv list-models
    softinv run --model inc_si [--json] [--persist FILE] [--state-cap N]
    softinv oracle --model inc_full_A --threads 2 --nodes 2 [--json] [--state-cap N]
    softinv export-dot --model inc_si [--persist FILE] [--key KEY | --initial]

Exit status: 0 verified, 1 potential violation, 2 usage or parse error,
3 resource cap reached.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .dot import export_dot
from .explorer import ResourceError, StateSpace, explore, load_states, save_states
from .modelspec import BUILTIN_FILES, ModelError, builtin_model, resolve_model
from .oracle import (CENSUS_HEADER, CENSUS_PREDICATES, DEFAULT_STATE_CAP, BoundSpec, census,
                     census_record, check_soundness, explore_concrete, format_census)
from .structure import ContractError

SCHEMA = "softinv.run/1"
ORACLE_SCHEMA = "softinv.oracle/1"

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def run_report(sp: StateSpace) -> dict:
    """The machine-readable record for one abstract run."""
    return {
        "schema": SCHEMA,
        "model": sp.model.name,
        "ca_states": sp.stats.ca_states,
        "stored_states": sp.stats.stored_states,
        "steps": sp.stats.steps,
        "elapsed": round(sp.stats.elapsed, 3),
        "verdict": "verified" if sp.verified else "potential-violation",
        "violation_count": len(sp.violations),
        "violations": [
            {"state": v.key, "value": str(v.value), "trace": [a for a, _ in sp.trace(v)]}
            for v in sp.violations
        ],
    }


def _print_run(rep: dict, out) -> None:
    print(f"model         {rep['model']}", file=out)
    print(f"ca_states     {rep['ca_states']}", file=out)
    print(f"stored_states {rep['stored_states']}", file=out)
    print(f"elapsed       {rep['elapsed']:.3f}s", file=out)
    verdict = rep["verdict"]
    if rep["violation_count"]:
        verdict += f" ({rep['violation_count']})"
    print(f"verdict       {verdict}", file=out)
    for v in rep["violations"]:
        print(f"  state {v['state']} property={v['value']}: {' -> '.join(v['trace'])}", file=out)


def _cmd_list(args, out) -> int:
    names = list(BUILTIN_FILES) + ["stack_no_si"]
    if args.json:
        print(json.dumps({"schema": "softinv.models/1", "models": names}), file=out)
    else:
        for n in names:
            m = builtin_model(n)
            print(f"{n:22s} {len(m.vocab.abstraction_set)} abstraction predicates, "
                  f"{len(m.soft_invariants)} soft invariants", file=out)
    return EXIT_OK


def _cmd_run(args, out) -> int:
    m = resolve_model(args.model)
    sp = explore(m, state_cap=args.state_cap)
    if args.persist:
        with open(args.persist, "wb") as fh:
            save_states(sp, fh)
    rep = run_report(sp)
    if args.json:
        print(json.dumps(rep, sort_keys=True), file=out)
    else:
        _print_run(rep, out)
    return EXIT_OK if sp.verified else EXIT_VIOLATION


def _cmd_oracle(args, out) -> int:
    m = resolve_model(args.model)
    b = BoundSpec(args.threads, args.nodes)
    cs = explore_concrete(m, b, state_cap=args.state_cap or DEFAULT_STATE_CAP)
    rec = {"schema": ORACLE_SCHEMA, "model": m.name, "threads": b.threads, "nodes": b.nodes,
           "concrete_states": len(cs.states),
           "verdict": "verified" if cs.verified else "violation",
           "violation_count": len(cs.violations)}
    has_census = all(p in m.vocab for p in CENSUS_PREDICATES)
    if has_census:
        rows = census(cs.states)
        rec["census"] = census_record(rows)
    if args.soundness:
        rep = check_soundness(explore(m), cs.states)
        rec["soundness"] = {"checked": rep.checked, "covered": rep.covered, "full": rep.full}
    if args.json:
        print(json.dumps(rec, sort_keys=True), file=out)
    else:
        print(f"model {m.name}, bound {b}: {len(cs.states)} concrete states, {rec['verdict']}", file=out)
        if has_census:
            print(format_census(rows, CENSUS_HEADER), file=out)
        if args.soundness:
            s = rec["soundness"]
            print(f"soundness: {s['covered']}/{s['checked']} covered", file=out)
    ok = cs.verified and rec.get("soundness", {"full": True})["full"]
    return EXIT_OK if ok else EXIT_VIOLATION


def _cmd_dot(args, out) -> int:
    m = resolve_model(args.model)
    if args.initial:
        out.write(export_dot(m.initial[0], m.name))
        return EXIT_OK
    if args.persist:
        with open(args.persist, "rb") as fh:
            structures = load_states(m, fh)
        sp = StateSpace(m)
        keyed = {sp.key_of(s): s for s in structures}
    else:
        sp = explore(m, state_cap=args.state_cap)
        keyed = {sp.key_of(s): s for s in sp.structures()}
    if args.key is None:
        if len(keyed) != 1:
            print(f"store has {len(keyed)} states; choose one with --key: {' '.join(sorted(keyed))}",
                  file=sys.stderr)
            return EXIT_USAGE
        (s,) = keyed.values()
    else:
        if args.key not in keyed:
            print(f"unknown state key {args.key}", file=sys.stderr)
            return EXIT_USAGE
        s = keyed[args.key]
    out.write(export_dot(s, m.name))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="softinv", description="Shape analysis of concurrent programs with soft invariants.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ls = sub.add_parser("list-models", help="list the built-in models")
    ls.add_argument("--json", action="store_true")

    def model_flags(q, cap=True):
        q.add_argument("--model", required=True, help="built-in model name or model file path")
        q.add_argument("--json", action="store_true", help="print one JSON record")
        if cap:
            q.add_argument("--state-cap", type=int, default=None, help="abort beyond this many states")

    r = sub.add_parser("run", help="explore the abstract statespace")
    model_flags(r)
    r.add_argument("--persist", metavar="FILE", help="save the final store to FILE")

    o = sub.add_parser("oracle", help="bounded concrete exploration and thread census")
    model_flags(o)
    o.add_argument("--threads", type=int, required=True)
    o.add_argument("--nodes", type=int, required=True)
    o.add_argument("--soundness", action="store_true", help="also check coverage by the abstract store")

    d = sub.add_parser("export-dot", help="print a stored structure as DOT")
    model_flags(d)
    d.add_argument("--persist", metavar="FILE", help="read the store from FILE instead of exploring")
    d.add_argument("--key", help="state key as printed by run")
    d.add_argument("--initial", action="store_true", help="export the initial structure")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    handler = {"list-models": _cmd_list, "run": _cmd_run, "oracle": _cmd_oracle,
               "export-dot": _cmd_dot}[args.command]
    try:
        return handler(args, out)
    except ResourceError as e:
        print(f"resource cap reached: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ModelError, ContractError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
