"""The ``wlgroups`` command line."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cayfile
from .errors import WLGroupsError
from .experiment import load_experiment, run_experiment
from .groupspec import build_groups
from .oracle import oracle_isomorphic
from .pipelines import (
    abelian_iso,
    auto_pipeline,
    canonical_form,
    semisimple_iso_list,
)
from .results import ISOMORPHIC, NON_ISOMORPHIC, WL_INDISTINGUISHABLE, IsoVerdict
from .wl import run_wl

EXIT_IO = 10


def _load(path, args):
    return cayfile.load(path, auto_relabel=getattr(args, "auto_relabel", False))


def _emit(payload, as_json, text):
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# ----------------------------------------------------------------- commands


def cmd_group_gen(args):
    groups = build_groups(args.spec, cap=args.cap)
    if len(groups) == 1:
        text = cayfile.dumps(groups[0])
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(args.out).write_text(text)
        return 0
    if args.out in (None, "-"):
        raise WLGroupsError("this spec names two groups; give an output path")
    out = Path(args.out)
    stem = out.name[: -len(out.suffix)] if out.suffix else out.name
    for tag, G in zip("GH", groups):
        path = out.with_name(f"{stem}_{tag}{out.suffix or '.cay'}")
        path.write_text(cayfile.dumps(G))
        print(path)
    return 0


def cmd_wl(args):
    A, B = _load(args.first, args), _load(args.second, args)
    res = run_wl(A, B, k=args.k, version=args.version, max_rounds=args.rounds,
                 counting=not args.count_free)
    if res.distinguished:
        text = f"distinguished, round {res.rounds_used}"
    elif res.stabilized:
        text = f"indistinguishable (stable at round {res.rounds_used})"
    else:
        text = f"indistinguishable (round limit {res.rounds_used})"
    if not args.json:
        text += "\nclass counts per round: " + " ".join(map(str, res.class_counts))
    _emit(res.to_dict(), args.json, text)
    return 0


def _iso_wl(A, B):
    res = run_wl(A, B, k=3, version="II", counting=True)
    if res.distinguished:
        return IsoVerdict(NON_ISOMORPHIC, "wl", evidence="counting 3-WL Version II", k=3,
                          rounds=res.rounds_used, version="II")
    return IsoVerdict(WL_INDISTINGUISHABLE, "wl", k=3, rounds=res.rounds_used, version="II")


def _iso_canon(A, B):
    ca, cb = canonical_form(A), canonical_form(B)
    if ca == cb:
        phi = np.argsort(cb.position)[ca.position]
        return IsoVerdict(ISOMORPHIC, "canon", witness=phi, evidence="equal canonical forms")
    return IsoVerdict(NON_ISOMORPHIC, "canon",
                      evidence="canonical forms differ; conclusive only when WL identifies the class",
                      details={"conditional": True})


def _iso_semisimple(A, B):
    found = semisimple_iso_list(A, B, first_only=True)
    if found.isomorphisms:
        return IsoVerdict(ISOMORPHIC, found.method, witness=found.isomorphisms[0])
    return IsoVerdict(NON_ISOMORPHIC, found.method, evidence=found.details.get("evidence", ""))


ISO_METHODS = {
    "auto": auto_pipeline,
    "abelian": abelian_iso,
    "semisimple": _iso_semisimple,
    "wl": _iso_wl,
    "oracle": oracle_isomorphic,
    "canon": _iso_canon,
}


def cmd_iso(args):
    A, B = _load(args.first, args), _load(args.second, args)
    verdict = ISO_METHODS[args.method](A, B)
    text = f"{verdict.status.replace('_', '-')} (method={verdict.method})"
    if verdict.evidence:
        text += f": {verdict.evidence}"
    _emit(verdict.to_dict(), args.json, text)
    return 0


def cmd_iso_list(args):
    A, B = _load(args.first, args), _load(args.second, args)
    found = semisimple_iso_list(A, B, verify_sample=args.verify_sample, seed=args.seed,
                                reference_socle=args.reference_socle)
    for i, phi in enumerate(found.isomorphisms):
        print(json.dumps({"index": i, "map": [int(v) for v in phi]}))
    print(json.dumps(found.to_dict()), file=sys.stderr)
    return 0


def cmd_canon(args):
    G = _load(args.group, args)
    form = canonical_form(G, k=args.k, r=args.rounds, version=args.version,
                          counting=not args.count_free)
    text = cayfile.dumps(form.table)
    if args.out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.write("# labels " + form.label_text())
        return 0
    out = Path(args.out)
    out.write_text(text)
    out.with_suffix(".labels").write_text(form.label_text())
    return 0


def cmd_experiment(args):
    spec = load_experiment(args.spec)
    log = None
    if args.verbose:
        def log(row):
            print(",".join(str(row[c]) for c in ("left", "right", "method", "k", "verdict",
                                                 "agreement")), file=sys.stderr)
    rows, summary = run_experiment(spec, log)
    methods = summary["methods"]
    print(f"{len(rows)} rows, {summary['contradictions']} contradictions")
    for name in sorted(methods):
        s = methods[name]
        rate = "n/a" if s["agreement_rate"] is None else f"{100 * s['agreement_rate']:.1f}%"
        print(f"  {name}: {s['rows']} rows, agreement {rate}, skipped {s['skipped']}")
    return 0


# ------------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="wlgroups",
                                description="Weisfeiler-Leman and isomorphism tools for Cayley tables.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group-gen", help="write a group given by a spec string as a .cay file")
    g.add_argument("spec")
    g.add_argument("-o", "--out")
    g.add_argument("--cap", type=int)
    g.set_defaults(func=cmd_group_gen)

    def two_files(sp):
        sp.add_argument("first")
        sp.add_argument("second")
        sp.add_argument("--auto-relabel", action="store_true",
                        help="move the identity to index 0 when it is elsewhere")

    w = sub.add_parser("wl", help="run (k, r)-WL on two groups")
    two_files(w)
    w.add_argument("--k", "--ka", type=int, default=2, dest="k")
    w.add_argument("--version", choices=["I", "II", "III"], default="II")
    w.add_argument("--rounds", type=int)
    w.add_argument("--count-free", action="store_true")
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_wl)

    i = sub.add_parser("iso", help="decide isomorphism of two groups")
    two_files(i)
    i.add_argument("--method", choices=sorted(ISO_METHODS), default="auto")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_iso)

    lst = sub.add_parser("iso-list", help="list all isomorphisms from a semisimple group, as JSON lines")
    two_files(lst)
    lst.add_argument("--verify-sample", type=int, default=1000)
    lst.add_argument("--seed", type=int, default=0)
    lst.add_argument("--reference-socle", action="store_true",
                     help="find socle factors by the pair scan (slow, for cross-checks)")
    lst.set_defaults(func=cmd_iso_list)

    c = sub.add_parser("canon", help="write the canonical form of a group")
    c.add_argument("group")
    c.add_argument("-o", "--out")
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--version", choices=["I", "II", "III"], default="II")
    c.add_argument("--rounds", type=int)
    c.add_argument("--count-free", action="store_true")
    c.add_argument("--auto-relabel", action="store_true")
    c.set_defaults(func=cmd_canon)

    e = sub.add_parser("experiment", help="run a batch experiment from a spec file")
    e.add_argument("spec")
    e.add_argument("-v", "--verbose", action="store_true")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WLGroupsError as err:
        print(f"wlgroups: {type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code
    except OSError as err:
        print(f"wlgroups: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
