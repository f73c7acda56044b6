"""Batch experiments: corpus pairs x parameter grid -> CSV rows and a JSON summary.

Spec files are ``key = value`` lines; ``#`` starts a comment.  Keys:

    corpus     ;-separated selectors: all, abelian, nonabelian, semidirect,
               semisimple, spec:<group spec>, cfpair:<n>
    orders     order range lo-hi (default 1-64)
    pairs      same-order, twins or both (default both)
    twins      number of random relabeled twins (default 0)
    seed       seed for twins (default 0)
    methods    comma list from wl, abelian, semisimple, auto, oracle, canon
    k          comma list of dimensions for wl (default 1)
    versions   comma list from I, II, III (default II)
    modes      comma list from counting, count-free (default counting)
    rounds     round limit for wl, 0 = to stabilization (default 0)
    oracle     compare against the oracle: yes/no (default yes)
    oracle_cap largest order handed to the oracle (default 512)
    tuple_budget  tuple-record budget for this run
    csv, json  output paths (relative to the spec file)
"""

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus as corpus_mod
from .errors import MemoryBudget, OracleCapExceeded, OracleContradiction, SpecParseError
from .groupspec import build_groups
from .oracle import ORACLE_CAP, oracle_isomorphic
from .pipelines import abelian_iso, auto_pipeline, canonical_form, semisimple_iso_list
from .wl import BUDGET_ENV, run_wl

CSV_VERSION = "wlgroups-report v1"
COLUMNS = ["left", "right", "order", "method", "k", "version", "counting", "rounds_used",
           "verdict", "oracle", "agreement"]
METHODS = ("wl", "abelian", "semisimple", "auto", "oracle", "canon")


@dataclass
class ExperimentSpec:
    corpus: list = field(default_factory=list)
    orders: tuple = (1, 64)
    pairs: str = "both"
    twins: int = 0
    seed: int = 0
    methods: list = field(default_factory=lambda: ["wl"])
    k: list = field(default_factory=lambda: [1])
    versions: list = field(default_factory=lambda: ["II"])
    modes: list = field(default_factory=lambda: ["counting"])
    rounds: int = 0
    oracle: bool = True
    oracle_cap: int = ORACLE_CAP
    tuple_budget: int = None
    csv: str = None
    json: str = None
    base: Path = Path(".")

    def to_dict(self):
        out = {k: v for k, v in self.__dict__.items() if k != "base"}
        out["orders"] = list(self.orders)
        return out


def _split(value, sep=","):
    return [v.strip() for v in value.split(sep) if v.strip()]


def parse_experiment(text, base=Path(".")):
    spec = ExperimentSpec(base=Path(base))
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecParseError(f"line {lineno}: expected key = value", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise SpecParseError(f"line {lineno}: duplicate key {key!r}", lineno)
        seen.add(key)
        try:
            _assign(spec, key, value)
        except ValueError as exc:
            raise SpecParseError(f"line {lineno}: {exc}", lineno) from None
    return spec


def _assign(spec, key, value):
    if key == "corpus":
        spec.corpus = _split(value, ";")
    elif key == "orders":
        lo, _, hi = value.partition("-")
        spec.orders = (int(lo), int(hi or lo))
    elif key == "pairs":
        if value not in ("same-order", "twins", "both"):
            raise ValueError(f"pairs must be same-order, twins or both, not {value!r}")
        spec.pairs = value
    elif key in ("twins", "seed", "rounds", "oracle_cap", "tuple_budget"):
        setattr(spec, key, int(value))
    elif key == "methods":
        spec.methods = _split(value)
        bad = [m for m in spec.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}")
    elif key == "k":
        spec.k = [int(v) for v in _split(value)]
    elif key == "versions":
        spec.versions = _split(value)
        if any(v not in ("I", "II", "III") for v in spec.versions):
            raise ValueError("versions are I, II, III")
    elif key == "modes":
        spec.modes = _split(value)
        if any(m not in ("counting", "count-free") for m in spec.modes):
            raise ValueError("modes are counting, count-free")
    elif key == "oracle":
        spec.oracle = value.lower() in ("yes", "true", "1")
    elif key in ("csv", "json"):
        setattr(spec, key, value)
    else:
        raise ValueError(f"unknown key {key!r}")


def load_experiment(path):
    path = Path(path)
    return parse_experiment(path.read_text(), base=path.parent)


# ------------------------------------------------------------------ members


def _selector_specs(selector, lo, hi):
    if selector == "all":
        return corpus_mod.constructor_corpus(hi, lo)
    if selector == "abelian":
        return [s for n in range(max(lo, 1), hi + 1) for s in corpus_mod.abelian_specs(n, True)]
    if selector == "nonabelian":
        abelian = set(_selector_specs("abelian", lo, hi))
        return [s for s in corpus_mod.constructor_corpus(hi, lo) if s not in abelian]
    if selector == "semidirect":
        return [s for s in corpus_mod.semidirect_specs() if lo <= corpus_mod._spec_order(s) <= hi]
    if selector == "semisimple":
        return [s for s in corpus_mod.SEMISIMPLE if lo <= corpus_mod._spec_order(s) <= hi]
    if selector.startswith("spec:"):
        return [selector[5:]]
    if selector.startswith("cfpair:"):
        return [selector]
    raise SpecParseError(f"unknown corpus selector {selector!r}")


class _Members:
    """Named groups, built lazily and cached."""

    def __init__(self):
        self.groups = {}
        self.order = []

    def add_spec(self, spec):
        groups = build_groups(spec)
        names = [spec] if len(groups) == 1 else [f"{spec}#G", f"{spec}#H"]
        for name, G in zip(names, groups):
            if name not in self.groups:
                self.groups[name] = G
                self.order.append(name)
        return names

    def add(self, name, G):
        self.groups[name] = G
        self.order.append(name)


def build_pairs(spec):
    """(members, pairs) with pairs as (left name, right name) in deterministic order."""
    lo, hi = spec.orders
    members = _Members()
    base = []
    for selector in spec.corpus:
        for s in _selector_specs(selector, lo, hi):
            for name in members.add_spec(s):
                if name not in base:
                    base.append(name)
    pairs = []
    if spec.pairs in ("same-order", "both"):
        for i, a in enumerate(base):
            for b in base[i + 1 :]:
                if members.groups[a].n == members.groups[b].n:
                    pairs.append((a, b))
    if spec.pairs in ("twins", "both") and spec.twins:
        plain = [s for s in base if "#" not in s]
        for twin in corpus_mod.random_twins(plain, spec.twins, spec.seed):
            members.add(twin.name, twin.build(members.groups[twin.spec]))
            pairs.append((twin.spec, twin.name))
    return members, pairs


# --------------------------------------------------------------------- runs


def _grid(spec):
    for method in spec.methods:
        if method == "wl":
            for k in spec.k:
                for version in spec.versions:
                    for mode in spec.modes:
                        yield method, k, version, mode == "counting"
        else:
            yield method, "", "", ""


def _verdict_word(status):
    return {"wl_indistinguishable": "indistinguishable"}.get(status, status)


def _run_one(method, k, version, counting, G, H, spec):
    """Returns (rounds_used, verdict)."""
    if method == "wl":
        res = run_wl(G, H, k=k, version=version, counting=counting,
                     max_rounds=spec.rounds or None)
        return res.rounds_used, "distinguished" if res.distinguished else "indistinguishable"
    if method == "abelian":
        if not (G.is_abelian() and H.is_abelian()):
            return "", "skipped:not-abelian"
        return "", abelian_iso(G, H).status
    if method == "semisimple":
        from .analysis import is_semisimple

        if not is_semisimple(G):
            return "", "skipped:not-semisimple"
        return "", semisimple_iso_list(G, H, first_only=True).status
    if method == "auto":
        return "", _verdict_word(auto_pipeline(G, H, oracle_cap=spec.oracle_cap).status)
    if method == "oracle":
        return "", oracle_isomorphic(G, H, cap=spec.oracle_cap).status
    if method == "canon":
        cg, ch = canonical_form(G), canonical_form(H)
        return cg.iterations, "equal" if cg == ch else "different"
    raise ValueError(method)


def _agreement(verdict, oracle):
    if oracle in ("", "skipped:cap") or verdict.startswith("skipped"):
        return "n/a"
    iso = oracle == "isomorphic"
    if verdict in ("distinguished", "non_isomorphic"):
        return "contradiction" if iso else "agree"
    if verdict == "isomorphic":
        return "agree" if iso else "contradiction"
    if verdict in ("indistinguishable", "equal", "different"):
        if verdict == "different" and iso:
            return "noncanonical"
        return "agree" if iso else "undecided"
    return "n/a"


def run_experiment(spec, log=None):
    """Run every (pair, grid point); returns (rows, summary).

    Raises OracleContradiction after writing the partial report if any row
    disagrees with the oracle.
    """
    old_budget = os.environ.get(BUDGET_ENV)
    if spec.tuple_budget:
        os.environ[BUDGET_ENV] = str(spec.tuple_budget)
    try:
        return _run(spec, log)
    finally:
        if spec.tuple_budget:
            if old_budget is None:
                os.environ.pop(BUDGET_ENV, None)
            else:
                os.environ[BUDGET_ENV] = old_budget


def _run(spec, log):
    start = time.perf_counter()
    members, pairs = build_pairs(spec)
    rows, timings, contradiction = [], [], None
    for left, right in pairs:
        G, H = members.groups[left], members.groups[right]
        oracle = ""
        if spec.oracle:
            try:
                oracle = oracle_isomorphic(G, H, cap=spec.oracle_cap).status
            except OracleCapExceeded:
                oracle = "skipped:cap"
        for method, k, version, counting in _grid(spec):
            t0 = time.perf_counter()
            try:
                rounds, verdict = _run_one(method, k, version, counting, G, H, spec)
            except MemoryBudget:
                rounds, verdict = "", "skipped:budget"
            except OracleCapExceeded:
                rounds, verdict = "", "skipped:cap"
            row = {
                "left": left, "right": right, "order": G.n, "method": method, "k": k,
                "version": version,
                "counting": "" if counting == "" else ("yes" if counting else "no"),
                "rounds_used": rounds, "verdict": verdict, "oracle": oracle,
                "agreement": _agreement(verdict, oracle),
            }
            rows.append(row)
            timings.append(round(time.perf_counter() - t0, 6))
            if log:
                log(row)
            if row["agreement"] == "contradiction":
                contradiction = row
                break
        if contradiction:
            break
    summary = summarize(spec, rows, timings, time.perf_counter() - start)
    write_outputs(spec, rows, summary)
    if contradiction:
        raise OracleContradiction(
            f"{contradiction['method']} says {contradiction['verdict']} but the oracle says "
            f"{contradiction['oracle']} for {contradiction['left']} vs {contradiction['right']}"
        )
    return rows, summary


def summarize(spec, rows, timings, elapsed):
    per = {}
    for row in rows:
        key = row["method"] if row["method"] != "wl" else (
            f"wl/k={row['k']}/{row['version']}/{'counting' if row['counting'] == 'yes' else 'count-free'}"
        )
        s = per.setdefault(key, {"rows": 0, "agree": 0, "undecided": 0, "skipped": 0,
                                 "contradiction": 0, "noncanonical": 0})
        s["rows"] += 1
        ag = row["agreement"]
        if row["verdict"].startswith("skipped"):
            s["skipped"] += 1
        elif ag in s:
            s[ag] += 1
    for s in per.values():
        decided = s["agree"] + s["contradiction"] + s["undecided"] + s["noncanonical"]
        s["agreement_rate"] = round(s["agree"] / decided, 6) if decided else None
    return {
        "schema": "wlgroups.experiment/1",
        "seed": spec.seed,
        "spec": spec.to_dict(),
        "rows": len(rows),
        "methods": per,
        "contradictions": sum(s["contradiction"] for s in per.values()),
        "elapsed": round(elapsed, 3),
        "row_seconds": timings,
    }


def csv_text(rows, seed):
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION} seed={seed}\n")
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_outputs(spec, rows, summary):
    if spec.csv:
        (spec.base / spec.csv).write_text(csv_text(rows, spec.seed))
    if spec.json:
        (spec.base / spec.json).write_text(json.dumps(summary, indent=2) + "\n")
