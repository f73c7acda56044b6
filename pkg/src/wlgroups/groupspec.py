"""Group spec strings and the shipped action catalog.

Grammar::

    spec   := cyclic:m | abelian:a,b,... | dihedral:m | sym:m | alt:m
            | quaternion | dp:<spec>x<spec> | sdp:<spec>:<spec>:<action-id>
            | cfpair:n | file:<path>

``file:`` consumes the rest of the string.  Every spec builds one group
except ``cfpair:n``, which builds the pair of equal-order Abelian groups.
"""

import json
import re
from functools import lru_cache
from importlib import resources

from . import cayfile
from .core import (
    Action,
    direct_product,
    make_abelian,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_quaternion,
    make_symmetric,
    semidirect_product,
)
from .errors import InvalidAction, SpecParseError

_NUMBER = re.compile(r"\d+")
_IDENT = re.compile(r"[A-Za-z0-9_\-]+")
_KINDS = sorted(
    ["quaternion", "cyclic", "abelian", "dihedral", "sym", "alt", "dp", "sdp", "cfpair", "file"],
    key=len, reverse=True,
)
_SIMPLE = {"cyclic": make_cyclic, "dihedral": make_dihedral, "sym": make_symmetric, "alt": make_alternating}


@lru_cache(maxsize=None)
def action_catalog():
    text = resources.files("wlgroups").joinpath("data/actions.json").read_text()
    return json.loads(text)["actions"]


class _Parser:
    def __init__(self, text):
        self.text, self.pos = text, 0

    def fail(self, message):
        raise SpecParseError(message, self.pos)

    def expect(self, token):
        if not self.text.startswith(token, self.pos):
            self.fail(f"expected {token!r}")
        self.pos += len(token)

    def number(self):
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("expected a number")
        self.pos = m.end()
        return int(m.group())

    def spec(self):
        start = self.pos
        kind = next((k for k in _KINDS if self.text.startswith(k, self.pos)), None)
        if kind is None:
            m = _IDENT.match(self.text, self.pos)
            self.fail(f"unknown group kind {m.group() if m else self.text[self.pos:]!r}")
        self.pos += len(kind)
        if kind == "quaternion":
            return ("quaternion",)
        if kind in _SIMPLE or kind == "cfpair":
            self.expect(":")
            return (kind, self.number())
        if kind == "abelian":
            self.expect(":")
            factors = [self.number()]
            while self.text.startswith(",", self.pos):
                self.pos += 1
                factors.append(self.number())
            return ("abelian", factors)
        if kind == "dp":
            self.expect(":")
            left = self.spec()
            self.expect("x")
            return ("dp", left, self.spec())
        if kind == "sdp":
            self.expect(":")
            h = self.spec()
            self.expect(":")
            n = self.spec()
            self.expect(":")
            m = _IDENT.match(self.text, self.pos)
            if not m:
                self.fail("expected an action id")
            self.pos = m.end()
            return ("sdp", h, n, m.group())
        if kind == "file":
            self.expect(":")
            path = self.text[self.pos :]
            if not path:
                self.fail("expected a path")
            self.pos = len(self.text)
            return ("file", path)
        self.pos = start
        self.fail(f"unknown group kind {kind!r}")

    def parse(self):
        node = self.spec()
        if self.pos != len(self.text):
            self.fail("unexpected trailing text")
        return node


def parse_spec(text):
    return _Parser(text.strip()).parse()


def spec_text(node):
    kind = node[0]
    if kind == "quaternion":
        return "quaternion"
    if kind == "abelian":
        return "abelian:" + ",".join(map(str, node[1]))
    if kind == "dp":
        return f"dp:{spec_text(node[1])}x{spec_text(node[2])}"
    if kind == "sdp":
        return f"sdp:{spec_text(node[1])}:{spec_text(node[2])}:{node[3]}"
    return f"{kind}:{node[1]}"


def _build(node, cap):
    kind = node[0]
    if kind == "quaternion":
        return make_quaternion()
    if kind in _SIMPLE:
        return _SIMPLE[kind](node[1], cap)
    if kind == "abelian":
        return make_abelian(node[1], cap)
    if kind == "dp":
        return direct_product(_build(node[1], cap), _build(node[2], cap), cap)
    if kind == "sdp":
        H, N = _build(node[1], cap), _build(node[2], cap)
        entry = action_catalog().get(node[3])
        if entry is None:
            raise InvalidAction(f"unknown action id {node[3]!r}")
        if (entry["H"], entry["N"]) != (spec_text(node[1]), spec_text(node[2])):
            raise InvalidAction(f"action {node[3]!r} is defined for {entry['H']} on {entry['N']}")
        action = Action.from_generators(H, N, entry["generators"], entry["images"])
        return semidirect_product(H, N, action, cap, spec_text(node))
    if kind == "file":
        return cayfile.load(node[1])
    if kind == "cfpair":
        raise SpecParseError("cfpair builds two groups; use build_groups", 0)
    raise SpecParseError(f"unknown group kind {kind!r}", 0)


def build_groups(text, cap=None):
    """All groups named by a spec string (two for ``cfpair``)."""
    node = parse_spec(text)
    if node[0] == "cfpair":
        from .pipelines import countfree_family

        return list(countfree_family(node[1], cap))
    G = _build(node, cap)
    if not G.label:
        G.label = spec_text(node)
    return [G]


def build_group(text, cap=None):
    groups = build_groups(text, cap)
    if len(groups) != 1:
        raise SpecParseError(f"{text!r} names {len(groups)} groups", 0)
    return groups[0]
