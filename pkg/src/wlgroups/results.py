"""Verdict containers shared by the pipelines, serializable to JSON."""

from dataclasses import dataclass, field

import numpy as np

ISOMORPHIC = "isomorphic"
NON_ISOMORPHIC = "non_isomorphic"
WL_INDISTINGUISHABLE = "wl_indistinguishable"


@dataclass
class IsoVerdict:
    status: str
    method: str
    witness: np.ndarray = None
    evidence: str = ""
    k: int = None
    rounds: int = None
    version: str = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def isomorphic(self):
        return self.status == ISOMORPHIC

    def to_dict(self):
        out = {
            "schema": "wlgroups.verdict/1",
            "status": self.status,
            "method": self.method,
            "evidence": self.evidence,
            "elapsed": round(self.elapsed, 6),
        }
        if self.witness is not None:
            out["witness"] = [int(v) for v in self.witness]
        for key in ("k", "rounds", "version"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out.update(self.details)
        return out


@dataclass
class IsoList:
    isomorphisms: list
    status: str
    method: str
    count: int = None
    verified_full: int = 0
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.count is None:
            self.count = len(self.isomorphisms)

    def to_dict(self, include_maps=False):
        out = {
            "schema": "wlgroups.isolist/1",
            "status": self.status,
            "method": self.method,
            "count": self.count,
            "verified_full": self.verified_full,
            "elapsed": round(self.elapsed, 6),
        }
        if include_maps:
            out["isomorphisms"] = [[int(v) for v in m] for m in self.isomorphisms]
        out.update(self.details)
        return out
