"""Regenerate src/wlgroups/data/actions.json.

Each action is H -> Aut(N) given by generator images, stored as permutations
of N's element indices so the catalog needs no linear algebra to load.
"""

import itertools
import json
from pathlib import Path

import numpy as np

from wlgroups.core import Action, make_abelian, make_cyclic, make_symmetric
from wlgroups.errors import InvalidAction

OUT = Path(__file__).resolve().parents[1] / "src" / "wlgroups" / "data" / "actions.json"


def _vectors(dims, p):
    return [np.array(v) for v in itertools.product(range(p), repeat=dims)]


def matrix_perm(M, p):
    """Permutation of (Z/p)^d, mixed radix with the first coordinate most significant."""
    M = np.atleast_2d(np.asarray(M)) % p
    d = M.shape[0]
    perm = []
    for v in _vectors(d, p):
        w = M @ v % p
        perm.append(int(np.ravel_multi_index(tuple(w), (p,) * d)))
    return perm


def _inverse(M, p):
    M = np.atleast_2d(np.asarray(M)) % p
    d = M.shape[0]
    for cand in itertools.product(range(p), repeat=d * d):
        C = np.array(cand).reshape(d, d)
        if np.array_equal(C @ M % p, np.eye(d, dtype=int)):
            return C
    raise ValueError("matrix is singular")


# S3 is generated by the lex-index 2 transposition and the lex-index 3 3-cycle.
S3_GENS = [2, 3]
S3_STANDARD = {
    # action on {x : x0 + x1 + x2 = 0} in the basis (1,-1,0), (0,1,-1)
    2: [[-1, 1], [0, 1]],
    3: [[-1, 1], [-1, 0]],
}

ENTRIES = [
    ("c2_c7_trivial", "cyclic:2", "cyclic:7", [1], [[[1]]], 7, "Z/2 acting trivially on Z/7"),
    ("c2_c7_invert", "cyclic:2", "cyclic:7", [1], [[[-1]]], 7, "Z/2 acting by inversion on Z/7"),
    ("c3_c7_trivial", "cyclic:3", "cyclic:7", [1], [[[1]]], 7, "Z/3 acting trivially on Z/7"),
    ("c3_c7_times2", "cyclic:3", "cyclic:7", [1], [[[2]]], 7, "Z/3 acting by x -> 2x on Z/7"),
    ("c2_c5c5_minus_identity", "cyclic:2", "abelian:5,5", [1], [[[-1, 0], [0, -1]]], 5,
     "Z/2 acting by -1 on Z/5 x Z/5"),
    ("c2_c5c5_reflection", "cyclic:2", "abelian:5,5", [1], [[[-1, 0], [0, 1]]], 5,
     "Z/2 acting by diag(-1, 1) on Z/5 x Z/5"),
    ("c3_c5c5_trivial", "cyclic:3", "abelian:5,5", [1], [[[1, 0], [0, 1]]], 5,
     "Z/3 acting trivially on Z/5 x Z/5"),
    ("c3_c5c5_rotation", "cyclic:3", "abelian:5,5", [1], [[[0, -1], [1, -1]]], 5,
     "Z/3 acting by an order-3 matrix on Z/5 x Z/5"),
    ("c2_c7c7_minus_identity", "cyclic:2", "abelian:7,7", [1], [[[-1, 0], [0, -1]]], 7,
     "Z/2 acting by -1 on Z/7 x Z/7"),
    ("c2_c7c7_reflection", "cyclic:2", "abelian:7,7", [1], [[[-1, 0], [0, 1]]], 7,
     "Z/2 acting by diag(-1, 1) on Z/7 x Z/7"),
    ("c3_c7c7_scalar2", "cyclic:3", "abelian:7,7", [1], [[[2, 0], [0, 2]]], 7,
     "Z/3 acting by 2I on Z/7 x Z/7"),
    ("c3_c7c7_diag24", "cyclic:3", "abelian:7,7", [1], [[[2, 0], [0, 4]]], 7,
     "Z/3 acting by diag(2, 4) on Z/7 x Z/7"),
    ("c3_c7c7_diag21", "cyclic:3", "abelian:7,7", [1], [[[2, 0], [0, 1]]], 7,
     "Z/3 acting by diag(2, 1) on Z/7 x Z/7"),
    ("s3_c7_sign", "sym:3", "cyclic:7", S3_GENS, [[[-1]], [[1]]], 7,
     "S3 acting on Z/7 through the sign"),
    ("s3_c7_trivial", "sym:3", "cyclic:7", S3_GENS, [[[1]], [[1]]], 7,
     "S3 acting trivially on Z/7"),
    ("s3_c5c5_standard", "sym:3", "abelian:5,5", S3_GENS, [S3_STANDARD[2], S3_STANDARD[3]], 5,
     "S3 acting on Z/5 x Z/5 by its 2-dimensional permutation module"),
    ("s3_c5c5_sign", "sym:3", "abelian:5,5", S3_GENS, [[[-1, 0], [0, -1]], [[1, 0], [0, 1]]], 5,
     "S3 acting on Z/5 x Z/5 by the sign"),
]

BUILD = {
    "cyclic:2": lambda: make_cyclic(2),
    "cyclic:3": lambda: make_cyclic(3),
    "cyclic:7": lambda: make_cyclic(7),
    "sym:3": lambda: make_symmetric(3),
    "abelian:5,5": lambda: make_abelian([5, 5]),
    "abelian:7,7": lambda: make_abelian([7, 7]),
}


def build_entry(h_spec, n_spec, gens, mats, p):
    H, N = BUILD[h_spec](), BUILD[n_spec]()
    for flip in (False, True):
        use = [_inverse(M, p) if flip else M for M in mats]
        perms = [matrix_perm(M, p) for M in use]
        try:
            Action.from_generators(H, N, gens, perms)
        except InvalidAction:
            continue
        return perms
    raise InvalidAction(f"no homomorphism for {h_spec} on {n_spec}")


def main():
    actions = {}
    for ident, h_spec, n_spec, gens, mats, p, text in ENTRIES:
        actions[ident] = {
            "H": h_spec,
            "N": n_spec,
            "generators": gens,
            "images": build_entry(h_spec, n_spec, gens, mats, p),
            "description": text,
        }
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in actions.items())
    OUT.write_text('{"format": "wlgroups.actions/1", "actions": {\n' + body + "\n}}\n")
    print(f"wrote {len(actions)} actions to {OUT}")


if __name__ == "__main__":
    main()
