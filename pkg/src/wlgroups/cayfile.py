"""Reading and writing the ``.cay`` text format.

Line 1 holds n, the next n lines hold the table rows as space-separated
0-based indices, and any trailing lines starting with ``#`` are comments.
"""

from pathlib import Path

import numpy as np

from .core import validate_group
from .errors import GroupValidationError, NoIdentityAtZero


def dumps(G, comments=()):
    lines = [str(G.n)]
    lines.extend(" ".join(map(str, row)) for row in G.table.tolist())
    lines.extend(f"# {c}" for c in comments)
    return "\n".join(lines) + "\n"


def loads(text, label="", auto_relabel=False):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    body = [ln for ln in lines if not ln.startswith("#")]
    try:
        n = int(body[0])
        rows = [[int(tok) for tok in ln.split()] for ln in body[1 : n + 1]]
    except (IndexError, ValueError) as exc:
        raise GroupValidationError(f"malformed .cay data: {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows) or len(body) != n + 1:
        raise GroupValidationError(f"expected {n} rows of {n} entries")
    table = np.array(rows, dtype=np.int64).reshape(n, n)
    try:
        return validate_group(table, label)
    except NoIdentityAtZero as err:
        if not auto_relabel:
            raise
        perm = np.arange(n)
        perm[[0, err.identity]] = perm[[err.identity, 0]]
        # rename the identity to 0 by swapping the two labels
        swapped = perm[table][np.ix_(perm, perm)]
        return validate_group(swapped, label)


def load(path, auto_relabel=False):
    path = Path(path)
    return loads(path.read_text(), label=path.stem, auto_relabel=auto_relabel)


def save(G, path, comments=()):
    Path(path).write_bytes(dumps(G, comments).encode())

