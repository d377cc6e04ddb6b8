"""Plain-text edge lists and degree sequences."""

import numpy as np

from ..errors import InvalidGraphError
from .core import Graph


def read_edge_list(path, n_nodes=None):
    """Read ``u v`` lines (0-based ids) into a :class:`Graph`.

    Blank lines and ``#`` comments are skipped. The node count defaults to
    ``max id + 1``. Duplicates and self-loops are rejected by :class:`Graph`.
    """
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidGraphError("%s:%d: expected 'u v'" % (path, lineno))
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise InvalidGraphError("%s:%d: non-integer node id" % (path, lineno)) from None
    if not edges:
        raise InvalidGraphError("%s: no edges" % path)
    arr = np.array(edges, dtype=np.int64)
    if n_nodes is None:
        n_nodes = int(arr.max()) + 1
    return Graph(n_nodes, arr)


def write_edge_list(g, path):
    with open(path, "w") as fh:
        for u, v in g.edges.tolist():
            fh.write("%d %d\n" % (u, v))


def read_degree_sequence(path):
    with open(path) as fh:
        return np.array([int(s) for s in (ln.strip() for ln in fh) if s], dtype=np.int64)


def write_degree_sequence(degrees, path):
    with open(path, "w") as fh:
        for d in np.asarray(degrees).tolist():
            fh.write("%d\n" % d)
