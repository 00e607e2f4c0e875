"""Simple-graph representation, standard families, and the neighborhood corona product."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph as a dense symmetric 0/1 adjacency matrix."""

    adjacency: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.adjacency, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("adjacency must be a square matrix with n >= 1")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise ValueError("self-loops are not allowed")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != a.shape[0]:
                raise ValueError("labels length must equal vertex count")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency) and self.labels == other.labels

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return [(int(a), int(b)) for a, b in zip(i, j)]

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def is_connected(self) -> bool:
        n = self.n
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            for v in np.nonzero(self.adjacency[u])[0]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        return bool(seen.all())


FAMILY_NAMES = ("path", "cycle", "complete", "empty")


def build_family(name: str, size: int) -> Graph:
    """Standard families: path P_n, cycle C_n, complete K_n, empty graph on n vertices."""
    if size < 1:
        raise ValueError(f"family size must be >= 1, got {size}")
    a = np.zeros((size, size), dtype=np.int64)
    if name == "path":
        for i in range(size - 1):
            a[i, i + 1] = a[i + 1, i] = 1
    elif name == "cycle":
        if size < 3:
            raise ValueError("a simple cycle needs at least 3 vertices")
        for i in range(size):
            j = (i + 1) % size
            a[i, j] = a[j, i] = 1
    elif name == "complete":
        a[:] = 1
        np.fill_diagonal(a, 0)
    elif name == "empty":
        pass
    else:
        raise ValueError(f"unknown graph family {name!r} (choose from {', '.join(FAMILY_NAMES)})")
    return Graph(a)


def parse_family_spec(spec: str) -> Graph:
    """Parse "name:size" strings such as "cycle:4"."""
    name, _, size_text = spec.partition(":")
    if not size_text:
        raise ValueError(f"family spec must look like 'cycle:4', got {spec!r}")
    try:
        size = int(size_text)
    except ValueError as exc:
        raise ValueError(f"bad size in family spec {spec!r}") from exc
    return build_family(name.strip(), size)


def regularity_degree(g: Graph) -> int | None:
    """Common vertex degree, or None when the graph is not regular."""
    degs = g.degrees()
    k = int(degs[0])
    return k if bool((degs == k).all()) else None


def apex_index(x: int) -> int:
    """Corona index of the apex vertex (x, 0)."""
    return x


def copy_index(n1: int, n2: int, x: int, y: int) -> int:
    """Corona index of vertex y in the x-th copy of the second factor."""
    return n1 + x * n2 + y


def neighborhood_corona(g1: Graph, g2: Graph) -> Graph:
    """Neighborhood corona of g1 and g2: one copy of g1 plus one copy of g2 per
    g1-vertex, each copy joined completely to the neighbors of its base vertex.

    Vertex order: the n1 apex vertices first, then copy 0, copy 1, ... each in
    g2 order, so the adjacency is the literal block matrix
    [[A1, A1 (x) ones_row], [A1 (x) ones_col, I (x) A2]].
    """
    n1, n2 = g1.n, g2.n
    a1 = g1.adjacency
    a2 = g2.adjacency
    n = n1 * (1 + n2)
    a = np.zeros((n, n), dtype=np.int64)
    a[:n1, :n1] = a1
    a[:n1, n1:] = np.kron(a1, np.ones((1, n2), dtype=np.int64))
    a[n1:, :n1] = np.kron(a1, np.ones((n2, 1), dtype=np.int64))
    a[n1:, n1:] = np.kron(np.eye(n1, dtype=np.int64), a2)
    labels = [f"({x},0)" for x in range(n1)]
    labels += [f"({x},{y + 1})" for x in range(n1) for y in range(n2)]
    return Graph(a, labels=tuple(labels))


def graph_to_dict(g: Graph) -> dict:
    out: dict = {"n": g.n, "edges": [[i, j] for i, j in g.edges()]}
    if g.labels is not None:
        out["labels"] = list(g.labels)
    return out


def graph_from_dict(data: dict) -> Graph:
    try:
        n = int(data["n"])
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ValueError("graph JSON needs integer 'n' and an 'edges' list") from exc
    if n < 1:
        raise ValueError("graph JSON: n must be >= 1")
    a = np.zeros((n, n), dtype=np.int64)
    seen = set()
    for pair in edges:
        if len(pair) != 2:
            raise ValueError(f"edge {pair!r} is not a pair")
        i, j = int(pair[0]), int(pair[1])
        if i == j:
            raise ValueError(f"self-loop on vertex {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge {pair!r} out of range for n={n}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate edge {pair!r}")
        seen.add(key)
        a[i, j] = a[j, i] = 1
    labels = data.get("labels")
    return Graph(a, labels=tuple(labels) if labels is not None else None)


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(dumps_graph(g), encoding="utf-8")


def read_graph(path: str | Path) -> Graph:
    return graph_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def dumps_graph(g: Graph) -> str:
    return json.dumps(graph_to_dict(g), indent=2) + "\n"
