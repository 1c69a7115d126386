"""Graph exports: 0-based edge list, DIMACS and graph6.

graph6 is encoded with numpy directly from the adjacency matrix; going
through networkx works too but costs gigabytes at 6561 vertices.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .pds import Graph


# -- edge list ---------------------------------------------------------------

def to_edge_list(g: Graph) -> str:
    lines = [f"# vertices {g.v}"]
    if g.provenance:
        lines.append(f"# source {g.provenance}")
    lines.extend(f"{u} {w}" for u, w in g.edges().tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, v: int | None = None, provenance: str = "") -> Graph:
    """``u v`` lines (0-based); a ``# vertices N`` comment fixes the order."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "vertices" and v is None:
                v = int(parts[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two vertex numbers, got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return _from_edges(edges, v, provenance)


def read_edge_list(path: str | Path, v: int | None = None) -> Graph:
    return parse_edge_list(Path(path).read_text(), v, str(path))


def _from_edges(edges, v: int | None, provenance: str) -> Graph:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if v is None:
        v = int(e.max()) + 1 if len(e) else 0
    if len(e) and (e.min() < 0 or e.max() >= v):
        raise ValueError(f"vertex number out of range 0..{v - 1}")
    if np.any(e[:, 0] == e[:, 1]):
        raise ValueError("loops are not allowed")
    adj = np.zeros((v, v), dtype=bool)
    adj[e[:, 0], e[:, 1]] = True
    adj[e[:, 1], e[:, 0]] = True
    return Graph(adj, provenance)


# -- DIMACS ------------------------------------------------------------------

def to_dimacs(g: Graph) -> str:
    e = g.edges()
    lines = [f"c {g.provenance}"] if g.provenance else []
    lines.append(f"p edge {g.v} {len(e)}")
    lines.extend(f"e {u + 1} {w + 1}" for u, w in e.tolist())
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Graph:
    v = None
    edges = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            v = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise ValueError(f"unexpected DIMACS line {line!r}")
    if v is None:
        raise ValueError("missing 'p edge' line")
    return _from_edges(edges, v, "")


# -- graph6 ------------------------------------------------------------------

def _size_bytes(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n <= 258047:  # a leading 126 would announce the long form
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 2**36:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in range(30, -1, -6)])
    raise ValueError("graph too large for graph6")


def to_graph6(g: Graph) -> bytes:
    """graph6 encoding without header or trailing newline."""
    n = g.v
    # upper triangle, column by column == lower triangle, row by row
    bits = g.adjacency[np.tril_indices(n, -1)].astype(np.uint8)
    bits = np.concatenate([bits, np.zeros(-len(bits) % 6, dtype=np.uint8)])
    groups = bits.reshape(-1, 6) @ (1 << np.arange(5, -1, -1))
    return _size_bytes(n) + (groups + 63).astype(np.uint8).tobytes()


def from_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode()
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    raw = np.frombuffer(data, dtype=np.uint8).astype(np.int64) - 63
    if len(raw) == 0 or np.any(raw < 0) or np.any(raw > 63):
        raise ValueError("not a graph6 string")
    if raw[0] != 63:
        n, body = int(raw[0]), raw[1:]
    elif len(raw) > 1 and raw[1] == 63:
        n = int(sum(int(c) << s for c, s in zip(raw[2:8], range(30, -1, -6))))
        body = raw[8:]
    else:
        n = int(sum(int(c) << s for c, s in zip(raw[1:4], (12, 6, 0))))
        body = raw[4:]
    need = n * (n - 1) // 2
    if len(body) != -(-need // 6):
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {-(-need // 6)}")
    bits = ((body[:, None] >> np.arange(5, -1, -1)) & 1).ravel()[:need].astype(bool)
    adj = np.zeros((n, n), dtype=bool)
    adj[np.tril_indices(n, -1)] = bits
    return Graph(adj | adj.T, "")


EXPORTERS = {
    "edges": (".edges", lambda g: to_edge_list(g).encode()),
    "dimacs": (".dimacs", lambda g: to_dimacs(g).encode()),
    "graph6": (".g6", lambda g: to_graph6(g) + b"\n"),
}


def export(g: Graph, directory: str | Path, stem: str, formats=("edges", "dimacs", "graph6")) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        suffix, enc = EXPORTERS[fmt]
        path = directory / f"{stem}{suffix}"
        path.write_bytes(enc(g))
        written.append(path)
    return written
