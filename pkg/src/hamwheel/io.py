"""graph6 and plain edge-list serialisation.

graph6 follows the format description shipped with nauty: an optional
``>>graph6<<`` header, the order N(n), then the upper triangle of the
adjacency matrix in column-major order packed into 6-bit groups, each
byte biased by 63.
"""

from __future__ import annotations

from pathlib import Path

from .errors import Graph6ByteError, Graph6Error, Graph6LengthError, Graph6PaddingError, GraphError
from .graph import Graph

HEADER = b">>graph6<<"
_MAX_N = (1 << 36) - 1


def _encode_n(n: int) -> bytes:
    if n < 0 or n > _MAX_N:
        raise Graph6Error(f"graph6 cannot encode n={n}")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def encode_graph6(g: Graph, header: bool = False) -> bytes:
    n = g.n
    out = bytearray(HEADER if header else b"")
    out += _encode_n(n)
    adj = g.adj
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def decode_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii", errors="strict")
    data = data.strip()
    if data.startswith(HEADER):
        data = data[len(HEADER) :]
    if not data:
        raise Graph6LengthError("empty graph6 string")
    for pos, b in enumerate(data):
        if not 63 <= b <= 126:
            raise Graph6ByteError(f"byte {b} at position {pos} is outside 63..126")

    if data[0] != 126:
        n, body = data[0] - 63, data[1:]
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6LengthError("truncated 8-byte order field")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        body = data[8:]
    else:
        if len(data) < 4:
            raise Graph6LengthError("truncated 4-byte order field")
        n = 0
        for b in data[1:4]:
            n = (n << 6) | (b - 63)
        body = data[4:]

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) != need:
        raise Graph6LengthError(f"n={n} needs {need} data bytes, got {len(body)}")
    pad = need * 6 - nbits
    if pad and (body[-1] - 63) & ((1 << pad) - 1):
        raise Graph6PaddingError("nonzero padding bits in the last data byte")

    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, rows, _trusted=True)


def write_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_edgelist(text: str) -> Graph:
    """Parse the ``n m`` header followed by one ``u v`` edge per line."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with a line 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header says m={m} but {len(edges)} edges follow")
    g = Graph.from_edges(n, edges)
    if g.m != m:
        raise GraphError(f"edge list repeats edges: {m} lines but {g.m} distinct edges")
    return g


def load_graph(path: str | Path, fmt: str) -> Graph:
    p = Path(path)
    if fmt == "graph6":
        lines = p.read_bytes().strip().splitlines()
        return decode_graph6(lines[0] if lines else b"")
    if fmt == "edgelist":
        return read_edgelist(p.read_text())
    raise ValueError(f"unknown format {fmt!r}")
