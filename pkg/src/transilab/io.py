"""Text file formats: edge lists and partitions.

Edge list: one "u v" pair per line with u < v, 0-indexed; lines starting
with '#' are comments; the first comment line records the node count as
"# n=<count>". Further "# key=value" comment lines carry generation
metadata and survive a round trip.

Partition: one "node community" pair per line, '#' comments allowed;
writers may record the detection objective in a header comment.
"""
from __future__ import annotations

from pathlib import Path

from .errors import FormatError
from .graph import Graph
from .partition import Partition


def write_edge_list(g: Graph, path, metadata: dict | None = None) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"# n={g.n}\n")
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        for u, v in sorted(g.edges()):
            fh.write(f"{u} {v}\n")


def read_edge_list(path) -> tuple[Graph, dict[str, str]]:
    path = Path(path)
    n = None
    metadata: dict[str, str] = {}
    edges: list[tuple[int, int]] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    key = key.strip()
                    value = value.strip()
                    if key == "n":
                        if n is not None:
                            raise FormatError(path, line_no, "duplicate n header")
                        try:
                            n = int(value)
                        except ValueError:
                            raise FormatError(path, line_no,
                                              f"bad node count {value!r}") from None
                        if n < 0:
                            raise FormatError(path, line_no, "negative node count")
                    else:
                        metadata[key] = value
                continue
            if n is None:
                raise FormatError(path, line_no,
                                  "edge before the '# n=<count>' header")
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(path, line_no, f"expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError(path, line_no,
                                  f"non-integer endpoint in {line!r}") from None
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(path, line_no, f"endpoint out of range 0..{n - 1}")
            if u >= v:
                raise FormatError(path, line_no, "edges must satisfy u < v")
            edges.append((line_no, u, v))
    if n is None:
        raise FormatError(path, 0, "missing '# n=<count>' header")
    g = Graph(n)
    for line_no, u, v in edges:
        if g.has_edge(u, v):
            raise FormatError(path, line_no, f"duplicate edge ({u},{v})")
        g.add_edge(u, v)
    return g, metadata


def write_partition(p: Partition, path, header: dict | None = None) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key}={value}\n")
        for node, comm in enumerate(p.assignment.tolist()):
            fh.write(f"{node} {comm}\n")


def read_partition(path, n: int | None = None) -> tuple[Partition, dict[str, str]]:
    path = Path(path)
    header: dict[str, str] = {}
    pairs: dict[int, int] = {}
    with path.open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    header[key.strip()] = value.strip()
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(path, line_no,
                                  f"expected 'node community', got {line!r}")
            try:
                node, comm = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError(path, line_no,
                                  f"non-integer field in {line!r}") from None
            if node in pairs:
                raise FormatError(path, line_no, f"node {node} assigned twice")
            pairs[node] = comm
    if not pairs:
        raise FormatError(path, 0, "empty partition file")
    size = n if n is not None else max(pairs) + 1
    labels = []
    for node in range(size):
        if node not in pairs:
            raise FormatError(path, 0, f"node {node} missing from partition")
        labels.append(pairs[node])
    if len(pairs) != size:
        raise FormatError(path, 0, "partition mentions nodes beyond n")
    return Partition.from_labels(labels), header
