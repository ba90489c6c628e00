"""Two-class labeled graph databases and the transaction file format.

A database is an ordered collection of undirected, vertex- and edge-labeled
simple graphs, each assigned to class 1 (positive) or class 0 (negative).
Internally the classes are swapped if needed so the positive class is never
the larger one; reporting code un-swaps. Label tokens from input files are
interned into dense integer ids through per-database symbol tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Iterator, Mapping, Sequence


class ParseError(ValueError):
    """Malformed transaction-format input. Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LabelError(ValueError):
    """Missing, duplicate, or out-of-range class assignment."""


class ValidityError(ValueError):
    """Database cannot be used: empty, or only one class present."""


@dataclass(frozen=True)
class LabeledGraph:
    """One transaction: dense 0-based vertices with labels, simple undirected edges.

    Edges are normalized to (u, v, label) with u < v and stored sorted.
    """

    graph_id: int
    vertex_labels: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        normalized = []
        seen: set[tuple[int, int]] = set()
        nv = len(self.vertex_labels)
        for u, v, lbl in self.edges:
            if u == v:
                raise ValueError(f"graph {self.graph_id}: self-loop at vertex {u}")
            if not (0 <= u < nv and 0 <= v < nv):
                raise ValueError(
                    f"graph {self.graph_id}: edge ({u}, {v}) references a missing vertex"
                )
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValueError(f"graph {self.graph_id}: parallel edge ({u}, {v})")
            seen.add((u, v))
            normalized.append((u, v, lbl))
        normalized.sort()
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """adjacency[v] = sorted tuple of (neighbor, edge label)."""
        lists: list[list[tuple[int, int]]] = [[] for _ in self.vertex_labels]
        for u, v, lbl in self.edges:
            lists[u].append((v, lbl))
            lists[v].append((u, lbl))
        return tuple(tuple(sorted(item)) for item in lists)

    @cached_property
    def _edge_label_map(self) -> dict[tuple[int, int], int]:
        out = {}
        for u, v, lbl in self.edges:
            out[(u, v)] = lbl
            out[(v, u)] = lbl
        return out

    def edge_label(self, u: int, v: int) -> int | None:
        """Label of the edge between u and v, or None when absent."""
        return self._edge_label_map.get((u, v))


@dataclass(frozen=True, eq=False)
class GraphDatabase:
    """Immutable two-class graph collection.

    ``n`` counts the internal positive class, which is always the smaller of
    the two input classes; ``swapped`` records whether that required exchanging
    the user's labels. Graph positions (0-based order of appearance) act as
    transaction ids throughout the package.
    """

    graphs: tuple[LabeledGraph, ...]
    original_classes: tuple[int, ...]
    vertex_tokens: tuple[str, ...]
    edge_tokens: tuple[str, ...]
    swapped: bool = field(init=False)

    def __post_init__(self) -> None:
        if len(self.graphs) != len(self.original_classes):
            raise ValueError("one class per graph required")
        if not self.graphs:
            raise ValidityError("empty database")
        for cls in self.original_classes:
            if cls not in (0, 1):
                raise LabelError(f"class must be 0 or 1, got {cls!r}")
        ones = sum(self.original_classes)
        zeros = len(self.original_classes) - ones
        if ones == 0 or zeros == 0:
            raise ValidityError("both classes must be present")
        seen_ids = set()
        for g in self.graphs:
            if g.graph_id in seen_ids:
                raise ValueError(f"duplicate graph id {g.graph_id}")
            seen_ids.add(g.graph_id)
        object.__setattr__(self, "swapped", ones > zeros)

    @property
    def size(self) -> int:
        return len(self.graphs)

    @cached_property
    def n(self) -> int:
        """Internal positive class size (always <= n_prime)."""
        ones = sum(self.original_classes)
        return min(ones, self.size - ones)

    @property
    def n_prime(self) -> int:
        return self.size - self.n

    @cached_property
    def class_of(self) -> Mapping[int, int]:
        """Original class keyed by graph id, exactly as given in the input."""
        return {g.graph_id: c for g, c in zip(self.graphs, self.original_classes)}

    def is_internal_positive(self, position: int) -> bool:
        wanted = 0 if self.swapped else 1
        return self.original_classes[position] == wanted

    @cached_property
    def positive_mask(self) -> int:
        """Bitmask over positions with the internal positive class set."""
        mask = 0
        for i in range(self.size):
            if self.is_internal_positive(i):
                mask |= 1 << i
        return mask

    def internal_tail(self, tail: str) -> str:
        """Map a user-facing tail onto the internal class orientation.

        When classes were swapped, enrichment in the user's positive class
        appears as depletion internally, so left and right exchange.
        """
        if not self.swapped or tail == "two":
            return tail
        return "left" if tail == "right" else "right"

    @classmethod
    def from_graphs(
        cls,
        graphs: Sequence[LabeledGraph],
        classes: Sequence[int],
        vertex_tokens: Sequence[str] | None = None,
        edge_tokens: Sequence[str] | None = None,
    ) -> "GraphDatabase":
        """Build a database from in-memory graphs, defaulting tokens to str(id)."""
        graphs = tuple(graphs)
        if vertex_tokens is None:
            top = max((max(g.vertex_labels) for g in graphs if g.vertex_labels), default=-1)
            vertex_tokens = tuple(str(i) for i in range(top + 1))
        if edge_tokens is None:
            top = max((max(lbl for _, _, lbl in g.edges) for g in graphs if g.edges), default=-1)
            edge_tokens = tuple(str(i) for i in range(top + 1))
        return cls(graphs, tuple(int(c) for c in classes), tuple(vertex_tokens), tuple(edge_tokens))

    def _resolved(self):
        vt, et = self.vertex_tokens, self.edge_tokens
        return tuple(
            (
                g.graph_id,
                tuple(vt[lbl] for lbl in g.vertex_labels),
                tuple((u, v, et[lbl]) for u, v, lbl in g.edges),
                c,
            )
            for g, c in zip(self.graphs, self.original_classes)
        )

    def __eq__(self, other: object) -> bool:
        # Compare through the symbol tables: two databases are equal when they
        # describe the same token-labeled graphs with the same classes, even if
        # dense ids were assigned in a different order.
        if not isinstance(other, GraphDatabase):
            return NotImplemented
        return self._resolved() == other._resolved()

    def __hash__(self) -> int:
        return hash(self._resolved())


def _iter_lines(source: str | IO[str]) -> Iterator[tuple[int, str]]:
    lines = source.splitlines() if isinstance(source, str) else source
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        yield no, line


def _parse_labels_file(source: str | IO[str]) -> dict[int, int]:
    out: dict[int, int] = {}
    for no, line in _iter_lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(no, f"expected '<graph_id> <class>', got {line!r}")
        try:
            gid = int(parts[0])
        except ValueError:
            raise ParseError(no, f"graph id must be an integer, got {parts[0]!r}") from None
        if parts[1] not in ("0", "1"):
            raise LabelError(f"line {no}: class must be 0 or 1, got {parts[1]!r}")
        if gid in out:
            raise LabelError(f"line {no}: duplicate class for graph id {gid}")
        out[gid] = int(parts[1])
    return out


class _SymbolTable:
    def __init__(self) -> None:
        self.ids: dict[str, int] = {}

    def intern(self, token: str) -> int:
        if token not in self.ids:
            self.ids[token] = len(self.ids)
        return self.ids[token]

    def tokens(self) -> tuple[str, ...]:
        return tuple(self.ids)


def parse_database(
    graph_source: str | IO[str], labels_source: str | IO[str] | None = None
) -> GraphDatabase:
    """Parse the transaction format, optionally overriding classes from a labels file.

    Format, one record per graph::

        t # <graph_id> [<class>]
        v <vertex_id> <vertex_label>
        e <src> <dst> <edge_label>

    Vertex ids must be 0-based and consecutive, vertices must precede the edges
    that use them, and every undirected edge appears exactly once. Blank lines
    and lines starting with '%' are ignored. When a labels file is supplied it
    is authoritative and must cover every graph.
    """
    labels_map = _parse_labels_file(labels_source) if labels_source is not None else None
    vtable = _SymbolTable()
    etable = _SymbolTable()

    graphs: list[LabeledGraph] = []
    classes: list[int | None] = []
    seen_ids: set[int] = set()

    cur_id: int | None = None
    cur_class: int | None = None
    cur_labels: list[int] = []
    cur_edges: list[tuple[int, int, int]] = []
    cur_edge_pairs: set[tuple[int, int]] = set()

    def flush() -> None:
        if cur_id is None:
            return
        graphs.append(LabeledGraph(cur_id, tuple(cur_labels), tuple(cur_edges)))
        classes.append(cur_class)

    for no, line in _iter_lines(graph_source):
        parts = line.split()
        kind = parts[0]
        if kind == "t":
            if len(parts) not in (3, 4) or parts[1] != "#":
                raise ParseError(no, f"expected 't # <graph_id> [<class>]', got {line!r}")
            flush()
            try:
                cur_id = int(parts[2])
            except ValueError:
                raise ParseError(no, f"graph id must be an integer, got {parts[2]!r}") from None
            if cur_id in seen_ids:
                raise ParseError(no, f"duplicate graph id {cur_id}")
            seen_ids.add(cur_id)
            cur_class = None
            if len(parts) == 4:
                if parts[3] not in ("0", "1"):
                    raise LabelError(f"line {no}: class must be 0 or 1, got {parts[3]!r}")
                cur_class = int(parts[3])
            cur_labels = []
            cur_edges = []
            cur_edge_pairs = set()
        elif kind == "v":
            if cur_id is None:
                raise ParseError(no, "vertex line before any 't' line")
            if len(parts) != 3:
                raise ParseError(no, f"expected 'v <vertex_id> <vertex_label>', got {line!r}")
            try:
                vid = int(parts[1])
            except ValueError:
                raise ParseError(no, f"vertex id must be an integer, got {parts[1]!r}") from None
            if vid != len(cur_labels):
                raise ParseError(
                    no, f"vertex ids must be 0-based and consecutive; expected {len(cur_labels)}, got {vid}"
                )
            cur_labels.append(vtable.intern(parts[2]))
        elif kind == "e":
            if cur_id is None:
                raise ParseError(no, "edge line before any 't' line")
            if len(parts) != 4:
                raise ParseError(no, f"expected 'e <src> <dst> <edge_label>', got {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(no, f"edge endpoints must be integers in {line!r}") from None
            if u == v:
                raise ParseError(no, f"self-loop at vertex {u}")
            if not (0 <= u < len(cur_labels) and 0 <= v < len(cur_labels)):
                raise ParseError(no, f"edge ({u}, {v}) references an undeclared vertex")
            pair = (min(u, v), max(u, v))
            if pair in cur_edge_pairs:
                raise ParseError(no, f"parallel edge ({u}, {v})")
            cur_edge_pairs.add(pair)
            cur_edges.append((u, v, etable.intern(parts[3])))
        else:
            raise ParseError(no, f"unknown record type {kind!r}")
    flush()

    if not graphs:
        raise ValidityError("empty database")

    final_classes: list[int] = []
    for g, inline in zip(graphs, classes):
        if labels_map is not None:
            if g.graph_id not in labels_map:
                raise LabelError(f"graph id {g.graph_id} missing from the labels file")
            final_classes.append(labels_map[g.graph_id])
        else:
            if inline is None:
                raise LabelError(f"graph id {g.graph_id} has no class assignment")
            final_classes.append(inline)

    return GraphDatabase(
        tuple(graphs), tuple(final_classes), vtable.tokens(), etable.tokens()
    )


def serialize_database(db: GraphDatabase) -> str:
    """Render a database back to the transaction format with inline classes.

    Re-parsing the result yields a database equal to the original.
    """
    out: list[str] = []
    for g, cls in zip(db.graphs, db.original_classes):
        out.append(f"t # {g.graph_id} {cls}")
        for vid, lbl in enumerate(g.vertex_labels):
            out.append(f"v {vid} {db.vertex_tokens[lbl]}")
        for u, v, lbl in g.edges:
            out.append(f"e {u} {v} {db.edge_tokens[lbl]}")
    return "\n".join(out) + "\n"


def occurrence_bitvector(db: GraphDatabase, transaction_ids: Iterable[int]) -> int:
    """Pack transaction ids into an int bitmask; bit i set iff graph i is present."""
    bits = 0
    for tid in transaction_ids:
        if not 0 <= tid < db.size:
            raise ValueError(f"transaction id {tid} outside [0, {db.size})")
        bits |= 1 << tid
    return bits
