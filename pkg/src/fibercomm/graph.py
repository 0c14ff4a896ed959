"""Finite marked metric graphs with an oriented-edge involution.

Oriented edges use the same ``~`` convention as words: each unoriented edge
is a pair ``e`` / ``~e`` of mutually reverse oriented edges.  All lengths are
exact rationals.  A marking is a spanning tree plus labels on the non-tree
edge orbits identifying the fundamental group with a free basis.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DisconnectedGraph, NonIncidentEdges, NotALoop, UnknownEdge
from .words import base, free_reduce, inv, inverse, is_positive


@dataclass(frozen=True)
class OrientedEdge:
    id: str
    src: str
    dst: str
    length: Fraction = Fraction(1)

    def __post_init__(self):
        if self.length <= 0:
            # recorded here so validate_graph can still report it
            pass


@dataclass(frozen=True)
class MarkedGraph:
    """Connected graph with spanning tree marking.

    ``edges`` maps positive edge ids to their data; reversed edges are
    implicit (``~e`` has swapped endpoints and the same length).
    ``basis_labels`` maps each non-tree positive edge id to its basis symbol.
    """

    vertices: tuple
    edges: dict
    spanning_tree: frozenset = frozenset()
    basis_labels: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "spanning_tree", frozenset(self.spanning_tree))
        if not self.basis_labels:
            labels = {e: e for e in sorted(self.edges) if e not in self.spanning_tree}
            object.__setattr__(self, "basis_labels", labels)

    # --- incidence -----------------------------------------------------

    def has_edge(self, e):
        return base(e) in self.edges

    def edge_src(self, e):
        data = self.edges.get(base(e))
        if data is None:
            raise UnknownEdge(e)
        return data.src if is_positive(e) else data.dst

    def edge_dst(self, e):
        return self.edge_src(inv(e))

    def edge_length(self, e):
        data = self.edges.get(base(e))
        if data is None:
            raise UnknownEdge(e)
        return data.length

    def oriented_edges(self):
        out = []
        for e in sorted(self.edges):
            out.append(e)
            out.append(inv(e))
        return out

    def edges_at(self, v):
        """Oriented edges emanating from vertex v (directions at v)."""
        return [e for e in self.oriented_edges() if self.edge_src(e) == v]

    def valence(self, v):
        return len(self.edges_at(v))

    # --- basics --------------------------------------------------------

    def is_connected(self):
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        adjacency = {}
        for e, data in self.edges.items():
            adjacency.setdefault(data.src, []).append(data.dst)
            adjacency.setdefault(data.dst, []).append(data.src)
        while stack:
            v = stack.pop()
            for w in adjacency.get(v, []):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def basis_symbols(self):
        return tuple(sorted(self.basis_labels.values()))

    # --- paths ---------------------------------------------------------

    def path_src(self, path):
        return self.edge_src(path[0]) if path else None

    def path_dst(self, path):
        return self.edge_dst(path[-1]) if path else None

    def check_path(self, path):
        for i in range(len(path) - 1):
            if self.edge_dst(path[i]) != self.edge_src(path[i + 1]):
                raise NonIncidentEdges(f"{path[i]} -> {path[i + 1]}")

    def path_length(self, path):
        return sum(self.edge_length(e) for e in path)

    # --- marking -------------------------------------------------------

    def tree_adjacency(self):
        adj = {v: [] for v in self.vertices}
        for e in self.spanning_tree:
            data = self.edges[e]
            adj[data.src].append((e, data.dst))
            adj[data.dst].append((inv(e), data.src))
        return adj

    def tree_path(self, u, v):
        """Reduced edge path from u to v inside the spanning tree."""
        if u == v:
            return ()
        adj = self.tree_adjacency()
        prev = {u: None}
        stack = [u]
        while stack:
            x = stack.pop()
            for e, y in sorted(adj[x]):
                if y not in prev:
                    prev[y] = (x, e)
                    stack.append(y)
        if v not in prev:
            raise DisconnectedGraph(f"no tree path {u} -> {v}")
        path = []
        x = v
        while prev[x] is not None:
            px, e = prev[x]
            path.append(e)
            x = px
        return tuple(reversed(path))


# --- operations --------------------------------------------------------


def validate_graph(g: MarkedGraph):
    """Report-style validation of all MarkedGraph invariants."""
    violations = []
    for e, data in g.edges.items():
        if data.length <= 0:
            violations.append(f"nonpositive length on edge {e}")
        if data.src not in g.vertices or data.dst not in g.vertices:
            violations.append(f"edge {e} has unknown endpoint")
    if not g.is_connected():
        violations.append("graph is disconnected")
    for v in g.vertices:
        if g.valence(v) < 2:
            violations.append(f"valence < 2 at vertex {v}")
    for e in g.spanning_tree:
        if e not in g.edges:
            violations.append(f"tree edge {e} is not an edge")
    # the tree must be a spanning tree
    if g.spanning_tree <= set(g.edges):
        tree_graph = {v: [] for v in g.vertices}
        for e in g.spanning_tree:
            data = g.edges[e]
            tree_graph[data.src].append(data.dst)
            tree_graph[data.dst].append(data.src)
        if g.vertices:
            seen = {g.vertices[0]}
            stack = [g.vertices[0]]
            while stack:
                v = stack.pop()
                for w in tree_graph[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(g.vertices):
                violations.append("spanning tree does not touch every vertex")
        if len(g.spanning_tree) != max(0, len(g.vertices) - 1):
            violations.append("spanning tree has wrong edge count")
    nontree = set(g.edges) - g.spanning_tree
    if set(g.basis_labels) != nontree:
        violations.append("basis labels do not match non-tree edges")
    elif len(set(g.basis_labels.values())) != len(nontree):
        violations.append("basis labels are not distinct")
    return violations


def rank(g: MarkedGraph):
    """First Betti number |edge orbits| - |vertices| + 1."""
    if not g.is_connected():
        raise DisconnectedGraph()
    return len(g.edges) - len(g.vertices) + 1


def tighten(g: MarkedGraph, path):
    """Reduce an edge path by cancelling backtracks; homotopic rel endpoints."""
    g.check_path(path)
    return free_reduce(tuple(path))


def loop_to_word(g: MarkedGraph, path, basepoint):
    """Word of a based loop in the marking basis (tree edges contribute nothing)."""
    if path:
        g.check_path(path)
        if g.path_src(path) != basepoint or g.path_dst(path) != basepoint:
            raise NotALoop(f"path is not a loop at {basepoint}")
    out = []
    for e in path:
        b = base(e)
        if b in g.spanning_tree:
            continue
        symbol = g.basis_labels[b]
        out.append(symbol if is_positive(e) else inv(symbol))
    return free_reduce(tuple(out))


def word_to_loop(g: MarkedGraph, word, basepoint):
    """Reduced based loop realizing a word via tree-path conjugation."""
    label_edge = {s: e for e, s in g.basis_labels.items()}
    segments = []
    for x in word:
        e = label_edge[base(x)]
        if not is_positive(x):
            e = inv(e)
        u, v = g.edge_src(e), g.edge_dst(e)
        segments.append(g.tree_path(basepoint, u) + (e,) + g.tree_path(v, basepoint))
    return free_reduce(tuple(y for seg in segments for y in seg))


def rose(symbols, vertex="v0", lengths=None):
    """Wedge of circles with the identity marking."""
    lengths = lengths or {}
    edges = {
        s: OrientedEdge(s, vertex, vertex, Fraction(lengths.get(s, 1)))
        for s in symbols
    }
    return MarkedGraph((vertex,), edges)


def subdivide(g: MarkedGraph, e, n_parts=None, new_vertex_prefix=None):
    """Split positive edge ``e`` into ``n_parts`` equal-length pieces.

    Returns ``(graph, piece_ids)`` where ``piece_ids`` traverse e in order.
    The pieces join the spanning tree except the last one when ``e`` was a
    non-tree edge (keeping the marking basis intact).
    """
    data = g.edges[e]
    n = n_parts or 2
    prefix = new_vertex_prefix or f"{e}."
    piece_len = data.length / n
    vertices = list(g.vertices)
    new_vs = [f"{prefix}v{i}" for i in range(1, n)]
    vertices.extend(new_vs)
    chain = [data.src] + new_vs + [data.dst]
    edges = dict(g.edges)
    del edges[e]
    piece_ids = []
    for i in range(n):
        pid = f"{e}.{i}"
        piece_ids.append(pid)
        edges[pid] = OrientedEdge(pid, chain[i], chain[i + 1], piece_len)
    tree = set(g.spanning_tree)
    labels = dict(g.basis_labels)
    if e in tree:
        tree.discard(e)
        tree.update(piece_ids)
    else:
        symbol = labels.pop(e)
        tree.update(piece_ids[:-1])
        labels[piece_ids[-1]] = symbol
    return (
        MarkedGraph(tuple(vertices), edges, frozenset(tree), labels),
        piece_ids,
    )


# --- JSON interchange ---------------------------------------------------


def graph_to_json_dict(g: MarkedGraph):
    return {
        "vertices": sorted(g.vertices),
        "edges": [
            {
                "id": e,
                "from": data.src,
                "to": data.dst,
                "length": str(data.length),
            }
            for e, data in sorted(g.edges.items())
        ],
        "tree": sorted(g.spanning_tree),
        "basis": {e: s for e, s in sorted(g.basis_labels.items())},
    }


def graph_from_json_dict(d):
    edges = {
        ed["id"]: OrientedEdge(
            ed["id"], ed["from"], ed["to"], Fraction(ed.get("length", "1"))
        )
        for ed in d["edges"]
    }
    return MarkedGraph(
        tuple(d["vertices"]),
        edges,
        frozenset(d.get("tree", [])),
        dict(d.get("basis", {})),
    )


def graph_to_json(g: MarkedGraph):
    return json.dumps(graph_to_json_dict(g), sort_keys=True, indent=2)


def graph_from_json(text):
    return graph_from_json_dict(json.loads(text))
