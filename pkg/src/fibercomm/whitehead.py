"""Periodic directions, principal vertices, stable Whitehead graphs,
geometric index, and asymmetry certification.

The ideal Whitehead graph is realized by its stable local-graph proxy at
principal vertices: vertices are the periodic directions, edges are the
taken turns of the leaf segments saturated under the direction map.
"""

from dataclasses import dataclass, field
from itertools import permutations
from math import lcm

from .errors import NotRotationless
from .graph import rank
from .maps import GraphMap, find_nielsen_paths, illegal_turns, iterate_map
from .words import base, inv


# --- direction orbits ----------------------------------------------------


def periodic_directions(f: GraphMap):
    """Map direction -> period for the Dg-periodic directions."""
    dirs = f.directions()
    dmap = {d: f.direction_image(d) for d in dirs}
    out = {}
    for d in dirs:
        cur = d
        seen = []
        while cur not in seen:
            seen.append(cur)
            cur = dmap[cur]
        if cur == d:
            out[d] = len(seen)
    return out


def principal_vertices(f: GraphMap, nielsen_bounds=None):
    """Vertices with >= 3 periodic directions, plus vertex endpoints of
    indivisible periodic Nielsen paths found within bounds.

    Returns ``(vertices, suspicious)``; the flag is set when no principal
    vertex is found at all (at least one must exist).
    """
    g = f.domain
    periods = periodic_directions(f)
    verts = set()
    for v in g.vertices:
        count = sum(1 for d in periods if g.edge_src(d) == v)
        if count >= 3:
            verts.add(v)
    if nielsen_bounds is not None:
        for np_ in find_nielsen_paths(f, *nielsen_bounds):
            if not np_.indivisible:
                continue
            for end in np_.endpoints:
                if end[0] == "vertex":
                    verts.add(end[1])
    return sorted(verts), not verts


def rotationless_power(f: GraphMap, k_max):
    """Least k <= k_max making every principal vertex and periodic direction
    there fixed; None when lcm of the periods exceeds the bound."""
    g = f.domain
    periods = periodic_directions(f)
    verts, _ = principal_vertices(f)
    relevant = [1]
    for v in verts:
        for d, p in periods.items():
            if g.edge_src(d) == v:
                relevant.append(p)
    vertex_orbit = _vertex_periods(f, verts)
    k = lcm(*relevant, *vertex_orbit)
    return k if k <= k_max else None


def _vertex_periods(f: GraphMap, verts):
    out = []
    for v in verts:
        cur = v
        seen = []
        while cur not in seen:
            seen.append(cur)
            cur = f.vertex_map[cur]
        if cur == v:
            out.append(len(seen))
    return out or [1]


# --- leaf segments -------------------------------------------------------


@dataclass(frozen=True)
class LeafSegments:
    edge: str
    power: int
    segment: tuple


def leaf_segments(f: GraphMap, e, n):
    """The tightened iterate g^n(e): a finite window into the stable
    lamination leaves."""
    return LeafSegments(e, n, iterate_map(f, (e,), n))


# --- stable Whitehead graphs ---------------------------------------------


@dataclass(frozen=True)
class WhiteheadGraph:
    vertex: str  # the principal vertex this local graph lives at
    nodes: tuple  # periodic directions at the vertex, sorted
    edges: frozenset  # frozensets {d1, d2}
    angles: dict = field(default_factory=dict)  # optional node -> label

    def adjacency(self):
        adj = {d: set() for d in self.nodes}
        for e in self.edges:
            d1, d2 = sorted(e)
            adj[d1].add(d2)
            adj[d2].add(d1)
        return adj

    def to_dot(self, name="whitehead"):
        lines = [f"graph {name} {{"]
        for d in self.nodes:
            attrs = f' [angle="{self.angles[d]}"]' if d in self.angles else ""
            lines.append(f'  "{d}"{attrs};')
        for e in sorted(self.edges, key=sorted):
            d1, d2 = sorted(e)
            lines.append(f'  "{d1}" -- "{d2}";')
        lines.append("}")
        return "\n".join(lines)


def _is_rotationless(f: GraphMap):
    g = f.domain
    periods = periodic_directions(f)
    verts, _ = principal_vertices(f)
    for v in verts:
        if f.vertex_map[v] != v:
            return False
        for d, p in periods.items():
            if g.edge_src(d) == v and p != 1:
                return False
    return True


def stable_whitehead_graphs(f: GraphMap, n_saturation=64):
    """One local stable graph per principal vertex.

    Edges are the taken turns between periodic directions, saturated under
    the direction map until stabilization (the turn set is finite).
    """
    if not _is_rotationless(f):
        raise NotRotationless()
    g = f.domain
    periods = periodic_directions(f)
    dmap = {d: f.direction_image(d) for d in f.directions()}
    turns = set(f.taken_turns())
    for _ in range(n_saturation):
        new = {
            frozenset((dmap[d1], dmap[d2]))
            for t in turns
            for d1, d2 in [sorted(t) if len(t) == 2 else (tuple(t)[0],) * 2]
        }
        new = {t for t in new if len(t) == 2}
        if new <= turns:
            break
        turns |= new
    verts, _ = principal_vertices(f)
    graphs = []
    for v in verts:
        nodes = tuple(sorted(d for d in periods if g.edge_src(d) == v and periods[d] == 1))
        local = frozenset(
            t for t in turns if all(d in nodes for d in t)
        )
        graphs.append(WhiteheadGraph(v, nodes, local))
    return graphs


# --- geometric index -----------------------------------------------------


@dataclass(frozen=True)
class IndexReport:
    fixed_direction_counts: tuple  # per principal vertex, counts >= 3 only contribute
    index: int
    rank: int
    ageometric: bool
    nielsen_free_within_bounds: bool = None


def geometric_index(f: GraphMap, nielsen_bounds=(2, 6)):
    """Geometric index proxy: sum of (fixed directions - 2) over principal
    vertices, with the ageometricity inequality index < rank - 2."""
    if not _is_rotationless(f):
        raise NotRotationless()
    g = f.domain
    periods = periodic_directions(f)
    verts, _ = principal_vertices(f)
    counts = []
    for v in verts:
        counts.append(sum(1 for d in periods if g.edge_src(d) == v and periods[d] == 1))
    total = sum(c - 2 for c in counts if c >= 3)
    r = rank(g)
    inp_free = True
    if nielsen_bounds is not None:
        inp_free = not any(
            np_.indivisible for np_ in find_nielsen_paths(f, *nielsen_bounds)
        )
    return IndexReport(
        fixed_direction_counts=tuple(counts),
        index=total,
        rank=r,
        ageometric=total < r - 2,
        nielsen_free_within_bounds=inp_free,
    )


# --- graph automorphisms and asymmetry -----------------------------------


def graph_automorphisms(w: WhiteheadGraph):
    """All automorphisms of the (simple) graph, as node bijections."""
    nodes = list(w.nodes)
    adj = w.adjacency()
    degree = {d: len(adj[d]) for d in nodes}
    autos = []

    def backtrack(assigned, remaining):
        if not remaining:
            autos.append(dict(assigned))
            return
        d = remaining[0]
        for target in nodes:
            if target in assigned.values():
                continue
            if degree[target] != degree[d]:
                continue
            ok = True
            for prev, image in assigned.items():
                linked = prev in adj[d]
                linked_img = image in adj[target]
                if linked != linked_img:
                    ok = False
                    break
            if ok:
                assigned[d] = target
                backtrack(assigned, remaining[1:])
                del assigned[d]

    backtrack({}, nodes)
    return autos


def brute_force_automorphisms(w: WhiteheadGraph):
    """Oracle: exhaustive check of all node bijections."""
    nodes = list(w.nodes)
    adj = w.adjacency()
    autos = []
    for perm in permutations(nodes):
        m = dict(zip(nodes, perm))
        if all((m[d1] in adj[m[d2]]) == (d1 in adj[d2]) for d1 in nodes for d2 in nodes):
            autos.append(m)
    return autos


def is_asymmetric(w: WhiteheadGraph):
    return len(graph_automorphisms(w)) == 1


# --- angle labels --------------------------------------------------------


def _canonical_form(nodes, edges):
    """Canonical labeled form of a small graph: the lexicographically least
    adjacency encoding over all node orderings."""
    nodes = list(nodes)
    best = None
    best_order = None
    for perm in permutations(nodes):
        pos = {d: i for i, d in enumerate(perm)}
        enc = tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in map(sorted, edges)))
        if best is None or enc < best:
            best = enc
            best_order = perm
    return best, best_order


@dataclass(frozen=True)
class AngleLabeling:
    labels: dict  # direction -> (component id, canonical position)
    components: tuple  # canonical encodings per component


def angle_labeling(f: GraphMap, n_saturation=64):
    """Canonical per-direction labels when every stable component is
    asymmetric; returns None labels with the symmetric offender otherwise.

    Returns ``("labels", AngleLabeling)`` or ``("symmetric", vertex)``.
    """
    graphs = stable_whitehead_graphs(f, n_saturation)
    labels = {}
    encodings = []
    for w in graphs:
        for comp_nodes in _components(w):
            comp_edges = [e for e in w.edges if set(e) <= set(comp_nodes)]
            sub = WhiteheadGraph(w.vertex, tuple(sorted(comp_nodes)), frozenset(comp_edges))
            if len(comp_nodes) > 1 and not is_asymmetric(sub):
                return ("symmetric", w.vertex)
            enc, order = _canonical_form(sub.nodes, sub.edges)
            cid = len(encodings)
            encodings.append(enc)
            for pos, d in enumerate(order):
                labels[d] = (cid, pos)
    return ("labels", AngleLabeling(labels, tuple(encodings)))


def _components(w: WhiteheadGraph):
    adj = w.adjacency()
    seen = set()
    comps = []
    for d in w.nodes:
        if d in seen:
            continue
        comp = {d}
        stack = [d]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(sorted(comp))
    return comps
