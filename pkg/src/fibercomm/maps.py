"""Topological representatives g: G -> G and train track verification.

Turn legality is decided by finite orbit closure of the direction map on the
turn set, so every verdict here is exact.  Stretch-factor data for the
transition matrix lives in :mod:`fibercomm.spectral`.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotHomotopyEquivalence, UnknownEdge
from .graph import MarkedGraph, loop_to_word, word_to_loop
from .words import (
    apply_images,
    base,
    cyclic_reduce,
    cyclic_rotations,
    enumerate_reduced_words,
    free_reduce,
    inv,
    inverse,
    is_positive,
    power_images,
)


@dataclass(frozen=True)
class GraphMap:
    """Vertex map plus edge -> reduced edge path assignment."""

    domain: MarkedGraph
    vertex_map: dict
    edge_map: dict  # positive edge id -> tuple of oriented edge ids

    def edge_image(self, e):
        b = base(e)
        if b not in self.edge_map:
            raise UnknownEdge(e)
        img = self.edge_map[b]
        if not is_positive(e):
            img = tuple(inv(x) for x in reversed(img))
        return img

    def vertex_image(self, v):
        return self.vertex_map[v]

    def validate(self):
        g = self.domain
        problems = []
        for v in g.vertices:
            if self.vertex_map.get(v) not in g.vertices:
                problems.append(f"vertex {v} has no image vertex")
        for e in g.edges:
            img = self.edge_map.get(e)
            if not img:
                problems.append(f"edge {e} has empty image")
                continue
            try:
                g.check_path(img)
            except Exception:
                problems.append(f"image of {e} is not a path")
                continue
            if free_reduce(img) != tuple(img):
                problems.append(f"image of {e} is not reduced")
            if g.path_src(img) != self.vertex_map[g.edge_src(e)]:
                problems.append(f"image of {e} starts at wrong vertex")
            if g.path_dst(img) != self.vertex_map[g.edge_dst(e)]:
                problems.append(f"image of {e} ends at wrong vertex")
        return problems

    # --- directions ----------------------------------------------------

    def directions(self):
        return self.domain.oriented_edges()

    def direction_image(self, d):
        return self.edge_image(d)[0]

    def taken_turns(self):
        """Turns crossed by edge images: pairs (rev(e_i), e_{i+1})."""
        turns = set()
        for e in self.domain.edges:
            img = self.edge_image(e)
            for i in range(len(img) - 1):
                turns.add(frozenset((inv(img[i]), img[i + 1])))
        return turns


def identity_map(g: MarkedGraph):
    return GraphMap(g, {v: v for v in g.vertices}, {e: (e,) for e in g.edges})


def apply_map(f: GraphMap, path):
    """Tightened image g(p)_#."""
    out = []
    for e in path:
        for y in f.edge_image(e):
            if out and out[-1] == inv(y):
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def iterate_map(f: GraphMap, path, n):
    for _ in range(n):
        path = apply_map(f, path)
    return path


def compose(f: GraphMap, g: GraphMap):
    """The map f after g (both self-maps of the same graph)."""
    return GraphMap(
        g.domain,
        {v: f.vertex_map[g.vertex_map[v]] for v in g.domain.vertices},
        {e: apply_map(f, g.edge_map[e]) for e in g.domain.edges},
    )


def map_power(f: GraphMap, n):
    result = identity_map(f.domain)
    for _ in range(n):
        result = compose(f, result)
    return result


def orbit_order(g: MarkedGraph):
    """Fixed ordering of unoriented edge orbits used for matrix indexing."""
    return sorted(g.edges)


def transition_matrix(f: GraphMap):
    """Occurrence counts per unoriented edge orbit (entry[i][j] = #i in image of j)."""
    order = orbit_order(f.domain)
    index = {e: i for i, e in enumerate(order)}
    mat = np.zeros((len(order), len(order)), dtype=np.int64)
    for j, e in enumerate(order):
        for x in f.edge_image(e):
            mat[index[base(x)], j] += 1
    return mat


def is_irreducible_matrix(mat):
    """Strong connectivity of the digraph of a nonnegative matrix."""
    n = mat.shape[0]
    if n == 0:
        return False

    def reachable(adj):
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if adj[i, j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n

    return reachable(mat != 0) and reachable((mat != 0).T)


# --- train track verification ------------------------------------------


@dataclass(frozen=True)
class TrainTrackVerdict:
    is_train_track: bool
    illegal_turns: frozenset  # frozensets of direction pairs
    gates: tuple  # tuple of frozensets partitioning directions, per vertex
    irreducible: bool
    witness: tuple = None  # (power, edge) exhibiting cancellation, if found


def _all_turns(g: MarkedGraph):
    turns = []
    for v in g.vertices:
        dirs = g.edges_at(v)
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                turns.append(frozenset((dirs[i], dirs[j])))
    return turns


def illegal_turns(f: GraphMap):
    """Turns whose direction-map orbit reaches a degenerate turn."""
    dmap = {d: f.direction_image(d) for d in f.directions()}
    result = set()
    for turn in _all_turns(f.domain):
        d1, d2 = tuple(turn) if len(turn) == 2 else (next(iter(turn)),) * 2
        seen = set()
        cur = (d1, d2)
        while frozenset(cur) not in seen:
            seen.add(frozenset(cur))
            cur = (dmap[cur[0]], dmap[cur[1]])
            if cur[0] == cur[1]:
                result.add(turn)
                break
    return frozenset(result)


def gate_partition(f: GraphMap):
    """Directions at a common vertex identified by eventual Dg-collision."""
    g = f.domain
    dirs = f.directions()
    dmap = {d: f.direction_image(d) for d in dirs}
    parent = {d: d for d in dirs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    images = {d: d for d in dirs}
    for _ in range(2 * len(dirs)):
        images = {d: dmap[images[d]] for d in dirs}
        for v in g.vertices:
            at_v = g.edges_at(v)
            by_image = {}
            for d in at_v:
                by_image.setdefault(images[d], []).append(d)
            for group in by_image.values():
                for d in group[1:]:
                    union(group[0], d)
    classes = {}
    for d in dirs:
        classes.setdefault(find(d), []).append(d)
    return tuple(sorted(frozenset(c) for c in classes.values()))


def _cancellation_witness(f: GraphMap, power_bound):
    """Search for the least power at which some edge image fails to be reduced."""
    for e in sorted(f.domain.edges):
        path = (e,)
        for k in range(1, power_bound + 1):
            raw = [y for x in path for y in f.edge_image(x)]
            if free_reduce(tuple(raw)) != tuple(raw):
                return (k, e)
            path = tuple(raw)
    return None


def is_train_track(f: GraphMap, power_bound=10):
    """Exact train track verdict via turn orbit closure.

    ``power_bound`` only caps the search for a reported cancellation witness;
    the verdict itself is decided on the finite turn set.
    """
    bad = illegal_turns(f)
    taken = f.taken_turns()
    ok = not (bad & taken)
    witness = None if ok else _cancellation_witness(f, power_bound)
    return TrainTrackVerdict(
        is_train_track=ok,
        illegal_turns=bad,
        gates=gate_partition(f),
        irreducible=is_irreducible_matrix(transition_matrix(f)),
        witness=witness,
    )


# --- induced outer automorphism ----------------------------------------


def induced_outer_automorphism(f: GraphMap, basepoint=None, check=True):
    """Images of the marking basis under f, via tree-path conjugation.

    The image of a basis loop sigma is closed up with the tree path from
    the image of the basepoint back to the basepoint.
    """
    g = f.domain
    basepoint = basepoint or g.vertices[0]
    bp_image = f.vertex_map[basepoint]
    back = g.tree_path(bp_image, basepoint)
    out = g.tree_path(basepoint, bp_image)
    images = {}
    for e, symbol in sorted(g.basis_labels.items()):
        loop = word_to_loop(g, (symbol,), basepoint)
        image_loop = free_reduce(out + apply_map(f, loop) + back)
        images[symbol] = loop_to_word(g, image_loop, basepoint)
    if check and not _is_automorphism(g.basis_symbols(), images):
        raise NotHomotopyEquivalence("basis images do not generate the full group")
    return images


def _is_automorphism(symbols, images):
    from .covers import fold_subgroup_graph, subgroup_index  # local: avoids cycle

    sg = fold_subgroup_graph(list(images.values()), symbols)
    return sg.is_complete() and subgroup_index(sg, symbols) == 1


# --- Nielsen paths ------------------------------------------------------


@dataclass(frozen=True)
class NielsenPath:
    """A path with g^p-invariant homotopy class rel endpoints.

    ``path`` carries the full-edge support; an interior endpoint lies inside
    the first/last edge at the recorded exact parameter.
    """

    path: tuple
    period: int
    endpoints: tuple  # two of ("vertex", v) or ("interior", edge, str exact, float)
    indivisible: bool = True


def _edge_paths(g: MarkedGraph, max_len):
    """All nonempty reduced edge paths up to max_len, (length, lex) ordered."""
    frontier = [((d,), g.edge_dst(d)) for d in sorted(g.oriented_edges())]
    while frontier:
        for path, _ in frontier:
            yield path
        if len(frontier[0][0]) == max_len:
            return
        nxt = []
        for path, v in frontier:
            for d in sorted(g.edges_at(v)):
                if d != inv(path[-1]):
                    nxt.append((path + (d,), g.edge_dst(d)))
        frontier = nxt


def _common_path_prefix(p1, p2):
    n = 0
    for a, b in zip(p1, p2):
        if a != b:
            break
        n += 1
    return p1[:n]


def _vertex_nielsen_paths(f: GraphMap, period_bound, length_bound):
    found = {}
    for sigma in _edge_paths(f.domain, length_bound):
        if inverse(sigma) in found:
            continue
        path = sigma
        for p in range(1, period_bound + 1):
            path = apply_map(f, path)
            if path == sigma:
                found[sigma] = p
                break
    out = []
    for sigma, p in found.items():
        u, v = f.domain.path_src(sigma), f.domain.path_dst(sigma)
        out.append((sigma, p, (("vertex", u), ("vertex", v))))
    return out


def _interior_nielsen_paths(f: GraphMap, period_bound, length_bound):
    """Two-legal-legs-at-one-illegal-turn candidates with endpoints at
    exact fixed points of the eigen-metric, located in Q(lambda)."""
    from .spectral import pf_data, pf_left_eigenvector

    mat = transition_matrix(f)
    try:
        sf, _, _ = pf_data(mat)
    except Exception:
        return []
    if not sf.expanding:
        return []
    field = sf.field()
    order = orbit_order(f.domain)
    lengths = pf_left_eigenvector(mat, field)
    if field.sign(lengths[0]) < 0:
        lengths = [field.neg(x) for x in lengths]
    ell = {e: lengths[i] for i, e in enumerate(order)}

    def metric(path):
        total = field.zero()
        for d in path:
            total = field.add(total, ell[base(d)])
        return total

    bad = illegal_turns(f)
    legal_next = _legal_continuations(f, bad)
    results = []
    lam = field.root()
    for turn in sorted(bad, key=sorted):
        if len(turn) != 2:
            continue
        d1, d2 = sorted(turn)
        for p in range(1, period_bound + 1):
            lam_p = field.one()
            for _ in range(p):
                lam_p = field.mul(lam_p, lam)
            denom = field.sub(lam_p, field.one())
            hit = _grow_legs(
                f, d1, d2, p, length_bound, legal_next, field, metric, denom, ell
            )
            if hit is not None:
                results.append(hit)
    return results


def _legal_continuations(f: GraphMap, bad_turns):
    g = f.domain
    table = {}
    for d in g.oriented_edges():
        v = g.edge_dst(d)
        outs = []
        for d2 in sorted(g.edges_at(v)):
            if d2 == inv(d):
                continue
            if frozenset((inv(d), d2)) in bad_turns:
                continue
            outs.append(d2)
        table[d] = outs
    return table


def _grow_legs(f, d1, d2, p, length_bound, legal_next, field, metric, denom, ell):
    """Depth-first coupled growth of the two legs; returns the first hit."""
    stack = [((d1,), (d2,))]
    seen = set()
    while stack:
        alpha, beta = stack.pop()
        if (alpha, beta) in seen or len(alpha) > length_bound or len(beta) > length_bound:
            continue
        seen.add((alpha, beta))
        g1 = iterate_map(f, alpha, p)
        g2 = iterate_map(f, beta, p)
        tau = _common_path_prefix(g1, g2)
        if not tau:
            continue
        a_tail, b_tail = g1[len(tau):], g2[len(tau):]
        if _common_path_prefix(a_tail, alpha) not in (a_tail[: len(alpha)], alpha):
            continue
        if _common_path_prefix(b_tail, beta) not in (b_tail[: len(beta)], beta):
            continue
        target = field.div(metric(tau), denom)
        end_a = _locate(field, alpha, target, ell, f.domain, start=False)
        end_b = _locate(field, beta, target, ell, f.domain, start=False)
        if end_a is not None and end_b is not None:
            if end_a[0] == "vertex" and end_b[0] == "vertex":
                continue  # vertex-endpoint paths come from the direct search
            sigma = tuple(inv(x) for x in reversed(alpha)) + beta
            return (sigma, p, (_flip(end_a, alpha, f.domain), end_b))
        # pull: adopt the image tails when they extend the current legs
        grew = False
        if len(a_tail) > len(alpha) and a_tail[: len(alpha)] == alpha:
            alpha2 = a_tail[: length_bound]
            if alpha2 != alpha:
                grew = True
        else:
            alpha2 = alpha
        if len(b_tail) > len(beta) and b_tail[: len(beta)] == beta:
            beta2 = b_tail[: length_bound]
            if beta2 != beta:
                grew = True
        else:
            beta2 = beta
        if grew:
            stack.append((alpha2, beta2))
            continue
        # branch on extending whichever leg is metrically short
        for leg, other, first in ((alpha, beta, True), (beta, alpha, False)):
            if field.lt(metric(leg), field.div(metric(tau), denom)):
                for d in legal_next[leg[-1]]:
                    ext = leg + (d,)
                    stack.append((ext, other) if first else (other, ext))
                break
    return None


def _locate(field, leg, target, ell, g, start):
    """Endpoint descriptor for the point at metric distance ``target`` along
    the leg; None if the leg is too short."""
    acc = field.zero()
    for i, d in enumerate(leg):
        nxt = field.add(acc, ell[base(d)])
        s_here = field.sign(field.sub(target, nxt))
        if s_here < 0:
            t = field.sub(target, acc)
            exact = ",".join(str(c) for c in t)
            return ("interior", d, exact, float(field.approx(t)))
        if s_here == 0:
            if i == len(leg) - 1:
                return ("vertex", g.edge_dst(d))
            return None  # point is a vertex strictly inside the leg: divisible
        acc = nxt
    return None


def _flip(endpoint, alpha, g):
    """Re-express an endpoint found along alpha on the reversed carrier."""
    if endpoint[0] == "vertex":
        return endpoint
    _, d, exact, approx = endpoint
    return ("interior", inv(d), exact, approx)


def find_nielsen_paths(f: GraphMap, period_bound, length_bound):
    """Bounded search for periodic Nielsen paths g^p_#(sigma) = sigma.

    Candidates are reduced paths with vertex endpoints (direct iteration)
    plus the classical two-legal-legs shape with exact eigen-metric interior
    endpoints.  Absence within bounds is just an empty list, never a proof.
    """
    raw = _vertex_nielsen_paths(f, period_bound, length_bound)
    raw.extend(_interior_nielsen_paths(f, period_bound, length_bound))
    # dedupe by carrier up to reversal, keep the least period
    best = {}
    for sigma, p, ends in raw:
        key = min(sigma, inverse(sigma))
        if key not in best or p < best[key][1]:
            best[key] = (sigma, p, ends)
    chosen = [best[k] for k in sorted(best)]
    vertex_paths = {
        s for s, _, ends in chosen if all(e[0] == "vertex" for e in ends)
    }
    out = []
    for sigma, p, ends in chosen:
        divisible = False
        for cut in range(1, len(sigma)):
            left, right = sigma[:cut], sigma[cut:]
            if _known(left, vertex_paths) and _known(right, vertex_paths):
                divisible = True
                break
        out.append(NielsenPath(sigma, p, ends, indivisible=not divisible))
    return out


def _known(path, vertex_paths):
    return path in vertex_paths or inverse(path) in vertex_paths


# --- toroidality -------------------------------------------------------


@dataclass(frozen=True)
class ToroidalityVerdict:
    toroidal: bool
    witness_word: tuple = None
    witness_power: int = None


def is_atoroidal(f: GraphMap, power_bound, length_bound, basepoint=None):
    """Bounded search for a conjugacy class fixed by a power of the map.

    Classes are compared by cyclic reduction plus rotation; a class and its
    inverse are not identified.  Returns the lexicographically least witness
    in (length, word, power) order.
    """
    images = induced_outer_automorphism(f, basepoint=basepoint, check=False)
    symbols = f.domain.basis_symbols()
    powers = [power_images(images, k) for k in range(1, power_bound + 1)]
    for w in enumerate_reduced_words(symbols, length_bound, cyclically_reduced=True):
        rotations = set(cyclic_rotations(w))
        for k, imgs in enumerate(powers, start=1):
            img, _ = cyclic_reduce(apply_images(imgs, w))
            if img in rotations:
                return ToroidalityVerdict(True, w, k)
    return ToroidalityVerdict(False)


# --- interchange -------------------------------------------------------


def map_to_json_dict(f: GraphMap):
    from .graph import graph_to_json_dict
    from .words import format_word

    return {
        "graph": graph_to_json_dict(f.domain),
        "vertex_map": {v: f.vertex_map[v] for v in sorted(f.domain.vertices)},
        "edge_map": {e: format_word(f.edge_map[e]) for e in sorted(f.domain.edges)},
    }


def map_from_json_dict(d):
    from .graph import graph_from_json_dict
    from .words import parse_word

    g = graph_from_json_dict(d["graph"])
    edge_map = {e: parse_word(w) for e, w in d["edge_map"].items()}
    return GraphMap(g, dict(d["vertex_map"]), edge_map)
