"""Dynamic-regime exploration: mutation graphs, bifurcation graphs, atlas.

A regime is a maximal parameter-space cell sharing one support family.
Within a fixed graph, walls between chirotope cells are realizable
mutations; contracting walls that leave the support family unchanged
yields the bifurcation graph.  The atlas enumerates all sixteen
three-node digraph classes and measures their regimes by dense exact
sampling (integers throughout the hot loop).
"""

from __future__ import annotations

import hashlib
import itertools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DegeneracyError, SearchBudgetError
from .exact import sign
from .chirotope import (
    Chirotope,
    N3_SUBSETS,
    basis_name,
    canonical_signs_n3,
    canonical_values_n3,
    raw_sign_from_map,
)
from .fixed_points import SupportFamily, support_label
from .mutations import competitive_pins, mutations_of, pinned_bases
from .network import Digraph, Network, Param, format_param, get_param, graph_of, set_param

WEIGHT_FLOOR = Fraction(-3)
INPUT_CEIL = Fraction(1)


# -- digraph isomorphism classes --------------------------------------


def digraph_classes(n: int = 3) -> tuple[Digraph, ...]:
    """Canonical representatives of all digraph isomorphism classes on n
    nodes (16 classes for n = 3), ordered by edge count then edge list."""
    seen: dict[tuple, Digraph] = {}
    pairs = list(itertools.permutations(range(n), 2))
    for bits in itertools.product((False, True), repeat=len(pairs)):
        edges = frozenset(p for p, keep in zip(pairs, bits) if keep)
        g = Digraph(n, edges)
        key = g.canonical_key()
        if key not in seen:
            seen[key] = Digraph(n, frozenset(key))
    return tuple(sorted(seen.values(), key=lambda g: (len(g.edges), g.sorted_edges())))


def class_of(g: Digraph) -> Digraph:
    return Digraph(g.n, frozenset(g.canonical_key()))


# -- exact sampling ----------------------------------------------------


def sample_competitive(rng: random.Random, n: int, denom: int = 1000) -> Network:
    """Uniform competitive network on the denominator grid: weights in
    (-3, 0), inputs in (0, 1)."""
    W = tuple(
        tuple(
            Fraction(0) if i == j else Fraction(-rng.randrange(1, 3 * denom), denom)
            for j in range(n)
        )
        for i in range(n)
    )
    b = tuple(Fraction(rng.randrange(1, denom), denom) for _ in range(n))
    return Network(W, b)


def _sample_ints_for_graph(
    rng: random.Random, g: Digraph, denom: int
) -> tuple[list[list[int]], list[int]] | None:
    """One attempt at integer parameters (scaled by denom) whose network
    has graph g.  Edge i->j holds iff v_i*w[j][i] + denom*v_j > 0, so
    each weight is sampled inside its conditional interval."""
    n = g.n
    v = [rng.randrange(1, denom) for _ in range(n)]
    w = [[0] * n for _ in range(n)]
    for i, j in itertools.permutations(range(n), 2):
        # choosing w[j][i] decides the edge i -> j
        lo = -3 * denom + 1
        hi = -1
        if g.has_edge(i, j):
            bound = -(denom * v[j]) // v[i]  # floor(-denom*v_j/v_i)
            lo = max(lo, bound + 1)
        else:
            bound = -((denom * v[j]) // v[i])  # ceil(-denom*v_j/v_i)
            hi = min(hi, bound - 1)
        if lo > hi:
            return None
        w[j][i] = rng.randrange(lo, hi + 1)
        if v[i] * w[j][i] + denom * v[j] == 0:
            return None
    return w, v


def sample_with_graph(
    rng: random.Random, g: Digraph, denom: int = 1000, max_tries: int = 10_000
) -> Network:
    """A competitive network with graph exactly g, all signs nondegenerate."""
    for _ in range(max_tries):
        drawn = _sample_ints_for_graph(rng, g, denom)
        if drawn is None:
            continue
        w, v = drawn
        net = Network(
            tuple(tuple(Fraction(x, denom) for x in row) for row in w),
            tuple(Fraction(x, denom) for x in v),
        )
        if g.n == 3 and any(v == 0 for v in canonical_signs_n3(net).values()):
            continue
        return net
    raise SearchBudgetError(f"could not sample a network with graph {g}")


# -- integer fast path for three-neuron support families ---------------


def _edge_scaled(w, v, denom, i, j) -> int:
    """denom^2 times the edge drive for i -> j."""
    return v[i] * w[j][i] + denom * v[j]


def _s3_scaled(w, v, denom, i) -> int:
    """denom^3 times the full-support determinant singled out at i."""
    j, k = [m for m in range(3) if m != i]
    return (
        -w[i][j] * (v[k] * w[j][k] + denom * v[j])
        - denom * v[k] * w[i][k]
        - denom * denom * v[i]
        - w[k][j] * (v[j] * w[i][k] - v[i] * w[j][k])
    )


def _sep_scaled(w, v, i, j, k) -> int:
    """denom^2 times the separation of H_i and H_j along axis k."""
    return v[j] * w[i][k] - v[i] * w[j][k]


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def fp3_from_signs(edge: Mapping[tuple[int, int], int], s3: Sequence[int]):
    """Support family of a 3-neuron network from nine signs: the six
    edge drives and the three full-support determinants.

    A singleton {i} holds iff i is a sink; a pair {i,j} holds iff its
    two edge signs agree and match the third full-support sign; the full
    support holds iff all three full-support signs agree.
    """
    supports = []
    for i in range(3):
        if all(edge[(i, j)] < 0 for j in range(3) if j != i):
            supports.append((i,))
    for i, j in itertools.combinations(range(3), 2):
        k = 3 - i - j
        if edge[(i, j)] == edge[(j, i)] == s3[k]:
            supports.append((i, j))
    if s3[0] == s3[1] == s3[2]:
        supports.append((0, 1, 2))
    return tuple(sorted(supports, key=lambda s: (len(s), s)))


def fp_from_sign_map(signs: Mapping[tuple[int, ...], int]):
    """Support family read off a full canonical sign map (n = 3)."""
    edge = {
        (i, j): raw_sign_from_map(signs, "edge", (i, j))
        for i, j in itertools.permutations(range(3), 2)
    }
    s3 = [raw_sign_from_map(signs, "full", (i,)) for i in range(3)]
    return fp3_from_signs(edge, s3)


def family_of(supports: Iterable[tuple[int, ...]]) -> SupportFamily:
    return SupportFamily(supports)


# -- regime graphs -----------------------------------------------------


@dataclass(frozen=True)
class RegimeNode:
    """One chirotope cell: its canonical sign vector, support family,
    and (when realized) a witness network inside it."""

    signs: tuple[int, ...]
    fp: tuple[tuple[int, ...], ...]
    witness: Network | None
    realized: bool

    def sign_map(self) -> dict[tuple[int, ...], int]:
        return dict(zip(N3_SUBSETS, self.signs))


@dataclass(frozen=True)
class RegimeEdge:
    a: str
    b: str
    basis: tuple[int, ...]
    label: str


@dataclass(frozen=True)
class RegimeGraph:
    kind: str
    n: int
    graph: Digraph | None
    nodes: dict[str, RegimeNode]
    edges: tuple[RegimeEdge, ...]
    seed_id: str
    truncated: bool = False

    def fp_sets(self) -> set[tuple[tuple[int, ...], ...]]:
        return {node.fp for node in self.nodes.values()}


def node_id(signs: Sequence[int]) -> str:
    text = "".join("+0-"[1 - s] for s in signs)
    return hashlib.sha1(text.encode()).hexdigest()[:10]


def fp_label(fp: Iterable[tuple[int, ...]]) -> str:
    labels = [support_label(s) for s in sorted(fp, key=lambda s: (len(s), s))]
    return "{" + ",".join(labels) + "}"


# -- realizability search ----------------------------------------------

_PARAMS3: tuple[Param, ...] = tuple(
    ("W", i, j) for i, j in itertools.permutations(range(3), 2)
) + tuple(("b", i) for i in range(3))


def _param_box(param: Param) -> tuple[Fraction, Fraction]:
    if param[0] == "W":
        return (WEIGHT_FLOOR, Fraction(0))
    return (Fraction(0), INPUT_CEIL)


def _affine_coeffs(net: Network, param: Param):
    """Every basis determinant is affine in any single parameter; return
    {subset: (slope, intercept)} along this coordinate."""
    t0 = get_param(net, param)
    lo, hi = _param_box(param)
    t1 = (t0 + lo) / 2 if t0 != lo else (t0 + hi) / 2
    vals0 = canonical_values_n3(net)
    vals1 = canonical_values_n3(set_param(net, param, t1))
    out = {}
    for subset, y0 in vals0.items():
        slope = (vals1[subset] - y0) / (t1 - t0)
        out[subset] = (slope, y0 - slope * t0)
    return out


def _line_flip(net: Network, target_basis: tuple[int, ...], want: dict) -> Network | None:
    """Try to cross exactly the target wall by moving one parameter.

    Works out where every wall sits along each coordinate line; if the
    target wall is strictly nearest in some direction, land just beyond
    it (midway to the next wall or box edge) and verify the sign map."""
    for param in _PARAMS3:
        coeffs = _affine_coeffs(net, param)
        slope, intercept = coeffs[target_basis]
        if slope == 0:
            continue
        root = -intercept / slope
        t0 = get_param(net, param)
        lo, hi = _param_box(param)
        if not (lo < root < hi) or root == t0:
            continue
        direction = 1 if root > t0 else -1
        blockers = []
        for subset, (a, c) in coeffs.items():
            if subset == target_basis or a == 0:
                continue
            r = -c / a
            if (direction > 0 and t0 < r < hi) or (direction < 0 and lo < r < t0):
                blockers.append(r)
        if direction > 0:
            nearer = [r for r in blockers if r <= root]
            if nearer:
                continue
            edge = min(blockers + [hi])
            landing = (root + edge) / 2
        else:
            nearer = [r for r in blockers if r >= root]
            if nearer:
                continue
            edge = max(blockers + [lo])
            landing = (root + edge) / 2
        candidate = set_param(net, param, landing)
        if canonical_signs_n3(candidate) == want:
            return candidate
    return None


def _random_flip(
    net: Network, want: dict, g: Digraph | None, rng: random.Random, budget: int
) -> Network | None:
    """Randomized fallback: single-parameter jumps, keeping the best
    sign-map agreement seen and restarting from it."""
    best = net
    best_score = _match_score(canonical_signs_n3(net), want)
    for _ in range(budget):
        param = _PARAMS3[rng.randrange(len(_PARAMS3))]
        lo, hi = _param_box(param)
        span = hi - lo
        value = lo + span * Fraction(rng.randrange(1, 4000), 4000)
        candidate = set_param(best, param, value)
        try:
            signs = canonical_signs_n3(candidate)
        except ZeroDivisionError:  # pragma: no cover
            continue
        if any(v == 0 for v in signs.values()):
            continue
        if g is not None and graph_of(candidate) != g:
            continue
        if signs == want:
            return candidate
        score = _match_score(signs, want)
        if score > best_score:
            best, best_score = candidate, score
    return None


def _match_score(signs: dict, want: dict) -> int:
    return sum(1 for k, v in want.items() if signs[k] == v)


# -- mutation graph BFS ------------------------------------------------


def mutation_graph(
    g: Digraph | None = None,
    *,
    seed_network: Network | None = None,
    seed: int = 0,
    respect_graph: bool = True,
    max_nodes: int = 64,
    neighbor_budget: int = 2000,
    max_depth: int | None = None,
) -> RegimeGraph:
    """Breadth-first exploration of chirotope cells from a seed network.

    Neighbors are generated by flipping unpinned mutations; each
    unvisited neighbor is checked for realizability by exact line search
    plus randomized fallback.  Unrealized neighbors stay in the graph
    with `realized=False` and carry no edges.
    """
    if seed_network is None:
        if g is None:
            raise ValueError("need a graph or a seed network")
        rng = random.Random(seed * 7919 + 17)
        seed_network = sample_with_graph(rng, g)
    else:
        rng = random.Random(seed * 7919 + 17)
    if seed_network.n != 3:
        raise ValueError("regime exploration is implemented for n=3")
    if g is None:
        g = graph_of(seed_network)
    pins = pinned_bases(g) if respect_graph else competitive_pins()
    search_graph = g if respect_graph else None

    signs0 = canonical_signs_n3(seed_network)
    if any(v == 0 for v in signs0.values()):
        raise DegeneracyError("seed network has a degenerate chirotope")

    def make_node(signs: dict, witness: Network | None) -> RegimeNode:
        vec = tuple(signs[s] for s in N3_SUBSETS)
        return RegimeNode(vec, fp_from_sign_map(signs), witness, witness is not None)

    nodes: dict[str, RegimeNode] = {}
    edges: list[RegimeEdge] = []
    edge_seen: set[tuple[str, str, tuple[int, ...]]] = set()
    seed_node = make_node(signs0, seed_network)
    seed_key = node_id(seed_node.signs)
    nodes[seed_key] = seed_node
    queue: deque[tuple[str, int]] = deque([(seed_key, 0)])
    truncated = False

    while queue:
        key, depth = queue.popleft()
        node = nodes[key]
        if node.witness is None:
            continue
        if max_depth is not None and depth >= max_depth:
            truncated = True
            continue
        chi = Chirotope.from_signs(3, node.sign_map())
        for basis in mutations_of(chi):
            if basis in pins:
                continue
            want = node.sign_map()
            want[basis] = -want[basis]
            nkey = node_id(tuple(want[s] for s in N3_SUBSETS))
            if nkey in nodes:
                if nodes[nkey].realized:
                    ekey = (min(key, nkey), max(key, nkey), basis)
                    if ekey not in edge_seen:
                        edge_seen.add(ekey)
                        edges.append(RegimeEdge(key, nkey, basis, basis_name(basis, 3)))
                continue
            if len(nodes) >= max_nodes:
                truncated = True
                continue
            witness = _line_flip(node.witness, basis, want)
            if witness is None:
                witness = _random_flip(node.witness, want, search_graph, rng, neighbor_budget)
            nodes[nkey] = make_node(want, witness)
            if witness is not None:
                ekey = (min(key, nkey), max(key, nkey), basis)
                edge_seen.add(ekey)
                edges.append(RegimeEdge(key, nkey, basis, basis_name(basis, 3)))
                queue.append((nkey, depth + 1))
    return RegimeGraph("mutation", 3, g, nodes, tuple(edges), seed_key, truncated)


def describe_change(fp_a, fp_b) -> str:
    """Label a support change: a fold ({s, s+i} appearing/vanishing
    together) or a persistent exchange ({s} for {s+i})."""
    a, b = set(fp_a), set(fp_b)
    gained, lost = b - a, a - b
    def grp(ss):
        return "{" + ",".join(support_label(s) for s in sorted(ss, key=lambda s: (len(s), s))) + "}"
    if not gained and lost:
        return f"{grp(lost)}->{{}}"
    if not lost and gained:
        return f"{{}}->{grp(gained)}"
    return f"{grp(lost)}->{grp(gained)}"


def bifurcation_graph(mg: RegimeGraph) -> RegimeGraph:
    """Contract mutation edges that leave the support family unchanged."""
    parent = {key: key for key in mg.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in mg.edges:
        if mg.nodes[e.a].fp == mg.nodes[e.b].fp:
            parent[find(e.a)] = find(e.b)

    groups: dict[str, list[str]] = {}
    for key in mg.nodes:
        groups.setdefault(find(key), []).append(key)

    nodes: dict[str, RegimeNode] = {}
    rename: dict[str, str] = {}
    for root, members in groups.items():
        rep = mg.nodes[root]
        witness = next((mg.nodes[k].witness for k in members if mg.nodes[k].witness), None)
        node = RegimeNode(rep.signs, rep.fp, witness, witness is not None)
        nodes[root] = node
        for k in members:
            rename[k] = root

    edges = []
    seen = set()
    for e in mg.edges:
        a, b = rename[e.a], rename[e.b]
        if a == b:
            continue
        key = (min(a, b), max(a, b), e.basis)
        if key in seen:
            continue
        seen.add(key)
        label = describe_change(nodes[a].fp, nodes[b].fp)
        edges.append(RegimeEdge(a, b, e.basis, label))
    return RegimeGraph(
        "bifurcation", mg.n, mg.graph, nodes, tuple(edges), rename[mg.seed_id], mg.truncated
    )


# -- DOT output --------------------------------------------------------


def dot_graph(rg: RegimeGraph, name: str = "regimes") -> str:
    lines = [f"digraph {name} {{", "  graph [overlap=false];"]
    for key in sorted(rg.nodes):
        node = rg.nodes[key]
        label = fp_label(node.fp)
        if rg.kind == "mutation":
            label = f"{key[:6]}\\n{label}"
        if node.realized:
            attrs = f'label="{label}"'
        else:
            attrs = f'label="{label} (unrealized)" style=dashed color=gray'
        lines.append(f'  "{key}" [{attrs}];')
    for e in sorted(rg.edges, key=lambda e: (e.a, e.b, e.basis)):
        lines.append(f'  "{e.a}" -> "{e.b}" [dir=none label="{e.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- atlas -------------------------------------------------------------


@dataclass(frozen=True)
class ClassReport:
    """Sampled regime structure of one digraph isomorphism class."""

    graph: Digraph
    samples: int
    fp_counts: dict[tuple[tuple[int, ...], ...], int]
    orbit_count: int
    robust: bool
    empty_fp: int
    separation_violations: int
    resampled: int
    bifurcations: RegimeGraph | None = None
    mutations: RegimeGraph | None = None

    def fp_families(self) -> tuple[SupportFamily, ...]:
        return tuple(
            SupportFamily(fp)
            for fp in sorted(self.fp_counts, key=lambda f: -self.fp_counts[f])
        )

    def format(self) -> str:
        lines = [
            f"graph: {self.graph}",
            f"samples: {self.samples} (resampled {self.resampled} degenerate draws)",
            f"distinct support families: {len(self.fp_counts)}"
            f" ({self.orbit_count} up to graph symmetry)",
            f"robust: {'yes' if self.robust else 'no'}",
            f"empty families seen: {self.empty_fp}",
            f"separation sign violations: {self.separation_violations}",
        ]
        for fp, count in sorted(self.fp_counts.items(), key=lambda kv: -kv[1]):
            lines.append(f"  {fp_label(fp)}: {count}")
        return "\n".join(lines)


@dataclass(frozen=True)
class AtlasReport:
    classes: tuple[ClassReport, ...]
    samples: int
    seed: int

    def robust_classes(self) -> tuple[ClassReport, ...]:
        return tuple(c for c in self.classes if c.robust)

    def format(self) -> str:
        blocks = [f"three-neuron atlas: {self.samples} samples per class, seed {self.seed}"]
        for idx, report in enumerate(self.classes, 1):
            blocks.append(f"[class {idx:02d}]\n{report.format()}")
        robust = [i + 1 for i, c in enumerate(self.classes) if c.robust]
        blocks.append(f"robust classes: {robust} ({len(robust)} of {len(self.classes)})")
        return "\n\n".join(blocks) + "\n"


def _orbit_count(fps: Iterable[tuple[tuple[int, ...], ...]], g: Digraph) -> int:
    auts = g.automorphisms()
    canon = set()
    for fp in fps:
        images = []
        for perm in auts:
            image = tuple(
                sorted(
                    (tuple(sorted(perm[i] for i in s)) for s in fp),
                    key=lambda s: (len(s), s),
                )
            )
            images.append(image)
        canon.add(min(images))
    return len(canon)


def sample_class_regimes(
    g: Digraph,
    samples: int,
    rng: random.Random,
    denom: int = 1000,
) -> ClassReport:
    """Dense within-class sampling of support families (exact integer
    arithmetic; every draw has graph exactly g)."""
    pairs = list(itertools.permutations(range(3), 2))
    seps = [
        (i, j, k)
        for i, j in pairs
        for k in range(3)
        if k not in (i, j) and g.separates(k, i, j)
    ]
    counts: dict[tuple[tuple[int, ...], ...], int] = {}
    empty = 0
    violations = 0
    resampled = 0
    done = 0
    while done < samples:
        drawn = _sample_ints_for_graph(rng, g, denom)
        if drawn is None:
            resampled += 1
            continue
        w, v = drawn
        s3 = [_s3_scaled(w, v, denom, i) for i in range(3)]
        if any(x == 0 for x in s3):
            resampled += 1
            continue
        for i, j, k in seps:
            if _sep_scaled(w, v, i, j, k) <= 0:
                violations += 1
        edge = {(i, j): _sgn(_edge_scaled(w, v, denom, i, j)) for i, j in pairs}
        fp = fp3_from_signs(edge, [_sgn(x) for x in s3])
        if not fp:
            empty += 1
        counts[fp] = counts.get(fp, 0) + 1
        done += 1
    return ClassReport(
        graph=g,
        samples=samples,
        fp_counts=counts,
        orbit_count=_orbit_count(counts.keys(), g),
        robust=len(counts) == 1,
        empty_fp=empty,
        separation_violations=violations,
        resampled=resampled,
    )


def _atlas_one(args) -> ClassReport:
    import dataclasses

    g, samples, seed, idx, explore = args
    rng = random.Random(seed * 100_003 + idx)
    report = sample_class_regimes(g, samples, rng)
    if explore:
        mg = mutation_graph(g, seed=seed * 31 + idx, max_nodes=48, neighbor_budget=800)
        bg = bifurcation_graph(mg)
        report = dataclasses.replace(report, bifurcations=bg, mutations=mg)
    return report


def atlas(
    samples: int = 100_000,
    seed: int = 0,
    *,
    explore: bool = True,
    jobs: int = 1,
) -> AtlasReport:
    """Regime report for every three-node digraph class."""
    classes = digraph_classes(3)
    work = [(g, samples, seed, idx, explore) for idx, g in enumerate(classes)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_atlas_one, work))
    else:
        reports = [_atlas_one(item) for item in work]
    return AtlasReport(tuple(reports), samples, seed)
