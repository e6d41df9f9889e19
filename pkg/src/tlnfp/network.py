"""Threshold-linear network data model.

A network is the pair (W, b): an n-by-n rational weight matrix with zero
diagonal and a length-n rational input vector.  The competitive class
has W_ij < 0 off the diagonal and b_i > 0.  Neuron indices are 0-based
everywhere in the library; file formats and reports print them 1-based.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence

from .errors import DegeneracyError
from .exact import rational, sign


@dataclass(frozen=True)
class Network:
    """Immutable network parameters (exact rationals)."""

    W: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.W)
        if any(len(row) != n for row in self.W):
            raise ValueError("W must be square")
        if len(self.b) != n:
            raise ValueError("b length must match W")
        if n < 1:
            raise ValueError("need at least one neuron")
        for i in range(n):
            if self.W[i][i] != 0:
                raise ValueError(f"W[{i}][{i}] must be zero")

    @property
    def n(self) -> int:
        return len(self.b)

    def with_weight(self, i: int, j: int, value) -> "Network":
        if i == j:
            raise ValueError("diagonal weights are fixed at zero")
        W = tuple(
            tuple(rational(value) if (r, c) == (i, j) else x for c, x in enumerate(row))
            for r, row in enumerate(self.W)
        )
        return Network(W, self.b)

    def with_input(self, i: int, value) -> "Network":
        b = tuple(rational(value) if k == i else x for k, x in enumerate(self.b))
        return Network(self.W, b)


def network(W: Iterable[Iterable], b: Iterable) -> Network:
    """Build a Network, parsing entries exactly (strings, ints, Fractions)."""
    return Network(
        tuple(tuple(rational(x) for x in row) for row in W),
        tuple(rational(x) for x in b),
    )


def validate(net: Network, klass: str = "competitive") -> list[str]:
    """List the class constraints a network violates (empty list if none)."""
    if klass not in ("competitive", "general"):
        raise ValueError(f"unknown network class {klass!r}")
    violations = []
    if klass == "competitive":
        for i, j in itertools.permutations(range(net.n), 2):
            if net.W[i][j] >= 0:
                violations.append(f"W[{i + 1}][{j + 1}] = {net.W[i][j]} must be < 0")
        for i in range(net.n):
            if net.b[i] <= 0:
                violations.append(f"b[{i + 1}] = {net.b[i]} must be > 0")
    return violations


def require_competitive(net: Network) -> None:
    violations = validate(net, "competitive")
    if violations:
        raise ValueError("not a competitive network: " + "; ".join(violations))


def edge_drive(net: Network, i: int, j: int) -> Fraction:
    """Input drive to neuron j at neuron i's axis fixed point.

    Equals b_i*W[j][i] + b_j; its sign decides the graph edge i -> j.
    """
    if i == j:
        raise ValueError("edge drive needs two distinct neurons")
    return net.b[i] * net.W[j][i] + net.b[j]


def separation(net: Network, i: int, j: int, k: int) -> Fraction:
    """Separation of hyperplanes H_i and H_j along the x_k axis.

    Equals b_j*W[i][k] - b_i*W[j][k]; antisymmetric in (i, j).
    """
    if len({i, j, k}) != 3:
        raise ValueError("separation needs three distinct neurons")
    return net.b[j] * net.W[i][k] - net.b[i] * net.W[j][k]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on n nodes, no self-loops."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i, j in self.edges:
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"bad edge ({i}, {j})")

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def out_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(j for a, j in self.edges if a == i)

    def sinks(self) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if not self.out_neighbors(i))

    def separates(self, k: int, i: int, j: int) -> bool:
        """Node k separates i from j when k -> i but not k -> j."""
        return self.has_edge(k, i) and not self.has_edge(k, j)

    def is_separating(self, k: int) -> bool:
        return any(
            self.separates(k, i, j)
            for i, j in itertools.permutations(range(self.n), 2)
            if k not in (i, j)
        )

    def nonseparating_nodes(self) -> frozenset[int]:
        return frozenset(k for k in range(self.n) if not self.is_separating(k))

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        return Digraph(self.n, frozenset((perm[i], perm[j]) for i, j in self.edges))

    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def canonical_key(self) -> tuple[tuple[int, int], ...]:
        """Least edge list over all relabelings: an isomorphism invariant."""
        return min(
            self.relabel(p).sorted_edges()
            for p in itertools.permutations(range(self.n))
        )

    def automorphisms(self) -> list[tuple[int, ...]]:
        own = self.sorted_edges()
        return [
            p
            for p in itertools.permutations(range(self.n))
            if self.relabel(p).sorted_edges() == own
        ]

    def format_edges(self) -> str:
        return ",".join(f"{i + 1}>{j + 1}" for i, j in self.sorted_edges())

    def __str__(self) -> str:
        return self.format_edges() or "(no edges)"


def parse_digraph(text: str, n: int = 3) -> Digraph:
    """Parse an edge list like "1>2,2>1,3>2" (1-based nodes)."""
    edges = set()
    text = text.strip()
    if text:
        for part in text.split(","):
            try:
                a, b = part.strip().split(">")
                edges.add((int(a) - 1, int(b) - 1))
            except ValueError as exc:
                raise ValueError(f"bad edge {part!r}, expected like '1>2'") from exc
    return Digraph(n, frozenset(edges))


def graph_of(net: Network) -> Digraph:
    """The directed graph of a competitive network: i -> j iff the drive
    b_i*W[j][i] + b_j is positive.  A zero drive means the network sits
    on a classification wall and is rejected."""
    require_competitive(net)
    edges = set()
    for i, j in itertools.permutations(range(net.n), 2):
        s = sign(edge_drive(net, i, j))
        if s == 0:
            raise DegeneracyError(
                f"edge drive for {i + 1}->{j + 1} is exactly zero"
            )
        if s > 0:
            edges.add((i, j))
    return Digraph(net.n, frozenset(edges))


# Parameter coordinates: ("W", i, j) for an off-diagonal weight, ("b", i)
# for an input entry.  CLI syntax is 1-based, e.g. "W31" or "b2".

Param = tuple


def parse_param(text: str, n: int) -> Param:
    text = text.strip()
    try:
        if text.lower().startswith("w") and len(text) == 3:
            i, j = int(text[1]) - 1, int(text[2]) - 1
            if 0 <= i < n and 0 <= j < n and i != j:
                return ("W", i, j)
        if text.lower().startswith("b") and len(text) == 2:
            i = int(text[1]) - 1
            if 0 <= i < n:
                return ("b", i)
    except ValueError:
        pass
    raise ValueError(f"bad parameter {text!r}, expected like 'W31' or 'b2'")


def format_param(param: Param) -> str:
    if param[0] == "W":
        return f"W{param[1] + 1}{param[2] + 1}"
    return f"b{param[1] + 1}"


def get_param(net: Network, param: Param) -> Fraction:
    if param[0] == "W":
        return net.W[param[1]][param[2]]
    return net.b[param[1]]


def set_param(net: Network, param: Param, value) -> Network:
    if param[0] == "W":
        return net.with_weight(param[1], param[2], value)
    return net.with_input(param[1], value)


@dataclass(frozen=True)
class ParamPath:
    """A straight-line sweep of one parameter over a rational interval."""

    base: Network
    param: Param
    start: Fraction
    stop: Fraction
    steps: int = 0

    def __post_init__(self):
        if self.start == self.stop:
            raise ValueError("sweep endpoints must differ")
        lo, hi = sorted((self.start, self.stop))
        if self.param[0] == "W" and hi >= 0:
            raise ValueError("weights must stay negative along the path")
        if self.param[0] == "b" and lo <= 0:
            raise ValueError("inputs must stay positive along the path")

    def at(self, value) -> Network:
        return set_param(self.base, self.param, value)


# JSON file format: {"n": 3, "W": [["0", "-0.97", ...], ...], "b": [...]}
# with every number carried as a decimal (or p/q) string, parsed exactly.


def _render_exact(x: Fraction) -> str:
    num, den = x.numerator, x.denominator
    if den == 1:
        return str(num)
    d = den
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        places = max(twos, fives)
        scaled = abs(num) * 10**places // den
        text = f"{scaled:0{places + 1}d}"
        out = f"{text[:-places]}.{text[-places:]}"
        return "-" + out if num < 0 else out
    return f"{num}/{den}"


def dumps_network(net: Network) -> str:
    payload = {
        "n": net.n,
        "W": [[_render_exact(x) for x in row] for row in net.W],
        "b": [_render_exact(x) for x in net.b],
    }
    return json.dumps(payload, indent=2) + "\n"


def dump_network(net: Network, fh: IO[str]) -> None:
    fh.write(dumps_network(net))


def loads_network(text: str) -> Network:
    payload = json.loads(text, parse_float=Fraction, parse_int=int)
    try:
        W = payload["W"]
        b = payload["b"]
    except (KeyError, TypeError) as exc:
        raise ValueError("network file needs 'W' and 'b' entries") from exc
    net = network(W, b)
    if "n" in payload and payload["n"] != net.n:
        raise ValueError(f"declared n={payload['n']} but W is {net.n}x{net.n}")
    return net


def load_network(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_network(fh.read())
