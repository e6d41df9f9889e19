"""Homogenized hyperplane arrangement of a network and its chirotope.

A network with n neurons induces 2n affine hyperplanes: the coordinate
planes E_i = {x_i = 0} and the nullcline planes H_i = {h_i(x) = 0} with
h_i(x) = -x_i + sum_j W_ij x_j + b_i.  Homogenizing with a plane at
infinity gives 2n+1 normal vectors in R^(n+1); the chirotope records the
orientation (sign of the determinant) of every (n+1)-tuple of them.

Ground elements are indexed 0..2n in the fixed order
e_1, h_1, e_2, h_2, ..., e_n, h_n, e_inf.  Sign maps are stored on
canonically sorted index tuples; the alternating extension applies the
sorting parity on access.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DegeneracyError, VertexAtInfinityError
from .exact import det, permutation_parity, reduce_unit_rows, sign, sign_str, sort_parity
from .network import Network, edge_drive, separation

INFINITY = float("inf")


def e_index(i: int) -> int:
    return 2 * i


def h_index(i: int) -> int:
    return 2 * i + 1


def inf_index(n: int) -> int:
    return 2 * n


def ground_size(n: int) -> int:
    return 2 * n + 1


def element_name(idx: int, n: int) -> str:
    if idx == inf_index(n):
        return "e_inf"
    neuron = idx // 2 + 1
    return f"e{neuron}" if idx % 2 == 0 else f"h{neuron}"


def basis_name(subset: Sequence[int], n: int) -> str:
    return " ".join(element_name(t, n) for t in subset)


@dataclass(frozen=True)
class GroundSet:
    """The (2n+1) x (n+1) matrix of arrangement normal vectors."""

    n: int
    rows: tuple[tuple[Fraction, ...], ...]

    def names(self) -> tuple[str, ...]:
        return tuple(element_name(t, self.n) for t in range(ground_size(self.n)))


def arrangement_matrix(net: Network) -> GroundSet:
    """Rows e_1, h_1, ..., e_n, h_n, e_inf of the homogenized arrangement."""
    n = net.n
    rows = []
    for i in range(n):
        e_row = [Fraction(0)] * (n + 1)
        e_row[i] = Fraction(1)
        rows.append(tuple(e_row))
        h_row = [net.W[i][j] for j in range(n)] + [net.b[i]]
        h_row[i] = Fraction(-1)
        rows.append(tuple(h_row))
    inf_row = [Fraction(0)] * n + [Fraction(1)]
    rows.append(tuple(inf_row))
    return GroundSet(n, tuple(rows))


def a_sigma(n: int, sigma: Iterable[int]) -> tuple[int, ...]:
    """Ground indices of the defining tuple of the vertex x^sigma:
    h_i in position i for i in sigma, e_i otherwise (ascending order)."""
    members = set(sigma)
    if not members <= set(range(n)):
        raise ValueError(f"support {sorted(members)} out of range for n={n}")
    return tuple(h_index(i) if i in members else e_index(i) for i in range(n))


def _tuple_det(ground: GroundSet, idx: tuple[int, ...]) -> Fraction:
    """Determinant of the chosen ground rows, stripping unit rows first."""
    n = ground.n
    rows = [ground.rows[t] for t in idx]
    units = {}
    for pos, t in enumerate(idx):
        if t == inf_index(n):
            units[pos] = n
        elif t % 2 == 0:
            units[pos] = t // 2
    parity, dense = reduce_unit_rows(rows, units)
    return parity * det(dense)


class Chirotope:
    """Alternating sign map on (n+1)-tuples of ground elements.

    Stores one sign per sorted basis subset; `chi` applies the sorting
    parity for arbitrary tuple orders.  Instances built from a network
    keep the ground rows so missing bases can be filled on demand;
    instances built from a plain sign map (e.g. a flipped neighbor)
    carry no geometry.
    """

    EAGER_LIMIT = 5

    def __init__(self, n: int, signs: dict[tuple[int, ...], int], ground: GroundSet | None = None):
        self.n = n
        self._signs = signs
        self.ground = ground

    @classmethod
    def from_network(cls, net: Network) -> "Chirotope":
        ground = arrangement_matrix(net)
        chi = cls(net.n, {}, ground)
        if net.n <= cls.EAGER_LIMIT:
            for subset in chi.bases():
                chi.basis_sign(subset)
        return chi

    @classmethod
    def from_signs(cls, n: int, signs: Mapping[tuple[int, ...], int]) -> "Chirotope":
        return cls(n, dict(signs))

    def bases(self) -> Iterable[tuple[int, ...]]:
        return itertools.combinations(range(ground_size(self.n)), self.n + 1)

    def basis_sign(self, subset: tuple[int, ...]) -> int:
        try:
            return self._signs[subset]
        except KeyError:
            if self.ground is None:
                raise
        value = sign(_tuple_det(self.ground, subset))
        self._signs[subset] = value
        return value

    def chi(self, ordered: Sequence[int]) -> int:
        if len(set(ordered)) != len(ordered):
            return 0
        subset = tuple(sorted(ordered))
        return sort_parity(tuple(ordered)) * self.basis_sign(subset)

    def is_simplicial(self) -> bool:
        return all(self.basis_sign(s) != 0 for s in self.bases())

    def flipped(self, basis: tuple[int, ...]) -> "Chirotope":
        basis = tuple(sorted(basis))
        signs = dict(self._signs)
        if self.ground is not None:
            for subset in self.bases():
                signs.setdefault(subset, self.basis_sign(subset))
        signs[basis] = -signs[basis]
        return Chirotope.from_signs(self.n, signs)

    def sign_vector(self) -> tuple[int, ...]:
        return tuple(self.basis_sign(s) for s in self.bases())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Chirotope)
            and self.n == other.n
            and self.sign_vector() == other.sign_vector()
        )

    def __hash__(self) -> int:
        return hash((self.n, self.sign_vector()))


def chirotope_of(net: Network) -> Chirotope:
    return Chirotope.from_network(net)


def is_simplicial(chi: Chirotope) -> bool:
    return chi.is_simplicial()


@dataclass(frozen=True)
class SupportDeterminant:
    """One admissibility determinant: the orientation of x^sigma against
    the hyperplane indexed by `index` (a neuron, or INFINITY)."""

    sigma: tuple[int, ...]
    index: int | float
    value: Fraction


def support_det_value(net: Network, sigma: Iterable[int], i) -> Fraction:
    members = frozenset(sigma)
    n = net.n
    ground = arrangement_matrix(net)
    base = a_sigma(n, members)
    if i == INFINITY:
        extra = inf_index(n)
    elif i in members:
        extra = e_index(i)
    else:
        if not 0 <= i < n:
            raise ValueError(f"index {i} out of range")
        extra = h_index(i)
    return _tuple_det(ground, base + (extra,))


def support_determinant(net: Network, sigma: Iterable[int], i) -> SupportDeterminant:
    members = tuple(sorted(frozenset(sigma)))
    return SupportDeterminant(members, i, support_det_value(net, members, i))


@dataclass(frozen=True)
class Cocircuit:
    """Position of the vertex x^sigma against every arrangement plane,
    as a sign vector ordered (E_1, H_1, ..., E_n, H_n)."""

    n: int
    support: tuple[int, ...]
    signs: tuple[int, ...]

    def sign_string(self) -> str:
        return "(" + ",".join(sign_str(s) for s in self.signs) + ")"


def cocircuit(chi: Chirotope, sigma: Iterable[int]) -> Cocircuit:
    members = tuple(sorted(frozenset(sigma)))
    base = a_sigma(chi.n, members)
    chi_inf = chi.chi(base + (inf_index(chi.n),))
    if chi_inf == 0:
        if all(chi.chi(base + (y,)) == 0 for y in range(ground_size(chi.n))):
            raise DegeneracyError(
                f"support {members} has no unique vertex: defining rows are dependent"
            )
        raise VertexAtInfinityError(
            f"vertex for support {members} lies at infinity"
        )
    signs = []
    for i in range(chi.n):
        signs.append(chi.chi(base + (e_index(i),)) * chi_inf)
        signs.append(chi.chi(base + (h_index(i),)) * chi_inf)
    return Cocircuit(chi.n, members, tuple(signs))


@dataclass(frozen=True)
class AxisReport:
    """Signed geometry of the arrangement restricted to coordinate axes.

    For each neuron i, x^i is where H_i crosses the x_i axis and p_ij is
    where H_i crosses the x_j axis (i != j).  The report records, with
    exact signs, which side of each plane these points fall on.
    """

    n: int
    solo_vs_coordinate: tuple[int, ...]
    solo_vs_plane: dict[tuple[int, int], int]
    crossing_vs_plane: dict[tuple[int, int, int], int]

    def format(self) -> str:
        lines = []
        for j in range(self.n):
            lines.append(f"axis x{j + 1}:")
            lines.append(
                f"  x^{j + 1} vs E{j + 1}: {sign_str(self.solo_vs_coordinate[j])}"
            )
            for k in range(self.n):
                if k != j:
                    lines.append(
                        f"  x^{j + 1} vs H{k + 1}: "
                        f"{sign_str(self.solo_vs_plane[(j, k)])}"
                    )
            for i in range(self.n):
                if i == j:
                    continue
                for k in range(self.n):
                    if k in (i, j):
                        continue
                    s = self.crossing_vs_plane[(i, j, k)]
                    lines.append(f"  H{i + 1}^x{j + 1} vs H{k + 1}: {sign_str(s)}")
        return "\n".join(lines)


def axis_signs(net: Network) -> AxisReport:
    n = net.n
    solo_coord = tuple(sign(net.b[i]) for i in range(n))
    solo_plane = {
        (i, j): sign(edge_drive(net, i, j))
        for i, j in itertools.permutations(range(n), 2)
    }
    crossing = {}
    for i, j in itertools.permutations(range(n), 2):
        for k in range(n):
            if k in (i, j):
                continue
            # H_i meets the x_j axis on the positive side of H_k exactly
            # when b_i*W[k][j] - b_k*W[i][j] > 0.
            crossing[(i, j, k)] = sign(separation(net, k, i, j))
    return AxisReport(n, solo_coord, solo_plane, crossing)


# Closed-form values of all 35 basis determinants for n = 3.  Each entry
# pairs the defining tuple order (whose raw formula is simple) with the
# parity converting it to canonical sorted order, and carries a family
# tag so downstream code (sign pins, fast support extraction) can read
# structure back out of a bare sign map.  A test pins every formula to
# the elimination path.


@dataclass(frozen=True)
class BasisFamily:
    subset: tuple[int, ...]
    defining: tuple[int, ...]
    parity: int
    tag: str
    who: tuple[int, ...]
    raw: object = field(compare=False)

    def value(self, net: Network) -> Fraction:
        return self.parity * self.raw(net)


def _n3_families() -> dict[tuple[int, ...], BasisFamily]:
    n = 3
    INF = inf_index(n)
    table: dict[tuple[int, ...], BasisFamily] = {}

    def add(defining: tuple[int, ...], tag: str, who: tuple[int, ...], raw):
        subset = tuple(sorted(defining))
        table[subset] = BasisFamily(subset, defining, sort_parity(defining), tag, who, raw)

    add(tuple(e_index(i) for i in range(3)) + (INF,), "origin_inf", (), lambda net: Fraction(1))

    for i in range(3):
        base = a_sigma(n, {i})
        add(base + (INF,), "solo_inf", (i,), lambda net: Fraction(-1))
        add(base + (e_index(i),), "solo_self", (i,), lambda net, i=i: -net.b[i])

    for i, k in itertools.permutations(range(3), 2):
        j = 3 - i - k
        p = permutation_parity((i, j, k))
        add(
            (e_index(i), h_index(i), e_index(k), INF),
            "weight",
            (i, j),
            lambda net, i=i, j=j, p=p: p * net.W[i][j],
        )

    for i, j in itertools.combinations(range(3), 2):
        k = 3 - i - j
        p = permutation_parity((i, j, k))
        add(
            (e_index(i), e_index(j), h_index(i), h_index(j)),
            "separation",
            (i, j, k),
            lambda net, i=i, j=j, k=k, p=p: p * separation(net, i, j, k),
        )
        add(
            a_sigma(n, {i, j}) + (INF,),
            "pair_inf",
            (i, j),
            lambda net, i=i, j=j: 1 - net.W[i][j] * net.W[j][i],
        )

    for i, j in itertools.permutations(range(3), 2):
        add(
            a_sigma(n, {i, j}) + (e_index(j),),
            "edge",
            (i, j),
            lambda net, i=i, j=j: edge_drive(net, i, j),
        )
        k = 3 - i - j
        p = permutation_parity((i, j, k))
        add(
            (h_index(i), h_index(j), e_index(j), INF),
            "pair_mixed_inf",
            (i, j, k),
            lambda net, i=i, j=j, k=k, p=p: p * (net.W[j][k] + net.W[i][k] * net.W[j][i]),
        )

    def _full_inf(net: Network) -> Fraction:
        W = net.W
        return (
            W[0][1] * W[1][0]
            + W[0][2] * W[2][0]
            + W[1][2] * W[2][1]
            + W[0][1] * W[1][2] * W[2][0]
            + W[0][2] * W[1][0] * W[2][1]
            - 1
        )

    add((h_index(0), h_index(1), h_index(2), INF), "full_inf", (), _full_inf)

    def _full(net: Network, i: int) -> Fraction:
        j, k = [m for m in range(3) if m != i]
        W, b = net.W, net.b
        return (
            -W[i][j] * (b[k] * W[j][k] + b[j])
            - b[k] * W[i][k]
            - b[i]
            - W[k][j] * (b[j] * W[i][k] - b[i] * W[j][k])
        )

    for i in range(3):
        add(
            (h_index(0), h_index(1), h_index(2), e_index(i)),
            "full",
            (i,),
            lambda net, i=i: _full(net, i),
        )

    return table


N3_FAMILIES = _n3_families()
assert len(N3_FAMILIES) == 35, f"expected 35 basis families, got {len(N3_FAMILIES)}"
N3_SUBSETS = tuple(itertools.combinations(range(7), 4))


def canonical_values_n3(net: Network) -> dict[tuple[int, ...], Fraction]:
    """All 35 canonical basis determinants of a 3-neuron network, by
    closed formula rather than elimination."""
    if net.n != 3:
        raise ValueError("closed-form table is specific to n=3")
    return {subset: fam.value(net) for subset, fam in N3_FAMILIES.items()}


def canonical_signs_n3(net: Network) -> dict[tuple[int, ...], int]:
    return {s: sign(v) for s, v in canonical_values_n3(net).items()}


def chirotope_n3_fast(net: Network) -> Chirotope:
    """Chirotope of a 3-neuron network via the closed-form table."""
    return Chirotope.from_signs(3, canonical_signs_n3(net))


N3_BY_TAG = {(fam.tag, fam.who): fam for fam in N3_FAMILIES.values()}


def raw_sign_from_map(signs: Mapping[tuple[int, ...], int], tag: str, who: tuple[int, ...]) -> int:
    """Recover a raw family sign (defining-order convention) from a
    canonical sign map, e.g. an edge drive or a full-support determinant."""
    fam = N3_BY_TAG[(tag, who)]
    return fam.parity * signs[fam.subset]
