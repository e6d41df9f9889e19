"""Fixed-point supports of a competitive network, by two routes.

`fp_chirotope` reads supports off the arrangement determinants: sigma is
admissible exactly when the determinants indexed inside sigma all share
one sign and every determinant indexed outside opposes it.  `fp_oracle`
ignores the arrangement entirely and solves each restricted linear
system, checking region membership directly.  The two must agree on
every nondegenerate network; tests enforce this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DegeneracyError
from .exact import Matrix, det, sign
from .chirotope import INFINITY, a_sigma, arrangement_matrix, e_index, h_index, inf_index, _tuple_det
from .network import Network, graph_of, require_competitive


def support_label(support: Iterable[int]) -> str:
    members = sorted(support)
    if members and members[-1] > 8:
        return ".".join(str(i + 1) for i in members)
    return "".join(str(i + 1) for i in members)


class SupportFamily:
    """A set of supports, canonically ordered by size then lexicographic."""

    __slots__ = ("supports",)

    def __init__(self, supports: Iterable[Iterable[int]]):
        canon = sorted({tuple(sorted(s)) for s in supports}, key=lambda s: (len(s), s))
        object.__setattr__(self, "supports", tuple(canon))

    def __setattr__(self, name, value):
        raise AttributeError("SupportFamily is immutable")

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.supports)

    def __len__(self) -> int:
        return len(self.supports)

    def __contains__(self, item) -> bool:
        return tuple(sorted(item)) in self.supports

    def __eq__(self, other) -> bool:
        if isinstance(other, SupportFamily):
            return self.supports == other.supports
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.supports)

    def labels(self) -> tuple[str, ...]:
        return tuple(support_label(s) for s in self.supports)

    def format(self) -> str:
        return "{" + ",".join(self.labels()) + "}"

    def __repr__(self) -> str:
        return f"SupportFamily({self.format()})"

    def relabel(self, perm) -> "SupportFamily":
        return SupportFamily(tuple(perm[i] for i in s) for s in self.supports)


def support_values(net: Network, sigma: Iterable[int]) -> dict:
    """All admissibility determinants of one support, plus the one at
    infinity, computed off a single arrangement build."""
    ground = arrangement_matrix(net)
    members = frozenset(sigma)
    base = a_sigma(net.n, members)
    values = {}
    for i in range(net.n):
        extra = e_index(i) if i in members else h_index(i)
        values[i] = _tuple_det(ground, base + (extra,))
    values[INFINITY] = _tuple_det(ground, base + (inf_index(net.n),))
    return values


def _member_test(values: dict, members: frozenset[int], n: int, label: str) -> bool:
    for i in range(n):
        if values[i] == 0:
            raise DegeneracyError(
                f"degenerate support determinant for subset {{{label}}} at neuron {i + 1}"
            )
    if values[INFINITY] == 0:
        raise DegeneracyError(
            f"degenerate vertex for subset {{{label}}}: restricted system is singular"
        )
    inside = {sign(values[i]) for i in members}
    if len(inside) != 1:
        return False
    shared = inside.pop()
    return all(sign(values[j]) != shared for j in range(n) if j not in members)


def fp_chirotope(net: Network) -> SupportFamily:
    """Admissible supports via the sign criterion on arrangement
    determinants (competitive networks only)."""
    require_competitive(net)
    found = []
    for size in range(1, net.n + 1):
        for members in itertools.combinations(range(net.n), size):
            values = support_values(net, members)
            if _member_test(values, frozenset(members), net.n, support_label(members)):
                found.append(members)
    return SupportFamily(found)


def _restricted_system(net: Network, members: tuple[int, ...]) -> tuple[Matrix, list[Fraction]]:
    rows = [
        [(1 if r == c else 0) - net.W[r][c] for c in members]
        for r in members
    ]
    return Matrix(rows), [net.b[i] for i in members]


def solve_restricted(net: Network, sigma: Iterable[int]) -> tuple[Fraction, ...]:
    """Exact coordinates of the region fixed point x^sigma (zeros off the
    support), by Cramer's rule on the restricted system."""
    members = tuple(sorted(frozenset(sigma)))
    x = [Fraction(0)] * net.n
    if not members:
        return tuple(x)
    system, rhs = _restricted_system(net, members)
    denom = det(system)
    if denom == 0:
        raise DegeneracyError(
            f"restricted system for subset {{{support_label(members)}}} is singular"
        )
    for pos, i in enumerate(members):
        x[i] = det(system.replace_column(pos, rhs)) / denom
    return tuple(x)


def _off_support_drive(net: Network, x: tuple[Fraction, ...], j: int) -> Fraction:
    return sum((net.W[j][k] * x[k] for k in range(net.n) if k != j), net.b[j])


def fp_oracle(net: Network) -> SupportFamily:
    """Admissible supports by direct region solves, independent of the
    arrangement formalism in everything but the shared determinant code."""
    require_competitive(net)
    found = []
    for size in range(1, net.n + 1):
        for members in itertools.combinations(range(net.n), size):
            x = solve_restricted(net, members)
            ok = True
            for i in members:
                if x[i] == 0:
                    raise DegeneracyError(
                        f"fixed point for subset {{{support_label(members)}}} has a zero coordinate"
                    )
                if x[i] < 0:
                    ok = False
            for j in range(net.n):
                if j in members:
                    continue
                drive = _off_support_drive(net, x, j)
                if drive == 0:
                    raise DegeneracyError(
                        f"fixed point for subset {{{support_label(members)}}} sits on boundary L{j + 1}"
                    )
                if drive > 0:
                    ok = False
            if ok:
                found.append(members)
    return SupportFamily(found)


@dataclass(frozen=True)
class FixedPoint:
    """One region fixed point with exact coordinates and its status.

    Virtual points list which region conditions fail (1-based labels)."""

    support: tuple[int, ...]
    coordinates: tuple[Fraction, ...]
    status: str
    failures: tuple[str, ...] = ()


def fixed_point_detail(net: Network, sigma: Iterable[int]) -> FixedPoint:
    members = tuple(sorted(frozenset(sigma)))
    x = solve_restricted(net, members)
    failures = []
    for i in members:
        if x[i] <= 0:
            failures.append(f"x{i + 1} = {x[i]} is not positive")
    for j in range(net.n):
        if j in members:
            continue
        drive = _off_support_drive(net, x, j)
        if drive >= 0:
            failures.append(f"drive l{j + 1} = {drive} is not negative")
    status = "admissible" if not failures else "virtual"
    return FixedPoint(members, x, status, tuple(failures))


def singleton_rule(net: Network) -> frozenset[int]:
    """Neurons whose singleton supports a fixed point: exactly the sinks
    of the network's graph."""
    return graph_of(net).sinks()
