"""Grassmann-Pluecker structure of the chirotope and its mutations.

A basis is a mutation when flipping its single sign leaves a map that
still satisfies every three-term Grassmann-Pluecker sign condition;
geometrically the basis bounds a simplicial cell of the arrangement and
the flip crosses one wall of the parameter-space cell decomposition.
Two independent tests are provided: the rank-one criterion on the
standard representative matrix, and the brute-force flip check over all
three-term relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DegeneracyError
from .exact import permutation_parity, sign, sort_parity
from .chirotope import (
    Chirotope,
    N3_FAMILIES,
    _tuple_det,
    arrangement_matrix,
    ground_size,
)
from .network import Digraph, Network, graph_of, separation


def three_term_relations(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Canonical (sigma, tau) index pairs: sigma picks n-1 ground
    elements, tau four of the rest."""
    m = ground_size(n)
    for sigma in itertools.combinations(range(m), n - 1):
        rest = [t for t in range(m) if t not in sigma]
        yield from ((sigma, tau) for tau in itertools.combinations(rest, 4))


class _DetCache:
    """Canonical-subset determinant cache over one arrangement."""

    def __init__(self, net: Network):
        self.ground = arrangement_matrix(net)
        self.values: dict[tuple[int, ...], Fraction] = {}

    def ordered(self, ordered: tuple[int, ...]) -> Fraction:
        if len(set(ordered)) != len(ordered):
            return Fraction(0)
        subset = tuple(sorted(ordered))
        value = self.values.get(subset)
        if value is None:
            value = _tuple_det(self.ground, subset)
            self.values[subset] = value
        return sort_parity(ordered) * value


def three_term_residual(
    cache: _DetCache, sigma: tuple[int, ...], tau: tuple[int, ...]
) -> Fraction:
    t1, t2, t3, t4 = tau
    return (
        cache.ordered(sigma + (t1, t2)) * cache.ordered(sigma + (t3, t4))
        - cache.ordered(sigma + (t1, t3)) * cache.ordered(sigma + (t2, t4))
        + cache.ordered(sigma + (t1, t4)) * cache.ordered(sigma + (t2, t3))
    )


def gp_residual(net: Network, sigma: Iterable[int], tau: Iterable[int]) -> Fraction:
    """Residual of one three-term relation; exactly zero for any network."""
    return three_term_residual(_DetCache(net), tuple(sigma), tuple(tau))


@dataclass(frozen=True)
class GPReport:
    relations: int
    max_abs_residual: Fraction

    @property
    def ok(self) -> bool:
        return self.max_abs_residual == 0


def gp_check(net: Network) -> GPReport:
    """Evaluate every three-term Grassmann-Pluecker relation exactly."""
    cache = _DetCache(net)
    worst = Fraction(0)
    count = 0
    for sigma, tau in three_term_relations(net.n):
        r = three_term_residual(cache, sigma, tau)
        count += 1
        if abs(r) > worst:
            worst = abs(r)
    return GPReport(count, worst)


@dataclass(frozen=True)
class RepMatrix:
    """Standard representative sign matrix of a basis: entry (i, j) is
    the chirotope value after swapping basis element i for complement
    element j."""

    basis: tuple[int, ...]
    complement: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def rank_one(self) -> bool:
        t = self.entries
        return all(
            t[i][j] * t[0][0] == t[i][0] * t[0][j]
            for i in range(1, len(t))
            for j in range(1, len(t[0]))
        )


def rep_matrix(chi: Chirotope, basis: Iterable[int]) -> RepMatrix:
    basis = tuple(sorted(basis))
    complement = tuple(t for t in range(ground_size(chi.n)) if t not in basis)
    entries = []
    for i in range(len(basis)):
        row = []
        for mu in complement:
            swapped = basis[:i] + (mu,) + basis[i + 1 :]
            row.append(chi.chi(swapped))
        entries.append(tuple(row))
    if any(v == 0 for row in entries for v in row):
        raise DegeneracyError("representative matrix needs a simplicial chirotope")
    return RepMatrix(basis, complement, tuple(entries))


def is_mutation(chi: Chirotope, basis: Iterable[int]) -> bool:
    """Rank-one criterion: the basis can flip alone iff its representative
    sign matrix factors as an outer product of sign vectors."""
    return rep_matrix(chi, basis).rank_one()


def _three_term_sign_ok(chi: Chirotope, sigma: tuple[int, ...], tau: tuple[int, ...]) -> bool:
    t1, t2, t3, t4 = tau
    terms = (
        chi.chi(sigma + (t1, t2)) * chi.chi(sigma + (t3, t4)),
        -chi.chi(sigma + (t1, t3)) * chi.chi(sigma + (t2, t4)),
        chi.chi(sigma + (t1, t4)) * chi.chi(sigma + (t2, t3)),
    )
    if all(t == 0 for t in terms):
        return True
    return 1 in terms and -1 in terms


def satisfies_three_term(chi: Chirotope) -> bool:
    return all(_three_term_sign_ok(chi, s, t) for s, t in three_term_relations(chi.n))


def is_mutation_by_flip(chi: Chirotope, basis: Iterable[int]) -> bool:
    """Brute-force cross-check of `is_mutation`: flip the basis sign and
    re-test every three-term relation."""
    basis = tuple(sorted(basis))
    if chi.basis_sign(basis) == 0:
        raise DegeneracyError("flip test needs a simplicial chirotope")
    return satisfies_three_term(chi.flipped(basis))


def mutations_of(chi: Chirotope) -> tuple[tuple[int, ...], ...]:
    return tuple(b for b in chi.bases() if is_mutation(chi, b))


@dataclass(frozen=True)
class SeparationProfile:
    """For every ordered pair (i, j) and third neuron k: whether k
    separates i from j in the graph, and the exact sign of the
    separation quantity b_j*W[i][k] - b_i*W[j][k]."""

    entries: tuple[tuple[tuple[int, int, int], bool, int], ...]

    def violations(self) -> tuple[tuple[int, int, int], ...]:
        """Triples where the graph pins the separation sign and the sign
        disagrees (must be empty for any competitive network)."""
        return tuple(
            (i, j, k)
            for (i, j, k), separates, s in self.entries
            if separates and s != 1
        )


def separation_profile(net: Network) -> SeparationProfile:
    g = graph_of(net)
    entries = []
    for i, j in itertools.permutations(range(net.n), 2):
        for k in range(net.n):
            if k in (i, j):
                continue
            entries.append(
                ((i, j, k), g.separates(k, i, j), sign(separation(net, i, j, k)))
            )
    return SeparationProfile(tuple(entries))


def competitive_pins() -> dict[tuple[int, ...], int]:
    """Basis signs forced for every competitive 3-neuron network,
    independent of its graph: the origin, solo, and weight families."""
    pins: dict[tuple[int, ...], int] = {}
    for subset, fam in N3_FAMILIES.items():
        if fam.tag == "origin_inf":
            pins[subset] = fam.parity
        elif fam.tag in ("solo_inf", "solo_self"):
            pins[subset] = -fam.parity
        elif fam.tag == "weight":
            i, j = fam.who  # raw value is parity(i,j,k) * W[i][j] with W < 0
            k = 3 - i - j
            pins[subset] = -fam.parity * permutation_parity((i, j, k))
    return pins


def pinned_bases(g: Digraph) -> dict[tuple[int, ...], int]:
    """Canonical basis signs forced by the competitive class and the
    graph g (3-neuron networks): class pins, edge-drive signs, and the
    separation signs locked by graph separation."""
    if g.n != 3:
        raise ValueError("sign pins are tabulated for three-neuron networks only")
    pins = competitive_pins()
    for subset, fam in N3_FAMILIES.items():
        if fam.tag == "edge":
            i, j = fam.who
            pins[subset] = fam.parity * (1 if g.has_edge(i, j) else -1)
        elif fam.tag == "separation":
            i, j, k = fam.who  # raw value is parity(i,j,k) * separation(i,j,k)
            p = permutation_parity((i, j, k))
            if g.separates(k, i, j):
                pins[subset] = fam.parity * p
            elif g.separates(k, j, i):
                pins[subset] = -fam.parity * p
    return pins


def full_support_flip_allowed(g: Digraph, i: int, j: int, k: int) -> bool:
    """Whether graph-preserving parameter changes can flip the sign of
    the full-support determinant singled out at neuron i, enabling the
    support bifurcations that add or remove {j,k} against {i,j,k}.

    Requires the (j,k) relation to be symmetric (mutual or absent) and
    at least one of j, k to separate no pair of the graph.
    """
    if g.n != 3:
        raise ValueError("the flip criterion applies to three-neuron graphs")
    if len({i, j, k}) != 3:
        raise ValueError("neurons must be distinct")
    symmetric = g.has_edge(j, k) == g.has_edge(k, j)
    return symmetric and (not g.is_separating(j) or not g.is_separating(k))
