"""Single-parameter bifurcation sweeps and two-phase unlock plans.

Every admissibility determinant is affine in any single weight or input
entry (each parameter lives in exactly one arrangement row), so sweep
events have exact rational locations.  Events are still reported as
rational intervals refined by sign bisection, which is what downstream
tooling consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import DegeneracyError, PinnedFlipError, SearchBudgetError
from .exact import sign
from .chirotope import N3_FAMILIES, canonical_values_n3
from .fixed_points import SupportFamily, fp_chirotope, support_values
from .mutations import full_support_flip_allowed
from .network import (
    Digraph,
    Network,
    Param,
    ParamPath,
    edge_drive,
    format_param,
    get_param,
    graph_of,
    separation,
    set_param,
)
from .regimes import WEIGHT_FLOOR

DEFAULT_TOL = Fraction(1, 10_000)


@dataclass(frozen=True)
class SweepEvent:
    """One support change along a sweep, bracketed to width <= tol."""

    lo: Fraction
    hi: Fraction
    before: SupportFamily
    after: SupportFamily

    def change(self) -> str:
        from .regimes import describe_change

        return describe_change(tuple(self.before), tuple(self.after))


def _monitored(net: Network) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for size in range(1, net.n + 1):
        for members in itertools.combinations(range(net.n), size):
            for i in range(net.n):
                out.append((members, i))
    return out


def _det_values(net: Network) -> dict[tuple[tuple[int, ...], int], Fraction]:
    values = {}
    for size in range(1, net.n + 1):
        for members in itertools.combinations(range(net.n), size):
            per = support_values(net, members)
            for i in range(net.n):
                values[(members, i)] = per[i]
    return values


def sweep(path: ParamPath, tol: Fraction = DEFAULT_TOL) -> list[SweepEvent]:
    """Walk one parameter across its range and report every change of
    the support family, each bracketed by rational bisection."""
    t0, t1 = path.start, path.stop
    net0, net1 = path.at(t0), path.at(t1)
    for endpoint, net in ((t0, net0), (t1, net1)):
        values = _det_values(net)
        if any(v == 0 for v in values.values()):
            raise DegeneracyError(f"sweep endpoint {endpoint} is degenerate")

    vals0 = _det_values(net0)
    vals1 = _det_values(net1)
    span = t1 - t0
    roots: dict[Fraction, list[tuple[tuple[int, ...], int]]] = {}
    for key, y0 in vals0.items():
        slope = (vals1[key] - y0) / span
        if slope == 0:
            continue
        r = t0 - y0 / slope
        lo, hi = sorted((t0, t1))
        if lo < r < hi:
            roots.setdefault(r, []).append(key)

    forward = t1 > t0
    ordered = sorted(roots, reverse=not forward)
    cuts = [t0] + ordered + [t1]
    events: list[SweepEvent] = []
    for idx, r in enumerate(ordered):
        prev_probe = (cuts[idx] + r) / 2
        next_probe = (r + cuts[idx + 2]) / 2
        before = fp_chirotope(path.at(prev_probe))
        after = fp_chirotope(path.at(next_probe))
        if before == after:
            continue
        key = roots[r][0]

        def det_at(t, key=key):
            return support_values(path.at(t), key[0])[key[1]]

        a, b = _bisect(det_at, prev_probe, next_probe, tol)
        events.append(SweepEvent(min(a, b), max(a, b), before, after))
    return events


def _bisect(f: Callable, a: Fraction, b: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    fa = sign(f(a))
    if fa == sign(f(b)) or fa == 0:
        raise ValueError("bisection bracket does not straddle a sign change")
    while abs(b - a) > tol:
        mid = (a + b) / 2
        fm = sign(f(mid))
        if fm == 0:
            half = tol / 4
            return (mid - half, mid + half) if b > a else (mid + half, mid - half)
        if fm == fa:
            a = mid
        else:
            b = mid
    return a, b


# -- unlock plans -------------------------------------------------------


@dataclass(frozen=True)
class UnlockStep:
    param: Param
    start: Fraction
    stop: Fraction
    purpose: str

    def format(self) -> str:
        return f"{format_param(self.param)}: {self.start} -> {self.stop} ({self.purpose})"


@dataclass(frozen=True)
class UnlockPlan:
    """Graph-preserving parameter moves that flip a full-support basis.

    Two-phase when the gating separation sign has to be crossed first;
    single-phase when the gate is already open."""

    target: tuple[int, ...]
    triple: tuple[int, int, int]
    steps: tuple[UnlockStep, ...]
    initial: Network
    final: Network
    fp_before: SupportFamily
    fp_after: SupportFamily

    @property
    def phases(self) -> tuple[str, ...]:
        seen = []
        for step in self.steps:
            if step.purpose not in seen:
                seen.append(step.purpose)
        return tuple(seen)

    def format(self) -> str:
        lines = [f"target basis: {self.target} at triple {tuple(m + 1 for m in self.triple)}"]
        lines += ["  " + s.format() for s in self.steps]
        lines.append(f"supports: {self.fp_before.format()} -> {self.fp_after.format()}")
        return "\n".join(lines)


def _weight_window(net: Network, x: int, y: int) -> tuple[Fraction, Fraction]:
    """Open interval for W[x][y] that keeps the edge y -> x unchanged
    and stays inside the competitive box."""
    drive = edge_drive(net, y, x)
    root = -net.b[x] / net.b[y]
    if drive > 0:
        return (max(WEIGHT_FLOOR, root), Fraction(0))
    return (WEIGHT_FLOOR, min(Fraction(0), root))


def _nondegenerate(net: Network) -> bool:
    return all(v != 0 for v in canonical_values_n3(net).values())


def _flip_one_param(
    net: Network,
    value_fn: Callable[[Network], Fraction],
    param: Param,
    g: Digraph,
    purpose: str,
) -> tuple[UnlockStep, Network] | None:
    lo, hi = _weight_window(net, param[1], param[2])
    t0 = get_param(net, param)
    y0 = value_fn(net)
    probe = (t0 + lo) / 2 if t0 != lo else (t0 + hi) / 2
    y1 = value_fn(set_param(net, param, probe))
    if y1 == y0:
        return None
    slope = (y1 - y0) / (probe - t0)
    root = t0 - y0 / slope
    if not (lo < root < hi):
        return None
    boundary = hi if root > t0 else lo
    for num, den in ((1, 2), (1, 4), (3, 4), (1, 8), (5, 8)):
        landing = root + (boundary - root) * Fraction(num, den)
        candidate = set_param(net, param, landing)
        if not _nondegenerate(candidate):
            continue
        if sign(value_fn(candidate)) == -sign(y0) and graph_of(candidate) == g:
            return UnlockStep(param, t0, landing, purpose), candidate
    return None


def _flip_quantity(
    net: Network,
    value_fn: Callable[[Network], Fraction],
    params: tuple[Param, ...],
    g: Digraph,
    purpose: str,
) -> tuple[list[UnlockStep], Network]:
    for param in params:
        hit = _flip_one_param(net, value_fn, param, g, purpose)
        if hit is not None:
            return [hit[0]], hit[1]
    # widen: push the secondary parameter toward its helpful extreme,
    # then retry the primary
    for secondary, primary in itertools.permutations(params, 2):
        lo, hi = _weight_window(net, secondary[1], secondary[2])
        t0 = get_param(net, secondary)
        for target in ((lo * 3 + hi) / 4, (lo + hi * 3) / 4):
            if target == t0:
                continue
            moved = set_param(net, secondary, target)
            if not _nondegenerate(moved) or graph_of(moved) != g:
                continue
            hit = _flip_one_param(moved, value_fn, primary, g, purpose)
            if hit is not None:
                pre = UnlockStep(secondary, t0, target, purpose)
                return [pre, hit[0]], hit[1]
    raise SearchBudgetError(f"could not flip quantity for {purpose}")


def unlock_path(net: Network, target: Iterable[int]) -> UnlockPlan:
    """Plan graph-preserving moves that flip a full-support basis sign.

    Checks the graph criterion first; when the gating product
    sgn(edge drive j->k) * sgn(separation of H_i, H_k along x_j) is not
    negative, a first phase flips that separation, after which the
    target is driven across zero along the (i, j)-separation direction.
    """
    basis = tuple(sorted(target))
    fam = N3_FAMILIES.get(basis)
    if fam is None or fam.tag != "full":
        raise ValueError("unlock target must be a full-support basis (three h rows)")
    if net.n != 3:
        raise ValueError("unlock plans are implemented for n=3")
    g = graph_of(net)
    i = fam.who[0]
    others = sorted(m for m in range(3) if m != i)
    if not full_support_flip_allowed(g, i, others[0], others[1]):
        raise PinnedFlipError(
            f"the full-support sign at neuron {i + 1} is locked by the graph: "
            "the opposite pair is one-directional or both its nodes separate"
        )

    fp_before = fp_chirotope(net)
    candidates = [(others[0], others[1]), (others[1], others[0])]
    candidates = [(j, k) for j, k in candidates if not g.is_separating(k)]

    def caveat_holds(state: Network, j: int, k: int) -> bool:
        return sign(edge_drive(state, j, k)) * sign(separation(state, i, k, j)) < 0

    chosen = None
    for j, k in candidates:
        if caveat_holds(net, j, k):
            chosen = (j, k, False)
            break
    if chosen is None:
        for j, k in candidates:
            if not g.is_separating(j):
                chosen = (j, k, True)
                break
    if chosen is None:
        raise PinnedFlipError("no admissible role assignment opens the gate")
    j, k, need_gate_flip = chosen

    steps: list[UnlockStep] = []
    state = net
    if need_gate_flip:
        gate_params = (("W", i, j), ("W", k, j))
        gate_steps, state = _flip_quantity(
            state,
            lambda s: separation(s, i, k, j),
            gate_params,
            g,
            "separation-flip",
        )
        steps += gate_steps
        if not caveat_holds(state, j, k):
            raise SearchBudgetError("gate flip did not open the target wall")

    want = -sign(fam.value(net))
    if sign(fam.value(state)) != want:
        target_params = (("W", i, k), ("W", j, k))
        flip_steps, state = _flip_quantity(
            state,
            lambda s: fam.value(s),
            target_params,
            g,
            "target-flip",
        )
        steps += flip_steps
    if sign(fam.value(state)) != want:
        raise SearchBudgetError("target basis sign did not flip")
    return UnlockPlan(
        target=basis,
        triple=(i, j, k),
        steps=tuple(steps),
        initial=net,
        final=state,
        fp_before=fp_before,
        fp_after=fp_chirotope(state),
    )
