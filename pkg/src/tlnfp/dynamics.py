"""Floating-point simulation and stability checks.

The one module that leaves exact arithmetic: trajectories of the
nonlinear system x' = -x + [Wx + b]_+ by fixed-step RK4, vector-field
residuals, and eigenvalue classification of the per-region linear
systems.  Everything here is tolerance-based, never sign-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DivergenceError
from .network import Network

STABILITY_BAND = 1e-9


def _float_parts(net: Network) -> tuple[np.ndarray, np.ndarray]:
    W = np.array([[float(x) for x in row] for row in net.W])
    b = np.array([float(x) for x in net.b])
    return W, b


def vector_field(net: Network, x: Sequence[float]) -> np.ndarray:
    W, b = _float_parts(net)
    x = np.asarray(x, dtype=float)
    return -x + np.maximum(W @ x + b, 0.0)


def residual(net: Network, x: Sequence[float]) -> float:
    """Max-norm of the vector field at x; near zero exactly at the
    admissible fixed points."""
    return float(np.max(np.abs(vector_field(net, x))))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray

    def final(self) -> np.ndarray:
        return self.states[-1]

    def write_csv(self, fh: IO[str]) -> None:
        n = self.states.shape[1]
        fh.write("t," + ",".join(f"x{i + 1}" for i in range(n)) + "\n")
        for t, row in zip(self.times, self.states):
            fh.write(f"{t:.10g}," + ",".join(f"{v:.12g}" for v in row) + "\n")


def integrate(net: Network, x0: Sequence[float], t_end: float, dt: float = 1e-3) -> Trajectory:
    """Fixed-step RK4 on the full nonlinear right-hand side.

    The vector field is continuous across region boundaries, so no event
    handling is needed; accuracy degrades to first order only in the
    measure-zero crossing steps."""
    if dt <= 0 or t_end <= 0:
        raise ValueError("need positive dt and t_end")
    W, b = _float_parts(net)

    def f(x):
        return -x + np.maximum(W @ x + b, 0.0)

    steps = int(round(t_end / dt))
    times = np.empty(steps + 1)
    states = np.empty((steps + 1, net.n))
    x = np.asarray([float(v) for v in x0], dtype=float)
    times[0] = 0.0
    states[0] = x
    for s in range(1, steps + 1):
        k1 = f(x)
        k2 = f(x + dt / 2 * k1)
        k3 = f(x + dt / 2 * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(f"state became non-finite at step {s}")
        times[s] = s * dt
        states[s] = x
    return Trajectory(times, states)


@dataclass(frozen=True)
class StabilityReport:
    support: tuple[int, ...]
    eigenvalues: tuple[complex, ...]
    classification: str


def stability(net: Network, sigma: Iterable[int]) -> StabilityReport:
    """Eigenvalues of the region-sigma linear system's Jacobian: row i is
    -e_i off the support and (W - I) row i on it."""
    members = tuple(sorted(frozenset(sigma)))
    W, _ = _float_parts(net)
    J = -np.eye(net.n)
    for i in members:
        J[i, :] += W[i, :]
    eig = np.linalg.eigvals(J)
    top = float(np.max(eig.real))
    if top > STABILITY_BAND:
        label = "unstable"
    elif top < -STABILITY_BAND:
        label = "stable"
    else:
        label = "marginal"
    return StabilityReport(members, tuple(complex(v) for v in eig), label)
