"""Polynomial dynamical systems: the Lorenz field, truncated flow maps,
and Runge-Kutta reference integration.

A truncated flow map advances a state by one time step ``delta_t`` using
the Lie series of the field's generator X = sum_i f_i d/dx_i, cut at a
chosen order N:

    x_i(t + delta_t) ~= sum_{k=0..N} delta_t^k / k!  *  X^k[x_i](x(t))

Each component of the map is itself a polynomial, so repeated
differentiation raises the degree: for a field of maximum degree d the
order-N map has degree 1 + N*(d - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .algebra import Polynomial, VectorField, lie_derivative
from .embedding import TimeSeries

# States whose largest component magnitude exceeds this are treated as a
# diverged integration rather than silently returning overflow values.
BLOWUP_LIMIT = 1e8


class BlowupError(RuntimeError):
    """Raised when an integration step leaves the trusted numeric range."""


@dataclass(frozen=True)
class LorenzParams:
    """Parameters (sigma, r, b) of the Lorenz convection equations."""

    sigma: float = 10.0
    r: float = 28.0
    b: float = 8.0 / 3.0

    @property
    def is_chaotic(self) -> bool:
        """True in the classic chaotic regime r > 24.74 (sigma=10, b=8/3)."""
        return self.r > 24.74


#: Initial state used by the bundled Lorenz generator defaults.
DEFAULT_LORENZ_STATE = (-0.3336666667, -0.3336666667, 21.9996666667)


def lorenz_field(params: LorenzParams) -> VectorField:
    """The Lorenz vector field as polynomial components.

        dx1/dt = sigma*(x2 - x1)
        dx2/dt = -x2 - x1*x3 + r*x1
        dx3/dt = x1*x2 - b*x3

    Only the two quadratic terms -x1*x3 and x1*x2 are nonlinear, and they
    carry no parameters; setting sigma = r = b = 0 leaves the field
    (0, -x2 - x1*x3, x1*x2).
    """
    comp1 = Polynomial(3, {(1, 0, 0): -params.sigma, (0, 1, 0): params.sigma})
    comp2 = Polynomial(3, {(0, 1, 0): -1.0, (1, 0, 1): -1.0, (1, 0, 0): params.r})
    comp3 = Polynomial(3, {(1, 1, 0): 1.0, (0, 0, 1): -params.b})
    return VectorField((comp1, comp2, comp3))


@dataclass(frozen=True)
class TruncatedFlowMap:
    """A one-step polynomial approximation of a field's time-``delta_t`` flow."""

    order: int
    delta_t: float
    components: Tuple[Polynomial, ...]

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def total_degree(self) -> int:
        return max(c.total_degree for c in self.components)

    @property
    def coefficient_count(self) -> int:
        return sum(len(c) for c in self.components)


def build_truncated_flow_map(
    field: VectorField, order: int, delta_t: float
) -> TruncatedFlowMap:
    """Expand the Lie series of ``field`` to ``order`` for step ``delta_t``."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not (delta_t > 0 and math.isfinite(delta_t)):
        raise ValueError(f"delta_t must be positive and finite, got {delta_t}")
    components = []
    for i in range(field.dimension):
        term = Polynomial.variable(field.dimension, i)
        acc = term
        for k in range(1, order + 1):
            term = lie_derivative(field, term)
            acc = acc + term * (delta_t ** k / math.factorial(k))
        components.append(acc)
    return TruncatedFlowMap(order, delta_t, tuple(components))


def flow_step(fmap: TruncatedFlowMap, state: Sequence[float]) -> np.ndarray:
    """Advance ``state`` by one step of the truncated flow map."""
    state = np.asarray(state, dtype=float)
    if state.shape != (fmap.dimension,):
        raise ValueError(
            f"state has shape {state.shape}, expected ({fmap.dimension},)"
        )
    return np.array([c.evaluate(state) for c in fmap.components])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Equally spaced states of one integration: shape (samples, dimension)."""

    states: np.ndarray
    delta_t: float

    def __len__(self) -> int:
        return len(self.states)

    @property
    def dimension(self) -> int:
        return self.states.shape[1]


def rk4_integrate(
    field: VectorField,
    initial_state: Sequence[float],
    delta_t: float,
    steps: int,
    substeps: int = 1,
) -> Trajectory:
    """Integrate ``field`` with classical fourth-order Runge-Kutta.

    Records ``steps + 1`` states (the initial state included) spaced
    ``delta_t`` apart; each recorded interval is covered by ``substeps``
    internal RK4 stages of size ``delta_t / substeps``.  Raises
    BlowupError naming the failing recorded step when any component
    exceeds BLOWUP_LIMIT or stops being finite.
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    if not (delta_t > 0 and math.isfinite(delta_t)):
        raise ValueError(f"delta_t must be positive and finite, got {delta_t}")
    x = np.asarray(initial_state, dtype=float)
    if x.shape != (field.dimension,):
        raise ValueError(
            f"initial state has shape {x.shape}, expected ({field.dimension},)"
        )
    h = delta_t / substeps
    out = np.empty((steps + 1, field.dimension))
    out[0] = x
    _check_in_range(x, 0)
    for step in range(1, steps + 1):
        for _ in range(substeps):
            k1 = field.evaluate(x)
            k2 = field.evaluate(x + 0.5 * h * k1)
            k3 = field.evaluate(x + 0.5 * h * k2)
            k4 = field.evaluate(x + h * k3)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_in_range(x, step)
        out[step] = x
    return Trajectory(out, delta_t)


def _check_in_range(state: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(state)) or np.max(np.abs(state)) > BLOWUP_LIMIT:
        raise BlowupError(
            f"integration diverged at recorded step {step}: "
            f"state left the range |x| <= {BLOWUP_LIMIT:g}"
        )


def sample_coordinate(trajectory: Trajectory, coordinate: int) -> TimeSeries:
    """Extract one coordinate of a trajectory as a scalar time series."""
    if not 0 <= coordinate < trajectory.dimension:
        raise ValueError(
            f"coordinate {coordinate} out of range for dimension "
            f"{trajectory.dimension}"
        )
    return TimeSeries(trajectory.states[:, coordinate], name=f"x{coordinate + 1}")


def lorenz_series(
    params: LorenzParams = LorenzParams(),
    samples: int = 600,
    delta_t: float = 0.01,
    initial_state: Sequence[float] = DEFAULT_LORENZ_STATE,
    substeps: int = 10,
    coordinate: int = 0,
) -> TimeSeries:
    """Generate a sampled Lorenz coordinate series of length ``samples``."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    traj = rk4_integrate(
        lorenz_field(params), initial_state, delta_t, samples - 1, substeps
    )
    return sample_coordinate(traj, coordinate)
