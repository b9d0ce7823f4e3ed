"""Numeric flows of the generator fields and their closed-form solutions.

Integration is classical fixed-step RK4: reproducible error tables and a
clean fourth-order convergence check matter more here than adaptive speed.
Closed forms:

    translation T_k   x_k(t) = x_k(0) + t
    dilation D        x(t)   = e^t x(0)
    boost G_k         z(t) = -2/(t + s0 + i e0), s0 + i e0 = -2/(x_k(0) + i r0)
                      where z = x_k + i r, r^2 = sum_{j != k} x_j^2; the
                      transverse coordinates rescale by r(t)/r0 (fixed angles)
    rotation G (n=2)  z(t) = -1/(t + e + i f), e + i f = -1/z0   [no 1/2 factor]

The boost uses the half-coefficient convention (the field is G_k with the
1/2 in front of the quadratic term); the plane rotation "G" omits it.  Which
convention a run used is part of its report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BoundaryEscape, BoundaryPoint, NonFinite
from .exterior import VectorField
from .halfspace import SolitonParams, hyp_distance
from .solitons import build_field, generator

BOUNDARY_EPS = 1e-9  # stop before xn^-2 evaluations overflow
COORD_LIMIT = 1e9  # rotation flows blow up in finite time near the pole


@dataclass(frozen=True)
class FlowState:
    """A point of the half-space with a time stamp.

    The hyperbolic metric lives on xn > 0, but starts exactly on the
    boundary plane xn = 0 are accepted for trajectory runs: every generator
    flow is tangent to that plane (the last component carries a factor xn),
    so such trajectories are well defined even though the metric layer
    rejects their points.
    """

    coords: tuple
    t: float = 0.0

    def __post_init__(self):
        coords = tuple(float(x) for x in self.coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "t", float(self.t))
        if not all(math.isfinite(x) for x in coords) or not math.isfinite(self.t):
            raise NonFinite(f"non-finite state {coords} at t={self.t}")
        if not coords or coords[-1] < 0:
            raise BoundaryPoint(f"last coordinate must be nonnegative, got {coords}")

    @property
    def n(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class FlowSpec:
    """What to flow: a generator name ("D", "Tk", "Gk", "G") or a raw field."""

    kind: str
    n: int
    params: SolitonParams | None = None
    t_max: float = 1.0
    dt: float = 1e-3

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_max < 0:
            raise ValueError("t_max must be nonnegative")
        if self.kind == "general" and self.params is None:
            raise ValueError("a general flow needs parameters")

    def field(self) -> VectorField:
        if self.kind == "general":
            return build_field(self.params)
        return generator(self.kind, self.n)

    def has_closed_form(self) -> bool:
        return self.kind != "general"

    def convention(self) -> str:
        if self.kind == "G":
            return "plane rotation without 1/2 factor; z(t) = -1/(t + e + i f)"
        if self.kind.startswith("G"):
            return "boost with 1/2 factor; z(t) = -2/(t + s0 + i e0)"
        return "affine flow (exact)"


def _compile(field: VectorField):
    comps = []
    for i in range(1, field.n + 1):
        comps.append([(float(c), exps) for exps, c in field.component(i).terms.items()])
    def rhs(y: Sequence[float]) -> list:
        out = []
        for terms in comps:
            total = 0.0
            for coeff, exps in terms:
                value = coeff
                for x, e in zip(y, exps):
                    if e:
                        value *= x**e
                total += value
            out.append(total)
        return out
    return rhs


def integrate(field: VectorField, p0: FlowState, t_max: float, dt: float) -> list:
    """Fixed-step RK4 trajectory from p0; raises BoundaryEscape/NonFinite.

    The escape exception carries the valid prefix of the trajectory.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if field.n != p0.n:
        raise ValueError(f"field dimension {field.n} differs from state arity {p0.n}")
    rhs = _compile(field)
    states = [p0]
    y = list(p0.coords)
    # a start on the boundary plane stays there exactly; only interior
    # trajectories can "escape" through the xn threshold
    watch_boundary = p0.coords[-1] > BOUNDARY_EPS
    nsteps = int(round(t_max / dt))
    if abs(nsteps * dt - t_max) > 1e-12 * max(1.0, t_max):
        nsteps = int(t_max / dt)
    leftover = t_max - nsteps * dt
    steps = [dt] * nsteps + ([leftover] if leftover > 1e-15 else [])
    t = p0.t
    for h in steps:
        k1 = rhs(y)
        k2 = rhs([yi + 0.5 * h * ki for yi, ki in zip(y, k1)])
        k3 = rhs([yi + 0.5 * h * ki for yi, ki in zip(y, k2)])
        k4 = rhs([yi + h * ki for yi, ki in zip(y, k3)])
        y = [
            yi + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
            for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
        ]
        t += h
        if not all(math.isfinite(v) for v in y):
            raise NonFinite(f"non-finite coordinates at t={t}")
        escaped = y[-1] <= BOUNDARY_EPS if watch_boundary else y[-1] < 0.0
        if escaped or max(abs(v) for v in y) > COORD_LIMIT:
            raise BoundaryEscape(f"trajectory left the safe region at t={t}", states)
        states.append(FlowState(tuple(y), t))
    return states


def closed_flow(spec: FlowSpec, p0: FlowState, t: float) -> FlowState:
    """Evaluate the closed-form flow of spec.kind at time t."""
    coords = list(p0.coords)
    n = len(coords)
    if n != spec.n:
        raise ValueError(f"state arity {n} differs from spec dimension {spec.n}")
    if spec.kind == "D":
        scale = math.exp(t)
        return FlowState(tuple(scale * x for x in coords), p0.t + t)
    if spec.kind.startswith("T"):
        k = int(spec.kind[1:])
        coords[k - 1] += t
        return FlowState(tuple(coords), p0.t + t)
    if spec.kind == "G":
        if n != 2:
            raise ValueError("the plane rotation flow lives in dimension 2")
        z0 = complex(coords[0], coords[1])
        z = -1.0 / (t + (-1.0 / z0))
        return FlowState((z.real, z.imag), p0.t + t)
    if spec.kind.startswith("G"):
        k = int(spec.kind[1:])
        r0 = math.sqrt(sum(x * x for i, x in enumerate(coords) if i != k - 1))
        if r0 == 0.0:
            # axis-bound Riccati solution; unreachable from the open
            # half-space, where r0 >= xn > 0
            xk = -2.0 / (t - 2.0 / coords[k - 1])
            out = [0.0] * n
            out[k - 1] = xk
            return FlowState(tuple(out), p0.t + t)
        z = -2.0 / (t + (-2.0 / complex(coords[k - 1], r0)))
        scale = z.imag / r0
        out = [x * scale for x in coords]
        out[k - 1] = z.real
        return FlowState(tuple(out), p0.t + t)
    raise ValueError(f"no closed form for flow kind {spec.kind!r}")


def flow_compare(spec: FlowSpec, p0: FlowState, t_max: float, dt: float) -> float:
    """Max Euclidean gap between the RK4 trajectory and the closed form."""
    trajectory = integrate(spec.field(), p0, t_max, dt)
    worst = 0.0
    for state in trajectory:
        reference = closed_flow(spec, p0, state.t - p0.t)
        gap = math.sqrt(
            sum((a - b) ** 2 for a, b in zip(state.coords, reference.coords))
        )
        worst = max(worst, gap)
    return worst


def isometry_check(field: VectorField, p: FlowState, q: FlowState, t_max: float, dt: float) -> float:
    """Max drift of the hyperbolic distance between two flowed points."""
    traj_p = integrate(field, p, t_max, dt)
    traj_q = integrate(field, q, t_max, dt)
    base = hyp_distance(p.coords, q.coords)
    worst = 0.0
    for sp, sq in zip(traj_p, traj_q):
        worst = max(worst, abs(hyp_distance(sp.coords, sq.coords) - base))
    return worst


def write_trajectory_csv(path, states: Sequence[FlowState], spec: FlowSpec | None = None):
    """Write `t,x1..xn,cx1..cxn,err` rows; closed-form columns may be empty."""
    n = states[0].n if states else 0
    closed = spec is not None and spec.has_closed_form()
    header = (
        ["t"]
        + [f"x{i}" for i in range(1, n + 1)]
        + [f"cx{i}" for i in range(1, n + 1)]
        + ["err"]
    )
    lines = [",".join(header)]
    p0 = states[0] if states else None
    for state in states:
        row = [repr(state.t)] + [repr(x) for x in state.coords]
        if closed:
            reference = closed_flow(spec, p0, state.t - p0.t)
            err = math.sqrt(sum((a - b) ** 2 for a, b in zip(state.coords, reference.coords)))
            row += [repr(x) for x in reference.coords] + [repr(err)]
        else:
            row += [""] * n + [""]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
