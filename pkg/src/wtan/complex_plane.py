"""Complex-plane evaluation on the finite-cuts sheet convention.

Sheets and cuts
---------------
In the finite-cuts convention every sheet n has infinity as a regular point
with w -> sgn(n)*(|n|-1/2)*pi.  The cuts of sheet n are:

* one vertical segment joining each relevant branch point x_j to its
  conjugate x_j* (j = |n| for sheets +-1; j in {|n|-1, |n|} otherwise), and
* one real-axis segment: [Re x_1, 0] on sheets +-1, and
  [Re x_|n|, Re x_(|n|-1)] on sheets with |n| >= 2.

Crossing the real segment connects n to -n; crossing the vertical segment
(x_j, x_j*) connects j to j+1 for positive sheets and -j to -(j+1) for
negative ones.  All cuts of sheet n satisfy |x| <= |x_|n|| and
Re x_|n| <= Re x <= Re x_(|n|-1) (with x_0 taken as the origin).

Evaluation
----------
`eval_complex` continues the value from a real anchor far to the right
(where the sheet value is essentially its limit at infinity) along a path
that avoids the sheet's cuts; each step is corrected by Halley iteration.
Steps shrink in proportion to the distance from the nearest branch point:
near x_j the two local solution sheets differ by O(sqrt(distance)), so
uncontrolled steps can silently hop between them.

Dispersion reconstruction
-------------------------
Sheet 1 can be rebuilt from its cut discontinuities alone.  With
a = Re x_1, b = Im x_1, D0(u) = Im w(u + i0+) on the real cut and
D1(v) = [w(a + 0+ + iv) - w(a - 0+ + iv)]/2 on the vertical cut,
a Cauchy integral around the two cuts gives

    w(z) = pi/2 + (1/pi) Integral_a^0 D0(u)/(u - z) du
                - (1/pi) Integral_0^b [ D1(v)/(a + iv - z)
                                      + conj(D1(v))/(a - iv - z) ] dv .

The minus sign of the vertical-cut term follows from the counterclockwise
Cauchy contour with D1 defined as the right-minus-left jump; closure against
direct continuation fixes the convention unambiguously (and is enforced in
the test suite to ~1e-9).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .branch_points import BranchPoint, find_branch_point
from .core import (
    BranchedValue,
    BranchIndex,
    CutScheme,
    DEFAULT_CONFIG,
    SolverConfig,
    defining_residual,
    eval_real,
    halley_step,
    validate_branch,
)
from .errors import (
    NoConvergence,
    NonFiniteArgument,
    NotOnCut,
    OnCut,
    OutOfCutRange,
    PoleProximity,
    QuadratureFailure,
    StepTooLarge,
)

__all__ = [
    "CutKind",
    "Cut",
    "StepControl",
    "ContinuationPath",
    "SheetAtlas",
    "Side",
    "DispersionConfig",
    "eval_complex",
    "trace_path",
    "boundary_value",
    "discontinuity_delta0",
    "discontinuity_delta1",
    "dispersion_eval",
]

CUT_GUARD = 1e-10          # closer than this to a cut -> OnCut
BRANCH_POINT_GUARD = 1e-3  # eval_complex rejects targets this close to x_n


class CutKind(enum.Enum):
    REAL_SEGMENT = "real"
    VERTICAL_SEGMENT = "vertical"


class Side(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Cut:
    """One branch cut of a sheet, with the sheet pair it glues together."""

    kind: CutKind
    endpoints: tuple[complex, complex]
    connects: tuple[BranchIndex, BranchIndex]

    def crossing(self, z0: complex, z1: complex) -> float | None:
        """Parameter t in [0, 1] where segment z0->z1 crosses the cut, else None.

        A point exactly on the cut line counts as lying on the positive
        side, so a step landing on the line registers the crossing on
        arrival and not again on a departure to the positive side.
        """
        if self.kind is CutKind.VERTICAL_SEGMENT:
            a = self.endpoints[0].real
            d0, d1 = z0.real - a, z1.real - a
            if (d0 >= 0.0) == (d1 >= 0.0):
                return None
            t = d0 / (d0 - d1)
            imc = z0.imag + t * (z1.imag - z0.imag)
            lo = min(self.endpoints[0].imag, self.endpoints[1].imag)
            hi = max(self.endpoints[0].imag, self.endpoints[1].imag)
            return t if lo <= imc <= hi else None
        d0, d1 = z0.imag, z1.imag
        if (d0 >= 0.0) == (d1 >= 0.0):
            return None
        t = d0 / (d0 - d1)
        rec = z0.real + t * (z1.real - z0.real)
        lo, hi = self.endpoints[0].real, self.endpoints[1].real
        return t if lo <= rec <= hi else None

    def distance(self, z: complex) -> float:
        """Euclidean distance from z to the cut segment."""
        if self.kind is CutKind.VERTICAL_SEGMENT:
            a = self.endpoints[0].real
            lo = min(self.endpoints[0].imag, self.endpoints[1].imag)
            hi = max(self.endpoints[0].imag, self.endpoints[1].imag)
            dy = 0.0 if lo <= z.imag <= hi else min(abs(z.imag - lo), abs(z.imag - hi))
            return math.hypot(z.real - a, dy)
        lo, hi = self.endpoints[0].real, self.endpoints[1].real
        dx = 0.0 if lo <= z.real <= hi else min(abs(z.real - lo), abs(z.real - hi))
        return math.hypot(dx, z.imag)


@dataclass(frozen=True)
class StepControl:
    """Adaptive step-size policy for path continuation.

    Steps never exceed max_step, shrink by `shrink` whenever the Halley
    correction exceeds dy_max (or fails), and are additionally capped at
    bp_factor times the distance to the nearest branch point, which is what
    prevents hopping onto the wrong local sheet near x_n.
    """

    max_step: float = 0.5
    shrink: float = 0.5
    dy_max: float = 0.2
    min_step: float = 1e-9
    bp_factor: float = 0.5


DEFAULT_STEP_CONTROL = StepControl()


@dataclass(frozen=True)
class ContinuationPath:
    waypoints: tuple[complex, ...]
    step_control: StepControl = DEFAULT_STEP_CONTROL

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("a path needs at least two waypoints")


# ---------------------------------------------------------------------------
# atlas
# ---------------------------------------------------------------------------

class SheetAtlas:
    """Immutable catalogue of branch points and per-sheet cuts.

    The atlas also owns the origin branch point x = 0 (the w = 0 solution of
    the singularity condition, index 0 by convention); it is not a
    :class:`BranchPoint` record but enters the cut geometry of sheets +-1
    and the step control of every continuation.
    """

    def __init__(self, branch_points: Sequence[BranchPoint],
                 scheme: CutScheme = CutScheme.FINITE_CUTS):
        if scheme is CutScheme.REAL_AXIS:
            raise ValueError("the real-axis convention has no complex atlas")
        self.scheme = scheme
        self.branch_points = list(branch_points)
        self.max_sheet = len(self.branch_points)
        self.origin = 0j
        self._bp_locations = [self.origin]
        for bp in self.branch_points:
            self._bp_locations.append(bp.x)
            self._bp_locations.append(bp.conjugate_x)
        self._cuts: dict[int, tuple[Cut, ...]] = {}
        self._disp_tables: dict[tuple, tuple] = {}

    @classmethod
    def build(cls, max_sheet: int = 4,
              scheme: CutScheme = CutScheme.FINITE_CUTS) -> "SheetAtlas":
        if max_sheet < 1:
            raise ValueError("max_sheet must be >= 1")
        return cls([find_branch_point(j) for j in range(1, max_sheet + 1)], scheme)

    # -- geometry ----------------------------------------------------------

    def _vertical_cut(self, j: int, sheet: int) -> Cut:
        bp = self.branch_points[j - 1]
        if sheet > 0:
            partner = sheet + 1 if j == sheet else sheet - 1
        else:
            partner = sheet - 1 if j == -sheet else sheet + 1
        return Cut(CutKind.VERTICAL_SEGMENT, (bp.conjugate_x, bp.x),
                   (sheet, partner))

    def cuts_for(self, n: BranchIndex) -> tuple[Cut, ...]:
        """The cuts of sheet n in the finite-cuts convention."""
        validate_branch(n)
        if self.scheme is not CutScheme.FINITE_CUTS:
            raise ValueError(
                "the cuts-to-minus-infinity atlas is held for documentation "
                "and limit tables only; continuation targets finite cuts"
            )
        if abs(n) > self.max_sheet:
            raise ValueError(
                f"sheet {n} needs branch point {abs(n)}; atlas holds {self.max_sheet}"
            )
        if n in self._cuts:
            return self._cuts[n]
        m = abs(n)
        if m == 1:
            real_lo = self.branch_points[0].x.real
            cuts = (
                Cut(CutKind.REAL_SEGMENT, (complex(real_lo, 0.0), 0j), (n, -n)),
                self._vertical_cut(1, n),
            )
        else:
            real_lo = self.branch_points[m - 1].x.real
            real_hi = self.branch_points[m - 2].x.real
            cuts = (
                Cut(CutKind.REAL_SEGMENT,
                    (complex(real_lo, 0.0), complex(real_hi, 0.0)), (n, -n)),
                self._vertical_cut(m - 1, n),
                self._vertical_cut(m, n),
            )
        self._cuts[n] = cuts
        return cuts

    def nearest_branch_distance(self, z: complex) -> float:
        return min(abs(z - p) for p in self._bp_locations)

    def distance_to_cuts(self, z: complex, n: BranchIndex) -> float:
        return min(c.distance(z) for c in self.cuts_for(n))

    @staticmethod
    def sheet_limits(n: BranchIndex, scheme: CutScheme) -> dict:
        """Documented limit values labeling sheet n in each convention."""
        validate_branch(n)
        sgn = 1.0 if n > 0 else -1.0
        at_inf = sgn * (abs(n) - 0.5) * math.pi
        if scheme is CutScheme.FINITE_CUTS:
            return {"at_infinity": at_inf}
        if scheme is CutScheme.CUTS_TO_MINUS_INF:
            return {"at_infinity": at_inf, "at_plus_zero": sgn * (abs(n) - 1) * math.pi}
        return {"at_plus_zero": sgn * (abs(n) - 1) * math.pi,
                "at_minus_zero": n * math.pi}

    # -- continuation ------------------------------------------------------

    def build_waypoints(self, z: complex, n: BranchIndex,
                        anchor_radius: float | None = None) -> tuple[complex, ...]:
        """Cut-avoiding route from the real anchor to z on sheet n.

        Straight if the direct segment is clear; otherwise detour over (or
        under, matching the half-plane of z) the tallest vertical cut of the
        sheet and descend vertically onto z.  If the descent line would pass
        within 1e-6 of a branch point the final approach is horizontal from
        the right instead.
        """
        R = anchor_radius or 10.0 * (1.0 + abs(z))
        start = complex(R, 0.0)
        cuts = self.cuts_for(n)
        if not any(c.crossing(start, z) for c in cuts):
            return (start, z)
        top = self.branch_points[abs(n) - 1].x.imag
        s = (1.0 if z.imag >= 0.0 else -1.0) * (top + 1.0)
        # the vertical descent onto z must not brush a branch point of this
        # sheet's own cuts; if it would, approach horizontally instead,
        # staying on z's side of the hazardous cut line
        hazard = None
        for j in (abs(n) - 1, abs(n)):
            if j < 1:
                continue
            bp = self.branch_points[j - 1]
            if abs(z.real - bp.x.real) < 1e-6 and abs(z.imag) <= bp.x.imag + 1e-6:
                hazard = bp
                break
        if hazard is None:
            return (start, complex(R, s), complex(z.real, s), z)
        sign = 1.0 if z.real >= hazard.x.real else -1.0
        off = z.real + sign * 0.25
        return (start, complex(R, s), complex(off, s), complex(off, z.imag), z)

    def continue_from_anchor(self, z: complex, n: BranchIndex,
                             ctrl: StepControl = DEFAULT_STEP_CONTROL,
                             cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
        """Continued value of sheet n at z; no proximity guards applied."""
        validate_branch(n)
        if n < 0:
            return -self.continue_from_anchor(z, -n, ctrl, cfg)
        waypoints = self.build_waypoints(z, n)
        R = waypoints[0]
        # anchor at the real-axis value, within ~(n-1/2)*pi^2/(2R) of the
        # sheet limit sgn(n)*(|n|-1/2)*pi at infinity
        y = complex(eval_real(R.real, n, cfg), 0.0)
        h_base = max(0.1 * (1.0 + abs(z)), 1e-3)
        cur = R
        for target in waypoints[1:]:
            y = _walk_segment(cur, y, target, self, ctrl, h_base=h_base)
            cur = target
        return y


# ---------------------------------------------------------------------------
# low-level continuation
# ---------------------------------------------------------------------------

def _refine(x: complex, y: complex, cfg: SolverConfig = DEFAULT_CONFIG,
            iters: int = 16) -> complex:
    """Polish y toward the root of w*tan(w) = x by Halley iteration."""
    for _ in range(iters):
        y_new = halley_step(x, y)
        if abs(y_new - y) <= 1e-15 * (1.0 + abs(y_new)):
            return y_new
        y = y_new
    if defining_residual(x, y) <= cfg.tol * (1.0 + abs(x)):
        return y
    raise NoConvergence(f"Halley polish stalled at x={x!r}")


def _predict(z: complex, y: complex, dz: complex) -> complex:
    """Euler predictor using dw/dx = w/(x + x^2 + w^2); identity near x_n."""
    q = y * y + z * z + z
    if abs(q) < 1e-12:
        return y
    return y + y / q * dz


def _walk_segment(z0: complex, y0: complex, z1: complex, atlas: SheetAtlas,
                  ctrl: StepControl = DEFAULT_STEP_CONTROL,
                  h_base: float | None = None,
                  step_filter: Callable[[complex, complex], bool] | None = None,
                  on_step: Callable[[complex, complex, complex], None] | None = None,
                  ) -> complex:
    """Continue (z0, y0) to z1 with adaptive steps; returns the value at z1.

    `step_filter` may veto a proposed sub-step (forcing it to shrink);
    `on_step` observes each accepted sub-step.  Raises StepTooLarge when the
    step would have to fall below ctrl.min_step.
    """
    z, y = z0, y0
    h_cap = h_base if h_base is not None else ctrl.max_step
    while z != z1:
        rem = z1 - z
        dist = atlas.nearest_branch_distance(z)
        allowed = min(h_cap, ctrl.bp_factor * dist if dist > 0.0 else ctrl.min_step)
        take = min(abs(rem), max(allowed, ctrl.min_step))
        while True:
            z_new = z1 if take >= abs(rem) else z + rem / abs(rem) * take
            ok = step_filter is None or step_filter(z, z_new)
            if ok:
                try:
                    y_new = _refine(z_new, _predict(z, y, z_new - z))
                    ok = abs(y_new - y) <= ctrl.dy_max
                except (PoleProximity, NoConvergence):
                    ok = False
            if ok:
                break
            take *= ctrl.shrink
            if take < ctrl.min_step:
                raise StepTooLarge(
                    f"continuation step fell below {ctrl.min_step:g} near z={z!r}"
                )
        if on_step is not None:
            on_step(z, z_new, y_new)
        z, y = z_new, y_new
    return y


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def eval_complex(z: complex, n: BranchIndex, atlas: SheetAtlas,
                 cfg: SolverConfig | None = None) -> BranchedValue:
    """Sheet-n value at z in the finite-cuts convention.

    The value is continued from a real anchor R >= 10*(1+|z|) where the
    sheet is within machine precision of its limit sgn(n)*(|n|-1/2)*pi.

    Raises
    ------
    OnCut
        If z lies within 1e-10 of a cut of sheet n, or within 1e-3 of one of
        the sheet's branch points (where continuation accuracy degrades; use
        `boundary_value` / `trace_path` for on-cut and near-point work).
    """
    validate_branch(n)
    cfg = cfg or DEFAULT_CONFIG
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteArgument(f"z must be finite, got {z!r}")
    if n < 0:
        inner = eval_complex(z, -n, atlas, cfg)
        return BranchedValue(x=z, y=-inner.y, branch=n, scheme=atlas.scheme,
                             residual=inner.residual)
    if atlas.distance_to_cuts(z, n) < CUT_GUARD:
        raise OnCut(f"z={z!r} lies on a cut of sheet {n}")
    m = abs(n)
    for j in (m - 1, m):
        if j < 1:
            continue
        bp = atlas.branch_points[j - 1]
        if min(abs(z - bp.x), abs(z - bp.conjugate_x)) < BRANCH_POINT_GUARD:
            raise OnCut(f"z={z!r} is within {BRANCH_POINT_GUARD:g} of branch point "
                        f"x_{j}; too close for direct evaluation")
    y = atlas.continue_from_anchor(z, n, cfg=cfg)
    res = defining_residual(z, y)
    # near the tan pole (large real z on low sheets) the map y -> y*tan(y)
    # is so steep that a half-ulp of y already produces a large residual;
    # accept down to that conditioning floor, |d(y tan y)/dy| * ulp
    t = cmath.tan(y)
    steepness = abs(y * (1.0 + t * t) + t)
    floor = 4.0 * 2.220446049250313e-16 * steepness * (1.0 + abs(y))
    if res > max(cfg.tol * (1.0 + abs(z)), floor):
        raise NoConvergence(f"residual {res:.3e} above tolerance at z={z!r}")
    return BranchedValue(x=z, y=y, branch=n, scheme=atlas.scheme, residual=res)


def trace_path(path: ContinuationPath, start_sheet: BranchIndex,
               atlas: SheetAtlas) -> list[tuple[complex, complex, BranchIndex]]:
    """Continue along a waypoint path, reporting sheet-label transitions.

    The continued value is a single analytic germ; the sheet label flips
    whenever a sub-step crosses a cut of the current sheet, following the
    cut's `connects` pair.  Returns the accepted steps as
    (point, value, sheet) records, starting with the initial point.
    """
    validate_branch(start_sheet)
    ctrl = path.step_control
    z0 = path.waypoints[0]
    y0 = atlas.continue_from_anchor(z0, start_sheet, ctrl)
    records = [(z0, y0, start_sheet)]
    state = {"sheet": start_sheet}

    def crossings(za: complex, zb: complex) -> list[tuple[float, Cut]]:
        found = []
        for cut in atlas.cuts_for(state["sheet"]):
            t = cut.crossing(za, zb)
            if t is not None:
                found.append((t, cut))
        return found

    def step_filter(za: complex, zb: complex) -> bool:
        return len(crossings(za, zb)) <= 1

    def on_step(za: complex, zb: complex, yb: complex) -> None:
        hits = crossings(za, zb)
        if hits:
            _, cut = hits[0]
            a, b = cut.connects
            state["sheet"] = b if state["sheet"] == a else a
        records.append((zb, yb, state["sheet"]))

    z, y = z0, y0
    for target in path.waypoints[1:]:
        y = _walk_segment(z, y, target, atlas, ctrl,
                          step_filter=step_filter, on_step=on_step)
        z = target
    return records


def _locate_cut(point: complex, n: BranchIndex, atlas: SheetAtlas,
                side: "Side | None" = None, tol: float = 1e-9) -> Cut:
    """Find a cut of sheet n containing the point.  Near the junction where
    the real and vertical cuts meet, a point can sit on both; the requested
    side disambiguates (UPPER/LOWER -> real segment, LEFT/RIGHT -> vertical)."""
    matches = []
    for cut in atlas.cuts_for(n):
        if cut.kind is CutKind.REAL_SEGMENT:
            lo, hi = cut.endpoints[0].real, cut.endpoints[1].real
            if abs(point.imag) <= tol and lo - tol <= point.real <= hi + tol:
                matches.append(cut)
        else:
            a = cut.endpoints[0].real
            hi = max(abs(cut.endpoints[0].imag), abs(cut.endpoints[1].imag))
            if abs(point.real - a) <= tol and abs(point.imag) <= hi + tol:
                matches.append(cut)
    if side is not None:
        wanted = (CutKind.REAL_SEGMENT if side in (Side.UPPER, Side.LOWER)
                  else CutKind.VERTICAL_SEGMENT)
        sided = [c for c in matches if c.kind is wanted]
        if sided:
            return sided[0]
        if matches:
            raise ValueError(
                f"side {side.value} does not apply to the cut kind at {point!r}"
            )
    elif matches:
        return matches[0]
    raise NotOnCut(f"{point!r} is not on a cut of sheet {n}")


_SIDE_OFFSETS = {
    Side.UPPER: 1j,
    Side.LOWER: -1j,
    Side.LEFT: -1.0,
    Side.RIGHT: 1.0,
}

BOUNDARY_EPSILONS = (1e-4, 1e-5, 1e-6)


def _extrapolate_to_zero(eps: Sequence[float], vals: Sequence[complex]) -> complex:
    """Polynomial (Lagrange) extrapolation of vals(eps) to eps = 0."""
    total = 0j
    for i, (ei, vi) in enumerate(zip(eps, vals)):
        w = 1.0
        for j, ej in enumerate(eps):
            if j != i:
                w *= ej / (ej - ei)
        total += w * vi
    return total


def boundary_value(point: complex, n: BranchIndex, side: Side,
                   atlas: SheetAtlas, eps: Sequence[float] = BOUNDARY_EPSILONS,
                   ) -> complex:
    """One-sided limit of sheet n on a cut.

    Continues to the point offset by each epsilon toward the requested side
    (largest epsilon from the anchor, smaller ones by short local walks that
    stay on that side) and extrapolates epsilon -> 0 through the samples.
    """
    validate_branch(n)
    point = complex(point)
    _locate_cut(point, n, atlas, side=side)
    direction = _SIDE_OFFSETS[side]
    eps = sorted(eps, reverse=True)
    z = point + direction * eps[0]
    y = atlas.continue_from_anchor(z, n)
    vals = [y]
    for e in eps[1:]:
        z_next = point + direction * e
        y = _walk_segment(z, y, z_next, atlas)
        vals.append(y)
        z = z_next
    return _extrapolate_to_zero(eps, vals)


def discontinuity_delta0(u: float, atlas: SheetAtlas) -> float:
    """Imaginary part of the upper boundary value on the sheet-1 real cut.

    Defined for Re x_1 <= u <= 0; equals (1/2i)[w(u+i0) - w(u-i0)] by
    reflection symmetry.  The value solves p*tanh(p) = -u for the purely
    imaginary boundary limit w = i*p.
    """
    a = atlas.branch_points[0].x.real
    if not (a - 1e-12 <= u <= 0.0 + 1e-12):
        raise OutOfCutRange(f"u={u} outside the real cut [{a}, 0]")
    return boundary_value(complex(u, 0.0), 1, Side.UPPER, atlas).imag


def discontinuity_delta1(v: float, atlas: SheetAtlas) -> complex:
    """Half the right-minus-left jump across the sheet-1 vertical cut at
    height v, 0 <= v <= Im x_1.  Vanishes like sqrt(Im x_1 - v) at the
    branch point where the two boundary values merge."""
    bp = atlas.branch_points[0]
    a, b = bp.x.real, bp.x.imag
    if not (-1e-12 <= v <= b + 1e-12):
        raise OutOfCutRange(f"v={v} outside [0, {b}]")
    # v = 0 is the junction with the real cut, where the vertical boundary
    # values are only defined as limits from above; nudge onto the cut
    point = complex(a, min(max(v, 1e-9), b))
    right = boundary_value(point, 1, Side.RIGHT, atlas)
    left = boundary_value(point, 1, Side.LEFT, atlas)
    return 0.5 * (right - left)


# ---------------------------------------------------------------------------
# dispersion relation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DispersionConfig:
    """Quadrature layout for the dispersion reconstruction.

    Both cut integrals are transformed so the integrand vanishes smoothly at
    the branch-point endpoints (u = -s^2 absorbs the sqrt(-u) behavior of D0
    at the origin, v = b - t^2 the sqrt(b - v) vanishing of D1 at x_1), then
    integrated by composite Gauss-Legendre panels.  The discontinuity tables
    are computed once per atlas and reused for every z; the coarse layout
    provides the error estimate.
    """

    panels: int = 6
    nodes: int = 24
    coarse_panels: int = 3
    coarse_nodes: int = 16
    abs_tol: float = 1e-6
    offsets: tuple[float, float] = (1e-6, 5e-7)


DEFAULT_DISPERSION = DispersionConfig()


def _panel_nodes(length: float, panels: int, nodes: int):
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    pts, wts = [], []
    width = length / panels
    for p in range(panels):
        lo = p * width
        pts.append(lo + 0.5 * width * (xs + 1.0))
        wts.append(0.5 * width * ws)
    return np.concatenate(pts), np.concatenate(wts)


def _march_values(points: list[complex], anchor_y: complex, anchor_z: complex,
                  atlas: SheetAtlas) -> list[complex]:
    """Continue an anchored value through a list of nearby points in order."""
    out = []
    z, y = anchor_z, anchor_y
    for target in points:
        y = _walk_segment(z, y, target, atlas)
        out.append(y)
        z = target
    return out


def _delta_tables(atlas: SheetAtlas, panels: int, nodes: int,
                  offsets: tuple[float, float]):
    key = (panels, nodes, offsets)
    if key in atlas._disp_tables:
        return atlas._disp_tables[key]
    bp = atlas.branch_points[0]
    a, b = bp.x.real, bp.x.imag
    e1, e2 = offsets

    # real-cut table: nodes u = -s^2, marched from near the origin toward a
    s_nodes, s_wts = _panel_nodes(math.sqrt(-a), panels, nodes)
    us = -s_nodes ** 2
    order = np.argsort(us)[::-1]                      # u descending: 0- -> a
    pts1 = [complex(us[i], e1) for i in order]
    z0 = pts1[0]
    y0 = atlas.continue_from_anchor(z0, 1)
    vals1 = _march_values(pts1[1:], y0, z0, atlas)
    vals1.insert(0, y0)
    d0 = np.empty(len(us))
    for slot, i in enumerate(order):
        z_hi = pts1[slot]
        y_lo = _walk_segment(z_hi, vals1[slot], complex(z_hi.real, e2), atlas)
        # linear eps -> 0 extrapolation of the imaginary part
        v1, v2 = vals1[slot].imag, y_lo.imag
        d0[i] = v2 + (v2 - v1) * e2 / (e1 - e2)

    # vertical-cut table: nodes v = b - t^2, marched downward from near x_1.
    # Anchor each side by descending well clear of the cut (|Re - a| = 0.3)
    # and then walking horizontally inward at the top node's height; this is
    # side-correct by construction, whereas descending at |Re - a| = eps
    # would thread the needle past x_1 itself.
    t_nodes, t_wts = _panel_nodes(math.sqrt(b), panels, nodes)
    vs = b - t_nodes ** 2
    order_v = np.argsort(vs)[::-1]                    # v descending: b- -> 0+
    d1 = np.empty(len(vs), dtype=complex)
    side_vals = {}
    for sgn in (+1.0, -1.0):
        pts = [complex(a + sgn * e1, vs[i]) for i in order_v]
        clear = complex(a + sgn * 0.3, pts[0].imag)
        y0 = atlas.continue_from_anchor(clear, 1)
        y0 = _walk_segment(clear, y0, pts[0], atlas)
        outer = _march_values(pts[1:], y0, pts[0], atlas)
        outer.insert(0, y0)
        inner = []
        for slot in range(len(pts)):
            z_hi = pts[slot]
            inner.append(_walk_segment(z_hi, outer[slot],
                                       complex(a + sgn * e2, z_hi.imag), atlas))
        side_vals[sgn] = (outer, inner)
    for slot, i in enumerate(order_v):
        r1, r2 = side_vals[+1.0][0][slot], side_vals[+1.0][1][slot]
        l1, l2 = side_vals[-1.0][0][slot], side_vals[-1.0][1][slot]
        jump1, jump2 = 0.5 * (r1 - l1), 0.5 * (r2 - l2)
        d1[i] = jump2 + (jump2 - jump1) * e2 / (e1 - e2)

    tables = (us, 2.0 * s_nodes * s_wts, d0, vs, 2.0 * t_nodes * t_wts, d1)
    atlas._disp_tables[key] = tables
    return tables


def _assemble(z: complex, tables, a: float) -> complex:
    us, w0, d0, vs, w1, d1 = tables
    i0 = np.sum(w0 * d0 / (us - z))
    i1 = np.sum(w1 * (d1 / (a + 1j * vs - z) + np.conj(d1) / (a - 1j * vs - z)))
    return 0.5 * math.pi + (i0 - i1) / math.pi


def dispersion_eval(z: complex, atlas: SheetAtlas,
                    quad_cfg: DispersionConfig | None = None) -> complex:
    """Sheet-1 value at z rebuilt from the cut discontinuities alone.

    Matches `eval_complex(z, 1, atlas)` wherever z keeps a reasonable
    distance from the cuts (the integrals' kernels are Cauchy-type); the
    large-|z| limit is pi/2 since the integral terms decay like 1/z.

    Raises QuadratureFailure when the fine/coarse quadrature disagreement
    exceeds quad_cfg.abs_tol.
    """
    cfg = quad_cfg or DEFAULT_DISPERSION
    z = complex(z)
    a = atlas.branch_points[0].x.real
    fine = _assemble(z, _delta_tables(atlas, cfg.panels, cfg.nodes, cfg.offsets), a)
    coarse = _assemble(z, _delta_tables(atlas, cfg.coarse_panels,
                                        cfg.coarse_nodes, cfg.offsets), a)
    if abs(fine - coarse) > cfg.abs_tol:
        raise QuadratureFailure(
            f"dispersion quadrature error estimate {abs(fine - coarse):.3e} "
            f"exceeds {cfg.abs_tol:g} at z={z!r}"
        )
    return fine
