"""Branch points of w*tan(w) = x and their local square-root structure.

All derivatives of the function share the denominator (w^2 + x^2 + x), so
every singularity at finite x solves, together with the defining equation,

    sin(w) cos(w) + w = 0 .

Writing 2w = u + i v with u, v real and eliminating v yields a single real
equation

    tan(u) * arccosh(-u / sin u) = sqrt(u^2 - sin^2 u)

with exactly one root u_n in each interval [(2n-1)*pi, (2n-1/2)*pi],
n = 1, 2, ...; then cosh(v) = -u/sin(u) recovers v.  The stored
representative takes v > 0 (upper half-plane w), which puts x_n = w_n*tan(w_n)
in the upper half-plane as well; the conjugate point is implied.  The trivial
root w = 0 corresponds to the branch point at x = 0 and is not indexed here.

Near any x_n the function behaves like a square root,

    w(x) -> w(x_n) + c * (x - x_n)^(1/2),    c^2 = 1,

which `local_expansion_check` verifies numerically by continuation on small
circles around the point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from scipy.optimize import brentq

from .errors import BracketFailure, ContinuationFailure

__all__ = [
    "BranchPoint",
    "find_branch_point",
    "asymptotic_branch_point",
    "local_expansion_check",
]


@dataclass(frozen=True)
class BranchPoint:
    """One branch point, upper-half-plane representative.

    n : index, 1-based
    u, v : real solution pair, 2*w = u + i*v, v > 0
    y : function value w_n at the branch point
    x : branch point location x_n = w_n * tan(w_n), Im x > 0
    b : the asymptotic scale (2n - 1/2)*pi
    """

    n: int
    u: float
    v: float
    y: complex
    x: complex
    b: float

    @property
    def conjugate_x(self) -> complex:
        return self.x.conjugate()

    @property
    def conjugate_y(self) -> complex:
        return self.y.conjugate()


def _u_equation(u: float) -> float:
    s = math.sin(u)
    return math.tan(u) * math.acosh(-u / s) - math.sqrt(u * u - s * s)


def find_branch_point(n: int) -> BranchPoint:
    """Locate the n-th branch point (n >= 1) by bracketed root finding.

    The bracket [(2n-1)*pi, (2n-1/2)*pi] is shrunk by a relative 1e-9 at
    both ends: the defining expressions are singular exactly at the
    endpoints (sin u = 0 on the left, cos u = 0 on the right), but the sign
    change survives the shrink because the root sits at distance
    ~ln(2*b_n)/b_n from the right endpoint.
    """
    if n < 1:
        raise ValueError("branch point index must be >= 1")
    lo = (2 * n - 1) * math.pi
    hi = (2 * n - 0.5) * math.pi
    shrink = 1e-9 * hi
    lo, hi = lo + shrink, hi - shrink
    flo, fhi = _u_equation(lo), _u_equation(hi)
    if not (flo < 0.0 < fhi):
        raise BracketFailure(
            f"no sign change on the shrunk interval for n={n}: "
            f"F({lo})={flo}, F({hi})={fhi}"
        )
    u = brentq(_u_equation, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    v = math.acosh(-u / math.sin(u))
    y = complex(0.5 * u, 0.5 * v)
    # one complex Newton step on h(w) = sin(w)cos(w) + w cleans the rounding
    # of the (u, v) assembly; h'(w) = cos(2w) + 1
    h = cmath.sin(y) * cmath.cos(y) + y
    y = y - h / (cmath.cos(2 * y) + 1.0)
    x = y * cmath.tan(y)
    return BranchPoint(n=n, u=2 * y.real, v=2 * y.imag, y=y, x=x,
                       b=(2 * n - 0.5) * math.pi)


class AsymptoticBranchPoint(NamedTuple):
    u_approx: float
    x_approx: complex
    y_approx: complex


def asymptotic_branch_point(n: int) -> AsymptoticBranchPoint:
    """Large-n approximation of the n-th branch point.

    With b = (2n - 1/2)*pi:

        u ~ b - ln(2b)/b
        y ~ b/2 + (i/2) ln(2b)
        x ~ -(1/2) ln(2b) - 1/2 + (i/2) b

    each with an O(ln n / n) error.  Crude at n = 1 but bracket-compatible,
    so it doubles as a seed check for the exact solver.
    """
    if n < 1:
        raise ValueError("branch point index must be >= 1")
    b = (2 * n - 0.5) * math.pi
    log2b = math.log(2.0 * b)
    u = b - log2b / b
    y = complex(0.5 * b, 0.5 * log2b)
    x = complex(-0.5 * log2b - 0.5, 0.5 * b)
    return AsymptoticBranchPoint(u, x, y)


def local_expansion_check(n: int, radii: Sequence[float],
                          samples_per_loop: int = 128) -> tuple[float, float]:
    """Fit the local exponent and coefficient of w(x) - w(x_n) near x_n.

    For each radius r the function is continued around the circle
    |x - x_n| = r twice (the local structure is two-sheeted, so the double
    loop closes).  Averaging log|w - w_n| over the uniformly sampled double
    loop kills every oscillatory term of the local expansion, leaving

        mean_theta log|w - w_n| = log|c| + kappa * log r

    exactly, so a linear fit over the radii returns kappa (expected 1/2)
    and c^2 (expected 1).

    Returns
    -------
    (kappa, c_squared)
    """
    from .complex_plane import SheetAtlas, _walk_segment  # local import: avoids cycle

    if n < 1:
        raise ValueError("branch point index must be >= 1")
    if len(radii) < 2:
        raise ValueError("need at least two radii for the fit")
    radii = sorted(radii, reverse=True)
    atlas = SheetAtlas.build(max_sheet=max(2, n + 1))
    bp = atlas.branch_points[n - 1]
    try:
        # anchor on the circle of the largest radius, angle 0
        z0 = bp.x + radii[0]
        y0 = atlas.continue_from_anchor(z0, n=1 if n == 1 else n)
    except Exception as exc:  # pragma: no cover - defensive
        raise ContinuationFailure(f"could not anchor near x_{n}: {exc}") from exc

    log_means = []
    z_cur, y_cur = z0, y0
    for r in radii:
        # spiral inward along the positive-real ray from the previous circle
        target = bp.x + r
        y_cur = _walk_segment(z_cur, y_cur, target, atlas)
        z_cur = target
        logs = []
        z_loop, y_loop = z_cur, y_cur
        y_start = y_loop
        total = 2 * samples_per_loop
        for j in range(1, total + 1):
            ang = 2.0 * math.pi * 2.0 * j / total
            z_next = bp.x + r * cmath.exp(1j * ang)
            y_loop = _walk_segment(z_loop, y_loop, z_next, atlas)
            z_loop = z_next
            logs.append(math.log(abs(y_loop - bp.y)))
        if abs(y_loop - y_start) > 1e-8 * (1.0 + abs(y_start)):
            raise ContinuationFailure(
                f"double loop at r={r} failed to close: |dy|={abs(y_loop - y_start):.3e}"
            )
        log_means.append(sum(logs) / len(logs))

    # least-squares line through (log r, mean log|dy|)
    xs = [math.log(r) for r in radii]
    mx = sum(xs) / len(xs)
    my = sum(log_means) / len(log_means)
    sxx = sum((xi - mx) ** 2 for xi in xs)
    sxy = sum((xi - mx) * (yi - my) for xi, yi in zip(xs, log_means))
    kappa = sxy / sxx
    log_c = my - kappa * mx
    return kappa, math.exp(2.0 * log_c)
