"""Core types and real-axis evaluation of the branches of w*tan(w) = x.

The function evaluated here is the multivalued solution w of

    w * tan(w) = x .

Branches are labeled by a nonzero integer n fixed by the value at infinity,
w -> sgn(n) * (|n| - 1/2) * pi.  On the real axis the branch windows are

    n >= 1, x > 0:   w in ((n-1)*pi, (n-1/2)*pi)
    n >= 1, x < 0:   w in ((n-1/2)*pi, n*pi)

and negative branches follow from the odd symmetry w(-n) = -w(n).  x = 0 is
a branch point: the two one-sided limits differ, so exact zero requires an
explicit side choice.

Root finding works on g(w) = w*sin(w) - x*cos(w), which shares its zeros
with w*tan(w) - x wherever cos(w) != 0 but stays finite across the tan
poles at the window edges.  Internally the window is shifted so the
bracket endpoints are exact in floating point.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import (
    AtBranchPoint,
    NoConvergence,
    NonFiniteArgument,
    PoleProximity,
    SignedZeroRequired,
)

__all__ = [
    "BranchIndex",
    "CutScheme",
    "SolverConfig",
    "BranchedValue",
    "DEFAULT_CONFIG",
    "validate_branch",
    "eval_real",
    "halley_step",
    "derivative",
    "second_derivative",
    "branch_identity_residual",
    "defining_residual",
]

HALF_PI = 0.5 * math.pi

# |cos(w)| below this triggers PoleProximity in halley_step.
POLE_GUARD = 1e-8

# |w^2 + x^2 + x| below this means the derivative formulas are blowing up.
BRANCH_POINT_GUARD = 1e-4

# Branch index: any nonzero signed integer.
BranchIndex = int


def validate_branch(n: int) -> int:
    """Return n unchanged if it is a valid branch label (nonzero integer)."""
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise TypeError(f"branch index must be an integer, got {n!r}")
    if n == 0:
        raise ValueError("branch index 0 does not exist; branches are +-1, +-2, ...")
    return n


class CutScheme(enum.Enum):
    """The three documented conventions for making each branch single valued.

    REAL_AXIS        -- real-axis convention: windows as in the module
                        docstring, continuous in x except at x = 0.
    CUTS_TO_MINUS_INF -- every cut runs from a branch point x_n horizontally
                        to Re x -> -infinity; sheets labeled by the limits at
                        x -> +infinity and x -> +0.
    FINITE_CUTS      -- each branch point x_n is joined to its conjugate by a
                        vertical segment, plus one finite real-axis segment
                        per sheet; infinity is a regular point of every sheet.
    """

    REAL_AXIS = "real"
    CUTS_TO_MINUS_INF = "cuts-to-minus-infinity"
    FINITE_CUTS = "finite-cuts"


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances for the root solvers.

    tol is a relative residual target: convergence means
    |w*tan(w) - x| <= tol * (1 + |x|).
    """

    tol: float = 1e-13
    max_iter: int = 60
    bracket_fallback: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class BranchedValue:
    """A function value tagged with the branch and cut scheme that produced it."""

    x: complex
    y: complex
    branch: BranchIndex
    scheme: CutScheme
    residual: float


def defining_residual(x: complex, y: complex) -> float:
    """|y*tan(y) - x|, the defining-equation residual."""
    if isinstance(x, complex) or isinstance(y, complex):
        return abs(y * cmath.tan(y) - x)
    return abs(y * math.tan(y) - x)


# ---------------------------------------------------------------------------
# real-axis solver
# ---------------------------------------------------------------------------

def _seed_branch1_positive(x: float) -> float:
    """Seed for branch 1, x > 0: series about 0 below the split 3.5, about
    infinity above it (same split as the piecewise Chebyshev model)."""
    if x > 3.5:
        ix = 1.0 / x
        return HALF_PI * (1.0 - ix * (1.0 - ix * (1.0 - 0.17753296657588678 * ix)))
    s = math.sqrt(x)
    w = s * (1.0 - x / 6.0 + 11.0 * x * x / 360.0 - 17.0 * x ** 3 / 5040.0)
    return min(max(w, 0.5 * s), HALF_PI * 0.999999)


def _solve_shifted(C: float, s: int, absx: float, tol: float, max_iter: int,
                   bracket: bool, t0: float) -> float:
    """Root of G(t) = (C + s*t)*tan(t) - absx for t in (0, pi/2).

    The window is shifted so that w = C + s*t; both G(0) = -absx and
    G(pi/2-) = +infinity have exact signs, which keeps the bracket valid
    for arbitrarily small |x|.  Halley steps with a bisection safety net.
    """
    lo, hi = 0.0, HALF_PI
    t = t0 if lo < t0 < hi else 0.5 * (lo + hi)
    target = tol * (1.0 + absx)
    best_t, best_g = t, math.inf
    for _ in range(max_iter):
        tan_t = math.tan(t)
        y = C + s * t
        G = y * tan_t - absx
        if abs(G) < best_g:
            best_t, best_g = t, abs(G)
        if abs(G) <= target:
            return t
        if G < 0.0:
            lo = t
        else:
            hi = t
        sec2 = 1.0 + tan_t * tan_t
        Gp = s * tan_t + y * sec2
        Gpp = 2.0 * sec2 * (s + y * tan_t)
        denom = 2.0 * Gp * Gp - G * Gpp
        step_ok = denom != 0.0 and math.isfinite(denom)
        if step_ok:
            t_new = t - 2.0 * G * Gp / denom
            step_ok = math.isfinite(t_new) and lo < t_new < hi
        if not step_ok:
            if not bracket:
                raise NoConvergence(
                    f"Halley iterate left the branch window at t={t!r} "
                    "and bracket_fallback is disabled"
                )
            t_new = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * math.ulp(hi):
            return best_t
        t = t_new
    if best_g <= target or hi - lo <= 8.0 * math.ulp(hi):
        return best_t
    raise NoConvergence(
        f"no convergence after {max_iter} iterations (|residual|={best_g:.3e}, "
        f"target {target:.3e})"
    )


def eval_real(x: float, n: BranchIndex, cfg: SolverConfig | None = None,
              side: int | None = None) -> float:
    """Evaluate branch n of w*tan(w) = x for real x.

    Parameters
    ----------
    x : float
        Finite real argument.
    n : int
        Branch label, nonzero.  Negative branches delegate through the odd
        symmetry w(x, -n) = -w(x, n).
    cfg : SolverConfig, optional
    side : {+1, -1}, optional
        Required only at x = 0 exactly, where the two one-sided limits
        differ: +1 selects lim x->0+ = sgn(n)*(|n|-1)*pi, -1 selects
        lim x->0- = n*pi.

    Returns
    -------
    float
        The unique root in the branch window; satisfies
        |w*tan(w) - x| <= tol*(1+|x|).
    """
    validate_branch(n)
    if cfg is None:
        cfg = DEFAULT_CONFIG
    if not math.isfinite(x):
        raise NonFiniteArgument(f"x must be finite, got {x!r}")
    if n < 0:
        return -eval_real(x, -n, cfg, side)
    if x == 0.0:
        if side is None:
            raise SignedZeroRequired(
                "x = 0 is a branch point; pass side=+1 for the x->0+ limit "
                "or side=-1 for the x->0- limit"
            )
        if side > 0:
            return (n - 1) * math.pi
        return n * math.pi
    if x > 0.0:
        C = (n - 1) * math.pi
        t0 = _seed_branch1_positive(x) if n == 1 else math.atan(x / C)
        t = _solve_shifted(C, +1, x, cfg.tol, cfg.max_iter, cfg.bracket_fallback, t0)
        return C + t
    C = n * math.pi
    t0 = math.atan(-x / C)
    t = _solve_shifted(C, -1, -x, cfg.tol, cfg.max_iter, cfg.bracket_fallback, t0)
    return C - t


# ---------------------------------------------------------------------------
# Halley kernel and derivatives
# ---------------------------------------------------------------------------

def halley_step(x: complex, y: complex) -> complex:
    """One Halley update toward a root of f(w) = x - w*tan(w), at fixed x.

    Third-order one-point refinement:

        w' = w + (x - w*tan w) / [ w*(1+tan^2 w) + tan w
             + (w*tan w + 1)*(tan^2 w + 1)/(w*(1+tan^2 w) + tan w) * (x - w*tan w) ]

    Fixed points are exactly the roots of the defining equation.

    Raises
    ------
    PoleProximity
        If |cos y| < 1e-8: the update divides by quantities that are
        singular at the poles of tan; the caller should re-seed or bisect.
    """
    complex_mode = isinstance(x, complex) or isinstance(y, complex)
    cos_ = cmath.cos if complex_mode else math.cos
    tan_ = cmath.tan if complex_mode else math.tan
    if abs(cos_(y)) < POLE_GUARD:
        raise PoleProximity(f"|cos(y)| < {POLE_GUARD:g} at y={y!r}")
    t = tan_(y)
    f = x - y * t
    sec2 = 1.0 + t * t
    den = y * sec2 + t
    if abs(den) < 1e-12 * (1.0 + abs(y)) ** 2:
        raise PoleProximity(f"degenerate Halley denominator at y={y!r}")
    return y + f / (den + (y * t + 1.0) * sec2 / den * f)


def derivative(x: complex, y: complex) -> complex:
    """dw/dx given a consistent pair (x, y) with y*tan(y) = x.

    Equal to y / (x + x^2 + y^2); diverges exactly at the branch points,
    where y^2 + x^2 + x = 0.
    """
    q = y * y + x * x + x
    if abs(q) < BRANCH_POINT_GUARD:
        raise AtBranchPoint(
            f"|y^2 + x^2 + x| = {abs(q):.3e} < {BRANCH_POINT_GUARD:g}; "
            "derivative diverges at a branch point"
        )
    return y / q


def second_derivative(x: complex, y: complex) -> complex:
    """d2w/dx2 for a consistent pair (x, y):

        -2*x*y/(y^2+x^2+x)^2 - 2*y^3/(y^2+x^2+x)^3
    """
    q = y * y + x * x + x
    if abs(q) < BRANCH_POINT_GUARD:
        raise AtBranchPoint(
            f"|y^2 + x^2 + x| = {abs(q):.3e} < {BRANCH_POINT_GUARD:g}; "
            "second derivative diverges at a branch point"
        )
    return -2.0 * x * y / (q * q) - 2.0 * y ** 3 / (q * q * q)


def branch_identity_residual(x: float, n: BranchIndex, y: float) -> float:
    """Consistency residual of the closed-form branch labeling.

    Every real branch value satisfies

        y = sgn(n)*(|n|-1/2)*pi + Theta(-x)*sgn(y)*pi + arg(x - i*y)

    with the principal argument and the step convention Theta(0) = 0.
    Returns |lhs - rhs|; a correct (x, n, y) triple gives ~0.
    """
    validate_branch(n)
    sgn_n = 1.0 if n > 0 else -1.0
    rhs = sgn_n * (abs(n) - 0.5) * math.pi
    if x < 0.0:
        rhs += math.copysign(math.pi, y)
    rhs += math.atan2(-y, x)
    return abs(y - rhs)
