"""Infinite square well with an energy-dependent contact interaction.

A particle in a box of width a with the extra potential
-lambda * E * delta(xi - a/2) keeps its odd eigenstates (they vanish at the
center) while the even ones satisfy

    (k*a/2) * tan(k*a/2) = a / lambda ,

so the even wavenumbers are k_n = (2/a) * W^(n)(a/lambda) in terms of the
branches of the w*tan(w) = x solution.  Even wavefunctions are
A sin(k xi) mirrored about the center; the derivative jump across the
contact term fixes the eigencondition, and the natural normalization is
the generalized inner product with weight N = 1 + lambda*delta(xi - a/2)
(the problem is H0 psi = E N psi, so eigenstates are orthonormal in N).

The same structure yields variational upper bounds on the ground branch:
with trial functions sin(xi) and sin(xi) + b sin(3 xi) at a = pi, the
Rayleigh quotient of the generalized problem gives the closed-form bounds
implemented in `variational_bound_1` / `variational_bound_2`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import BranchIndex, SolverConfig, eval_real, validate_branch
from .errors import DegenerateState, DomainViolation, NonPositiveNorm

__all__ = [
    "Parity",
    "WellModel",
    "SpectrumEntry",
    "Wavefunction",
    "spectrum",
    "wavefunction",
    "variational_bound_1",
    "variational_bound_2",
    "rayleigh_quotient",
]


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class WellModel:
    """Well of width a with contact strength lambda (positive = attractive,
    the strength scales with the state's energy)."""

    width_a: float
    lam: float
    hbar2_over_2m: float = 1.0

    def __post_init__(self):
        if not self.width_a > 0:
            raise ValueError("well width must be positive")
        if not self.hbar2_over_2m > 0:
            raise ValueError("hbar^2/2m must be positive")


@dataclass(frozen=True)
class SpectrumEntry:
    index: int
    parity: Parity
    k: float
    E: float
    branch: BranchIndex | None  # set for even states only


@dataclass(frozen=True)
class Wavefunction:
    """Piecewise amplitudes: A_I sin(k xi) left of center, A_II sin(k (a - xi))
    right of it."""

    A_I: float
    A_II: float
    k: float
    width_a: float

    def __call__(self, xi: float) -> float:
        a = self.width_a
        if not 0.0 <= xi <= a:
            return 0.0
        if xi < 0.5 * a:
            return self.A_I * math.sin(self.k * xi)
        return self.A_II * math.sin(self.k * (a - xi))


def spectrum(model: WellModel, count: int,
             cfg: SolverConfig | None = None) -> list[SpectrumEntry]:
    """Lowest `count` states: even levels k_n = (2/a) W^(n)(a/lambda) merged
    with the unaffected odd levels k = 2*m*pi/a, sorted by energy.

    lambda = 0 is the unperturbed well: even levels reduce to their
    (2n-1)*pi/a limits (the branch value at infinity).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    a = model.width_a
    entries = []
    for n in range(1, count + 1):
        if model.lam == 0.0:
            k = (2.0 * n - 1.0) * math.pi / a
        else:
            k = 2.0 / a * eval_real(a / model.lam, n, cfg)
        entries.append((k, Parity.EVEN, n))
    for m in range(1, count + 1):
        entries.append((2.0 * m * math.pi / a, Parity.ODD, None))
    entries.sort(key=lambda e: e[0])
    out = []
    for i, (k, parity, branch) in enumerate(entries[:count]):
        out.append(SpectrumEntry(index=i, parity=parity, k=k,
                                 E=model.hbar2_over_2m * k * k, branch=branch))
    return out


def wavefunction(model: WellModel, entry: SpectrumEntry) -> Wavefunction:
    """Amplitudes for one spectrum entry, normalized in the generalized
    inner product <psi| 1 + lambda*delta(xi - a/2) |psi> = 1 (plain L^2 for
    odd states, whose center value vanishes)."""
    a, k = model.width_a, entry.k
    half = 0.5 * k * a
    s, c = math.sin(half), math.cos(half)
    if abs(s) < 1e-14 and abs(c) < 1e-14:
        raise DegenerateState(f"sin and cos of k*a/2 both vanish at k={k}")
    if entry.parity is Parity.ODD:
        # psi = A sin(k xi) globally; the mirrored amplitude carries the
        # sign flip sin(k(a - xi)) = -sin(k xi) at k = 2 m pi / a
        norm_sq = 0.5 * a
        A = 1.0 / math.sqrt(norm_sq)
        return Wavefunction(A_I=A, A_II=-A, k=k, width_a=a)
    # even: continuity at the center gives A_I = A_II
    norm_sq = 0.5 * a - math.sin(k * a) / (2.0 * k) + model.lam * s * s
    if norm_sq <= 0.0:
        # strongly repulsive regime: fall back to the plain L2 norm
        norm_sq = 0.5 * a - math.sin(k * a) / (2.0 * k)
    A = 1.0 / math.sqrt(norm_sq)
    return Wavefunction(A_I=A, A_II=A, k=k, width_a=a)


def jump_residual(model: WellModel, entry: SpectrumEntry,
                  psi: Wavefunction) -> float:
    """Defect of the derivative-jump condition across the contact term,

        |(A_II + A_I) k cos(ka/2) - k^2 lambda A_I sin(ka/2)| ,

    identically zero for exact eigenstates (odd states satisfy it with both
    sides vanishing)."""
    k, a = entry.k, model.width_a
    half = 0.5 * k * a
    return abs((psi.A_II + psi.A_I) * k * math.cos(half)
               - k * k * model.lam * psi.A_I * math.sin(half))


def variational_bound_1(x: float) -> float:
    """Ground-branch upper bound (pi/2) sqrt(x/(x+2)) from the unperturbed
    ground trial state; valid for 1/x > -1/2, i.e. x >= 0 or x < -2."""
    if x < 0.0 and x >= -2.0:
        raise DomainViolation(f"bound valid for 1/x > -1/2; x={x} is outside")
    if x == 0.0:
        return 0.0
    return 0.5 * math.pi * math.sqrt(x / (x + 2.0))


def variational_bound_2(x: float) -> float:
    """Improved upper bound from the two-term trial state
    sin(xi) + b sin(3 xi), minimized over b:

        (3 pi/2) sqrt( x / (5x + 10 + 2 sgn(x) sqrt(25 + 16x + 4x^2)) )

    The square-root sign is fixed by b -> 0 as x -> +-infinity.  Total on
    the reals (the inner discriminant is negative); near 0+ it behaves as
    1.0537 sqrt(x) and its 0- limit is pi*sqrt(5)/2."""
    if x == 0.0:
        return 0.0
    sgn = 1.0 if x > 0.0 else -1.0
    den = 5.0 * x + 10.0 + 2.0 * sgn * math.sqrt(25.0 + 16.0 * x + 4.0 * x * x)
    return 1.5 * math.pi * math.sqrt(x / den)


def rayleigh_quotient(x: float, b: float) -> float:
    """Generalized Rayleigh quotient of the trial state sin(xi) + b sin(3 xi)
    at well width pi, expressed as a bound on the squared ground value:

        Q(x, b) = (pi^2/4) (1 + 9 b^2) / [ (1 + b^2) + (2/x)(1 - b)^2 ]

    Q(x, b) >= W^(1)(x)^2 for every admissible b; minimizing over b and
    taking the square root reproduces `variational_bound_2`, and b = 0
    reproduces the square of `variational_bound_1`."""
    if x == 0.0:
        raise DomainViolation("x = 0 is outside the quotient's domain")
    den = (1.0 + b * b) + 2.0 / x * (1.0 - b) ** 2
    if den <= 0.0:
        raise NonPositiveNorm(
            f"generalized norm denominator {den:.3e} <= 0 at x={x}, b={b}"
        )
    return 0.25 * math.pi ** 2 * (1.0 + 9.0 * b * b) / den
