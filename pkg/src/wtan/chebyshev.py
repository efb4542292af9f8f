"""Three-region piecewise Chebyshev model of the principal real branch.

The principal branch is smooth on each of [0, a], [-a, 0), and |x| > a once
the right prefactor is peeled off, so it is represented as

    w(x) = sqrt(x) * sum_k alpha_k T_k(2x/a - 1)      0 <= x <= a
    w(x) = (pi/2)  * sum_k beta_k  T_k(a/x)           |x| > a
    w(x) = pi      * sum_k gamma_k T_k(2x/a + 1)      -a <= x < 0

with the split point a = 3.5 by default.  The middle series covers both
signs of large x in the single variable t = a/x; its t = 0 point is the
regular point at infinity where w = pi/2.  The negative region follows the
real-axis convention (values in (pi/2, pi), approaching pi at 0-).

Coefficients come from Chebyshev-Gauss interpolation at order-matched
nodes; since each prefactor-reduced target is analytic on its interval the
interpolation coefficients converge geometrically to the expansion
coefficients, and the magnitude of the last retained coefficient estimates
the truncation error of the whole region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import SolverConfig, eval_real
from .errors import SamplingFailure, WtanError

__all__ = ["ChebyshevModel", "fit", "eval_cheb"]


@dataclass(frozen=True)
class ChebyshevModel:
    """Piecewise Chebyshev coefficients; see the module docstring for the map."""

    split_a: float
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    gamma: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.alpha)

    def truncation_estimates(self) -> dict[str, float]:
        """Per-region error estimate: |last retained coefficient|."""
        return {
            "alpha": abs(self.alpha[-1]),
            "beta": abs(self.beta[-1]),
            "gamma": abs(self.gamma[-1]),
        }


def _cheb_interp_coeffs(fun, order: int) -> tuple[float, ...]:
    """Chebyshev-Gauss interpolation coefficients for the plain sum
    f(s) = sum_{k=0}^{order-1} c_k T_k(s) (the k = 0 term is not halved)."""
    nodes = [math.cos(math.pi * (j + 0.5) / order) for j in range(order)]
    vals = [fun(s) for s in nodes]
    coeffs = []
    for k in range(order):
        acc = sum(v * math.cos(k * math.pi * (j + 0.5) / order)
                  for j, v in enumerate(vals))
        coeffs.append((1.0 if k == 0 else 2.0) * acc / order)
    return tuple(coeffs)


def fit(split_a: float = 3.5, order: int = 15,
        cfg: SolverConfig | None = None) -> ChebyshevModel:
    """Fit the three regional coefficient lists by node sampling.

    Targets sampled through the real solver: w/sqrt(x) on [0, a];
    (2/pi) w(a/t) against t on [-1, 1] (t = 0 is the limit value 1 at
    infinity; an odd order puts a node exactly there); w/pi on [-a, 0).
    """
    if split_a <= 0:
        raise ValueError("split point must be positive")
    if order < 4:
        raise ValueError("order must be >= 4")
    a = split_a

    def alpha_target(s: float) -> float:
        x = 0.5 * a * (s + 1.0)
        if x == 0.0:
            return 1.0
        return eval_real(x, 1, cfg) / math.sqrt(x)

    def beta_target(t: float) -> float:
        if t == 0.0:
            return 1.0
        return eval_real(a / t, 1, cfg) * 2.0 / math.pi

    def gamma_target(s: float) -> float:
        x = 0.5 * a * (s - 1.0)
        if x == 0.0:
            return 1.0
        return eval_real(x, 1, cfg) / math.pi

    try:
        alpha = _cheb_interp_coeffs(alpha_target, order)
        beta = _cheb_interp_coeffs(beta_target, order)
        gamma = _cheb_interp_coeffs(gamma_target, order)
    except WtanError as exc:
        raise SamplingFailure(f"solver failed at a fit node: {exc}") from exc
    return ChebyshevModel(split_a=a, alpha=alpha, beta=beta, gamma=gamma)


def _clenshaw(s: float, coeffs: tuple[float, ...]) -> float:
    d1 = d2 = 0.0
    for ck in reversed(coeffs[1:]):
        d1, d2 = 2.0 * s * d1 - d2 + ck, d1
    return s * d1 - d2 + coeffs[0]


def eval_cheb(x: float, model: ChebyshevModel) -> float:
    """Evaluate the piecewise model at real x (branch 1, real-axis
    convention for x < 0).  x = 0 belongs to the positive region, whose
    value there is 0; the negative region is one-sided at 0-."""
    a = model.split_a
    if 0.0 <= x <= a:
        s = 2.0 * x / a - 1.0
        return math.sqrt(x) * _clenshaw(s, model.alpha)
    if x < -a or x > a:
        return 0.5 * math.pi * _clenshaw(a / x, model.beta)
    s = 2.0 * x / a + 1.0
    return math.pi * _clenshaw(s, model.gamma)
