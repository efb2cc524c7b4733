r"""Multi-nome infinite products, the scalar dressing of the elliptic
R-matrix and the kappa(beta) integral of its trigonometric limits.

.. math::

    (z; p_1, \dots, p_m) = \prod_{n_1, \dots, n_m \ge 0}
        (1 - z p_1^{n_1} \cdots p_m^{n_m})
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import DomainError, NonConvergent
from .theta import DEFAULT_CONTROL, TruncationControl, guard


@dataclass(frozen=True)
class NomeSet:
    nomes: Tuple[complex, ...]

    def __post_init__(self):
        nomes = tuple(complex(p) for p in self.nomes)
        if not nomes:
            raise DomainError("at least one nome is required")
        for p in nomes:
            if not abs(p) < 1:
                raise DomainError(f"nome {p} has modulus >= 1")
        object.__setattr__(self, "nomes", nomes)


@dataclass(frozen=True)
class ScalarParams:
    """Parameters of the dressed elliptic R-matrix.

    ``beta`` and ``hbar`` only matter for kappa; they default to values
    that keep the elliptic constructors usable on their own.
    """

    n: int
    w: complex
    tau: complex
    xi: float
    hbar: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "w", complex(self.w))
        object.__setattr__(self, "tau", complex(self.tau))
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        if not self.xi > 0 or not self.hbar > 0:
            raise DomainError("xi and hbar must be positive")
        if not self.w.imag > 0:
            raise DomainError(f"Im(w) must be positive so that |x| < 1, got w={self.w}")
        if not self.tau.imag > 0:
            raise DomainError(f"Im(tau) must be positive, got tau={self.tau}")

    @classmethod
    def on_shell(cls, n, w, xi, **kw) -> "ScalarParams":
        """Parameters with ``tau = xi * w``, i.e. ``exp(2 i pi tau) = x^(2 xi)``.

        This is the tie between the elliptic nome and ``xi`` under which the
        dressing makes crossing-unitarity exact.
        """
        w = complex(w)
        return cls(n=n, w=w, tau=xi * w, xi=xi, **kw)

    @property
    def x(self) -> complex:
        return cmath.exp(1j * math.pi * self.w)

    @property
    def nomes(self) -> NomeSet:
        return NomeSet((cmath.exp(2j * math.pi * self.tau),
                        cmath.exp(2j * math.pi * self.n * self.w)))

    def x_power(self, e) -> complex:
        """``x**e`` via the principal exponential ``exp(i pi w e)``."""
        return cmath.exp(1j * math.pi * self.w * e)


def _depths(z, nomes, ctrl):
    """Per-nome depths whose combined log-tail bound is below ``ctrl.tol``."""
    r = [abs(p) for p in nomes]
    az = abs(z)
    rest = [math.prod(1 / (1 - rj) for j, rj in enumerate(r) if j != i) for i in range(len(r))]
    depths = []
    for ri, ci in zip(r, rest):
        if az == 0 or ri == 0:
            depths.append(1)
            continue
        # az * ri**d / (1 - ri) * ci <= tol / (2 m)
        target = ctrl.tol / (2 * len(r)) * (1 - ri) / (az * ci)
        d = max(1, math.ceil(math.log(target) / math.log(ri))) if target < 1 else 1
        if d > ctrl.product_depth:
            raise NonConvergent(
                f"product needs depth {d} for nome modulus {ri:.6f}; cap is {ctrl.product_depth}")
        depths.append(d)
    return depths


def product_tail_bound(z, nomes: Sequence[complex], depths: Sequence[int]) -> float:
    """Bound on |log| of the omitted factors of a truncated multi-nome product."""
    r = [abs(p) for p in nomes]
    az = abs(z)
    total = 0.0
    biggest = 0.0
    for i, (ri, d) in enumerate(zip(r, depths)):
        other = math.prod(1 / (1 - rj) for j, rj in enumerate(r) if j != i)
        total += az * ri ** d / (1 - ri) * other
        biggest = max(biggest, az * ri ** d)
    if biggest >= 1:
        return math.inf
    return total / (1 - biggest)


def multi_q_product_with_bound(z, nomes: NomeSet, ctrl: TruncationControl = DEFAULT_CONTROL):
    z = complex(z)
    ps = nomes.nomes
    depths = _depths(z, ps, ctrl)
    bound = product_tail_bound(z, ps, depths)
    if not bound <= ctrl.tol:
        raise NonConvergent(f"product tail bound {bound:.3e} exceeds tol {ctrl.tol:.1e}")
    # outer loop over the first nome keeps memory linear in the other depths
    inner = np.ones(1, dtype=complex)
    for p, d in zip(ps[1:], depths[1:]):
        inner = np.multiply.outer(inner, p ** np.arange(d)).ravel()
    value = 1 + 0j
    p0 = ps[0]
    c = z
    for _ in range(depths[0]):
        value *= np.prod(1 - c * inner)
        c *= p0
    return complex(value), bound


def multi_q_product(z, nomes: NomeSet, ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    return multi_q_product_with_bound(z, nomes, ctrl)[0]


def curly_brace(u, params: ScalarParams, ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    """``{u} = (u; exp(2 i pi tau), x^(2n))``."""
    return multi_q_product(u, params.nomes, ctrl)


def g1_factor(v, params: ScalarParams, ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    """g1(v) = {x^2v x^2}{x^2v x^(2n+2xi-2)} / ({x^2v x^2n}{x^2v x^2xi})."""
    n, xi = params.n, params.xi

    def brace(e):
        return curly_brace(params.x_power(2 * v + e), params, ctrl)

    num = brace(2) * brace(2 * n + 2 * xi - 2)
    den = guard(brace(2 * n), ctrl, "g1 denominator") * guard(brace(2 * xi), ctrl, "g1 denominator")
    return num / den


def scalar_prefactor(v, params: ScalarParams, ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    """x^(2v(1/n - 1)) g1(v) / g1(-v), the dressing of the bare matrix."""
    v = complex(v)
    if v == 0:
        return 1 + 0j
    power = params.x_power(2 * v * (1 / params.n - 1))
    return power * g1_factor(v, params, ctrl) / guard(g1_factor(-v, params, ctrl), ctrl, "g1(-v)")


def _sinh_scaled(c, t):
    """``sinh(c t) = s * exp(|c| t) / 2``; returns ``s``."""
    return math.copysign(1.0, c) * -math.expm1(-2 * abs(c) * t)


def kappa_integrand(t, beta, xi, hbar, n) -> float:
    """Real integrand J(t) with kappa = exp(-2 i int_0^inf J(t) dt).

    sh(2 i beta t) = i sin(2 beta t) supplies the factor i; the hyperbolic
    ratio is evaluated in exponentially scaled form so large t cannot
    overflow.
    """
    a, b, c, d = (n - 1) * hbar, (xi - 1) * hbar, xi * hbar, n * hbar
    if t < 1e-4:
        lead = 2 * beta * a * b / (c * d)
        return lead * (1 + t * t * (a * a + b * b - c * c - d * d - 4 * beta * beta) / 6)
    ratio = (_sinh_scaled(a, t) * _sinh_scaled(b, t)
             / (_sinh_scaled(c, t) * _sinh_scaled(d, t)))
    decay = (abs(a) + abs(b) - c - d) * t
    return ratio * math.exp(decay) * math.sin(2 * beta * t) / t


def kappa(beta, xi, hbar, n, quad_tol: float = 1e-12) -> complex:
    r"""kappa(beta) = exp{-2 \int_0^\infty sh((n-1) hbar t) sh((xi-1) hbar t) sh(2 i beta t)
    / (sh(hbar xi t) sh(n hbar t)) dt/t}.

    Integrated with QUADPACK's adaptive Gauss-Kronrod rule on ``(0, T]``
    where the envelope ``exp(-rate T)`` has fallen below ``quad_tol / 10``.
    """
    beta, xi, hbar = float(beta), float(xi), float(hbar)
    if not xi > 0 or not hbar > 0 or n < 2:
        raise DomainError("kappa needs xi > 0, hbar > 0, n >= 2")
    if beta == 0 or xi == 1:
        return 1 + 0j
    # integrand envelope ~ 2|beta| * exp(-rate t); rate is 2 hbar for xi >= 1
    rate = (n + xi - abs(n - 1) - abs(xi - 1)) * hbar
    scale = max(1.0, 2 * abs(beta))
    upper = max(1.0, math.log(10 * scale / (rate * quad_tol)) / rate)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(kappa_integrand, 0.0, upper, args=(beta, xi, hbar, n),
                                        epsabs=quad_tol / 4, epsrel=0.0, limit=2000)
        except integrate.IntegrationWarning as exc:
            raise NonConvergent(f"kappa quadrature: {exc}") from None
    if not err <= quad_tol:
        raise NonConvergent(f"kappa quadrature error {err:.3e} exceeds {quad_tol:.1e}")
    return cmath.exp(-2j * value)


def kappa_beta(params, quad_tol: float = 1e-12) -> complex:
    """kappa for any parameter record carrying ``beta, xi, hbar, n``."""
    return kappa(params.beta, params.xi, params.hbar, params.n, quad_tol)
