"""Modular matrix M, the twist F12 = (M (x) M) P and the identities that
tie the two trigonometric limits together."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PoleError
from .theta import DEFAULT_CONTROL, TruncationControl
from .trig import DegenerateParams, r_dy, r_q
from .znmatrix import _check_n, build_g, build_h, omega, permutation_op, sbar_sum


def m_matrix(n: int) -> np.ndarray:
    """``M_jk = omega^(jk)`` (0-based), so that M g M^-1 = h^-1 and M h M^-1 = g.

    With ``h e_j = e_{j+1}`` the conjugate choice ``omega^(-jk)`` would send
    g to h instead of h^-1; the two differ by the relabelling k -> -k.
    """
    n = _check_n(n)
    jk = np.outer(np.arange(n), np.arange(n))
    return omega(n) ** jk


@dataclass(frozen=True)
class TwistData:
    n: int
    M: np.ndarray
    F12: np.ndarray
    F21: np.ndarray

    @property
    def F12_inv(self) -> np.ndarray:
        return np.linalg.inv(self.F12)


def twist_f(n: int, scale: complex = 1.0) -> TwistData:
    """Twist built from ``scale * m_matrix(n)``.

    Note ``F21 = P F12 P = F12`` because P commutes with M (x) M.
    """
    n = _check_n(n)
    M = scale * m_matrix(n)
    P = permutation_op(n)
    F12 = np.kron(M, M) @ P
    return TwistData(n=n, M=M, F12=F12, F21=P @ F12 @ P)


def twisted_conjugate(R: np.ndarray, t: TwistData) -> np.ndarray:
    """F21 R F12^-1."""
    if R.shape != t.F12.shape:
        raise DimensionError(f"matrix shape {R.shape} does not match twist {t.F12.shape}")
    return t.F21 @ R @ t.F12_inv


def mt2_scalar(z, w, tau, n: int) -> complex:
    """exp(2 pi i z w (1-n) / (n tau))."""
    return cmath.exp(2j * math.pi * complex(z) * complex(w) * (1 - n) / (n * complex(tau)))


def _mt2_sides(z, w, tau, n, ctrl):
    z, w, tau = complex(z), complex(w), complex(tau)
    MM = np.kron(m_matrix(n), m_matrix(n))
    P = permutation_op(n)
    lhs = MM @ sbar_sum(z / tau, w / tau, -1 / tau, n, ctrl) @ np.linalg.inv(MM)
    rhs = P @ sbar_sum(z, w, tau, n, ctrl) @ P
    return lhs, rhs


def mt2_entry_ratio(z, w, tau, n: int, ctrl: TruncationControl = DEFAULT_CONTROL, count: int = 4) -> np.ndarray:
    """Ratios lhs/rhs over the ``count`` largest entries of the two sides.

    An independent read-out of the scalar relating the two sides of the
    modular relation; all ratios coincide when the relation holds.
    """
    lhs, rhs = _mt2_sides(z, w, tau, n, ctrl)
    order = np.argsort(-np.abs(rhs), axis=None)[:count]
    flat_l, flat_r = lhs.ravel()[order], rhs.ravel()[order]
    if np.any(np.abs(flat_r) <= ctrl.pole_floor):
        raise PoleError("no nonzero entries to compare")
    return flat_l / flat_r


def mt2_residual(z, w, tau, n: int, ctrl: TruncationControl = DEFAULT_CONTROL) -> float:
    """Max-norm of (M(x)M) Sbar(z/tau, w/tau, -1/tau) (M(x)M)^-1 - c P Sbar(z, w, tau) P."""
    n = _check_n(n)
    lhs, rhs = _mt2_sides(z, w, tau, n, ctrl)
    return float(np.max(np.abs(lhs - mt2_scalar(z, w, tau, n) * rhs)))


def twist_residual(p: DegenerateParams, with_kappa: bool = False) -> float:
    """Max-norm of R_DY - F21 R_Q F12^-1.

    By default both sides are kappa-free; ``with_kappa`` multiplies both by
    the same quadrature value.
    """
    q = DegenerateParams(p.n, p.beta, p.xi, p.hbar, include_kappa=with_kappa)
    t = twist_f(p.n)
    return float(np.max(np.abs(r_dy(q) - twisted_conjugate(r_q(q), t))))


def check_m_identities(n: int) -> float:
    """max(|M g M^-1 - h^-1|, |M h M^-1 - g|)."""
    M = m_matrix(n)
    Mi = np.linalg.inv(M)
    h, g = build_h(n), build_g(n)
    return float(max(np.max(np.abs(M @ g @ Mi - np.linalg.inv(h))),
                     np.max(np.abs(M @ h @ Mi - g))))
