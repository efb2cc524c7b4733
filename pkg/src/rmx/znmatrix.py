"""Z_n basis matrices and the Z_n-symmetric elliptic R-matrix.

Tensor matrices are plain ``(n*n, n*n)`` complex arrays. Composite index
``(i, j) -> i*n + j`` with 0-based ``i, j``. An element
``R^{kl}_{ij}`` is stored at row ``(i, j)``, column ``(k, l)``: the upper
pair labels the column. This is the layout in which the element formulas
agree with the ``I_alpha (x) I_alpha^{-1}`` sum built from ``h e_j = e_{j+1}``.
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import DimensionError, DomainError
from .qproducts import ScalarParams, scalar_prefactor
from .theta import DEFAULT_CONTROL, TruncationControl, guard, sigma, theta


def _check_n(n):
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    return int(n)


def omega(n: int) -> complex:
    return np.exp(2j * np.pi / n)


def build_h(n: int) -> np.ndarray:
    """Cyclic shift ``h e_j = e_{j+1}`` (indices mod n)."""
    n = _check_n(n)
    return np.roll(np.eye(n, dtype=complex), 1, axis=0)


def build_g(n: int) -> np.ndarray:
    """Clock matrix ``g e_j = omega^j e_j``."""
    n = _check_n(n)
    return np.diag(omega(n) ** np.arange(n))


def build_I(alpha, n: int) -> np.ndarray:
    """``I_alpha = h^alpha_1 g^alpha_2``."""
    n = _check_n(n)
    a1, a2 = (int(a) % n for a in alpha)
    return np.linalg.matrix_power(build_h(n), a1) @ np.linalg.matrix_power(build_g(n), a2)


def build_I_inv(alpha, n: int) -> np.ndarray:
    # I_alpha is unitary
    return build_I(alpha, n).conj().T


def permutation_op(n: int) -> np.ndarray:
    """P(e_i (x) e_j) = e_j (x) e_i."""
    n = _check_n(n)
    p = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            p[j * n + i, i * n + j] = 1.0
    return p


def charge_mask(n: int) -> np.ndarray:
    """Boolean mask of slots with ``i + j == k + l (mod n)``."""
    idx = np.arange(n * n)
    charge = (idx // n + idx % n) % n
    return charge[:, None] == charge[None, :]


def is_charge_conserving(R: np.ndarray, n: int) -> bool:
    return bool(np.all(R[~charge_mask(n)] == 0))


def to_tensor(R: np.ndarray, n: int) -> np.ndarray:
    """Reshape to ``T[a, b, c, d] = R[(a, b), (c, d)]``."""
    if R.shape != (n * n, n * n):
        raise DimensionError(f"expected {(n * n, n * n)}, got {R.shape}")
    return R.reshape(n, n, n, n)


def partial_transpose_2(R: np.ndarray, n: int) -> np.ndarray:
    """Transpose in the second tensor factor only."""
    return to_tensor(R, n).transpose(0, 3, 2, 1).reshape(n * n, n * n)


def embed(R: np.ndarray, slots, n: int) -> np.ndarray:
    """Embed an operator on V (x) V into V (x) V (x) V acting on ``slots``.

    ``slots`` is one of (1, 2), (1, 3), (2, 3). Built from an explicit index
    map: the untouched factor is carried by a Kronecker delta.
    """
    T = to_tensor(R, n)
    delta = np.eye(n)
    # output row (r1 r2 r3), column (c1 c2 c3)
    if tuple(slots) == (1, 2):
        out = np.einsum("abde,cf->abcdef", T, delta)
    elif tuple(slots) == (1, 3):
        out = np.einsum("acdf,be->abcdef", T, delta)
    elif tuple(slots) == (2, 3):
        out = np.einsum("bcef,ad->abcdef", T, delta)
    else:
        raise DomainError(f"unknown slot pair {slots}")
    return out.reshape(n ** 3, n ** 3)


def sbar_sum(z, w, tau, n: int, ctrl: TruncationControl = DEFAULT_CONTROL) -> np.ndarray:
    """Bare Z_n-symmetric R-matrix from its ``I_alpha (x) I_alpha^{-1}`` expansion.

    Sbar = sigma_0(w)/sigma_0(z+w) * sum_alpha W_alpha(z) I_alpha (x) I_alpha^{-1},
    W_alpha(z) = sigma_alpha(z + w/n) / (n sigma_alpha(w/n)).
    """
    n = _check_n(n)
    z, w, tau = complex(z), complex(w), complex(tau)
    out = np.zeros((n * n, n * n), dtype=complex)
    for alpha in itertools.product(range(n), repeat=2):
        den = guard(n * sigma(alpha, n, w / n, tau, ctrl), ctrl, f"sigma_{alpha}(w/n)")
        weight = sigma(alpha, n, z + w / n, tau, ctrl) / den
        out += weight * np.kron(build_I(alpha, n), build_I_inv(alpha, n))
    pre = sigma((0, 0), n, w, tau, ctrl) / guard(sigma((0, 0), n, z + w, tau, ctrl), ctrl, "sigma_0(z+w)")
    out *= pre
    out[~charge_mask(n)] = 0
    return out


def sbar_explicit(z, w, tau, n: int, ctrl: TruncationControl = DEFAULT_CONTROL) -> np.ndarray:
    """Bare R-matrix from the closed element formula in theta functions of n*tau.

    The numerator product over ``j`` is taken with the factor ``j = l - i``
    cancelled against the matching denominator, which removes the 0/0 at
    ``z = 0``. Forbidden slots are never evaluated.
    """
    n = _check_n(n)
    z, w, tau = complex(z), complex(w), complex(tau)
    ntau = n * tau

    def th(c, arg):
        return theta(0.5 + c / n, 0.5, arg, ntau, ctrl)

    theta_z = [th(c, z) for c in range(n)]
    theta_zw = [th(c, z + w) for c in range(n)]
    theta_w = [guard(th(c, w), ctrl, "theta(w, n tau)") for c in range(n)]
    norm = np.prod([guard(th(c, 0), ctrl) for c in range(1, n)])
    pre = sigma((0, 0), n, w, tau, ctrl) / guard(sigma((0, 0), n, z + w, tau, ctrl), ctrl, "sigma_0(z+w)")
    out = np.zeros((n * n, n * n), dtype=complex)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if (i + j - k - l) % n:
            continue
        drop = (l - i) % n
        num = np.prod([theta_z[c] for c in range(n) if c != drop])
        out[i * n + j, k * n + l] = num / norm * theta_zw[(l - k) % n] / theta_w[(i - k) % n]
    return pre * out


def s_full(v, params: ScalarParams, ctrl: TruncationControl = DEFAULT_CONTROL) -> np.ndarray:
    """Dressed R-matrix S(v) = x^(2v(1/n-1)) g1(v)/g1(-v) Sbar(v w, w, tau)."""
    v = complex(v)
    return scalar_prefactor(v, params, ctrl) * sbar_sum(v * params.w, params.w, params.tau, params.n, ctrl)


def swap21(R: np.ndarray, n: int) -> np.ndarray:
    """R_21 = P R_12 P."""
    P = permutation_op(n)
    return P @ R @ P


def ybe_residual(R, u1, u2, u3, n: int) -> float:
    """Max-norm of R12(u1-u2) R13(u1-u3) R23(u2-u3) - R23 R13 R12."""
    r12 = R(u1 - u2)
    r13 = R(u1 - u3)
    r23 = R(u2 - u3)
    lhs = embed(r12, (1, 2), n) @ embed(r13, (1, 3), n) @ embed(r23, (2, 3), n)
    rhs = embed(r23, (2, 3), n) @ embed(r13, (1, 3), n) @ embed(r12, (1, 2), n)
    return float(np.max(np.abs(lhs - rhs)))


def unitarity_residual(R, u, n: int) -> float:
    """Max-norm of R12(u) R21(-u) - 1."""
    return float(np.max(np.abs(R(u) @ swap21(R(-u), n) - np.eye(n * n))))


def crossing_residual(R, u, shift, n: int) -> float:
    """Max-norm of R12(u)^t2 R21(-u-shift)^t2 - 1."""
    a = partial_transpose_2(R(u), n)
    b = partial_transpose_2(swap21(R(-u - shift), n), n)
    return float(np.max(np.abs(a @ b - np.eye(n * n))))
