"""3-vectors, Paulions, the Gamma representation and small matrix helpers.

Vectors are plain ``numpy`` arrays of shape (3,). Matrices are complex
``numpy`` arrays. Two-wire operators follow the convention that the first
tensor factor acts on wire 1 and the second on wire 0, so wire 0 is the
least significant bit of the state index.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    AnchorError,
    ContractError,
    DegenerateDirectionError,
    NotSimultaneouslyDiagonalizable,
)

GEOM_TOL = 1e-9
MAT_TOL = 1e-8

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

X_HAT = np.array([1.0, 0.0, 0.0])
Y_HAT = np.array([0.0, 1.0, 0.0])
Z_HAT = np.array([0.0, 0.0, 1.0])
AXES = (X_HAT, Y_HAT, Z_HAT)


class RhonBasis(NamedTuple):
    """Right-handed orthonormal basis (f1, f2, f3)."""

    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray

    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of a 3x3 rotation matrix."""
        return np.column_stack([self.f1, self.f2, self.f3])


def vec(x, y=None, z=None) -> np.ndarray:
    """Build a float 3-vector from three numbers or one sequence."""
    if y is None:
        out = np.asarray(x, dtype=float).reshape(3)
    else:
        out = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(out)):
        raise ContractError("vector components must be finite")
    return out


def unit(v, tol: float = 1e-12) -> np.ndarray:
    """Return v / |v|; raise when |v| is below ``tol``."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n <= tol:
        raise DegenerateDirectionError(f"cannot normalize a vector of length {n:.3g}")
    return v / n


def is_unit(v, tol: float = 1e-12) -> bool:
    return abs(np.linalg.norm(v) - 1.0) <= tol


def is_parallel(a, b, tol: float = GEOM_TOL) -> bool:
    """True when |a x b| <= tol (either sign of alignment)."""
    return float(np.linalg.norm(np.cross(a, b))) <= tol


def is_perpendicular(a, b, tol: float = GEOM_TOL) -> bool:
    return abs(float(np.dot(a, b))) <= tol


def cross_fold(vs: Sequence) -> np.ndarray:
    """Left-nested cross product ((v1 x v2) x v3) x ... x vr."""
    if len(vs) < 2:
        raise ValueError("cross_fold needs at least two vectors")
    out = np.asarray(vs[0], dtype=float)
    for v in vs[1:]:
        out = np.cross(out, v)
    return out


def _check_direction(b) -> float:
    nb2 = float(np.dot(b, b))
    if nb2 <= 1e-24:
        raise DegenerateDirectionError("reference direction has zero length")
    return nb2


def along(a, b) -> np.ndarray:
    """Component of a parallel to b."""
    nb2 = _check_direction(b)
    return np.dot(a, b) / nb2 * np.asarray(b, dtype=float)


def across(a, b) -> np.ndarray:
    """Component of a perpendicular to b."""
    return np.asarray(a, dtype=float) - along(a, b)


def paulion(a) -> np.ndarray:
    """sigma_a = a_x X + a_y Y + a_z Z."""
    return a[0] * SX + a[1] * SY + a[2] * SZ


def paulion2(a_hi, a_lo) -> np.ndarray:
    """sigma_{a_hi, a_lo} = sigma_{a_hi} (wire 1) tensor sigma_{a_lo} (wire 0)."""
    return np.kron(paulion(a_hi), paulion(a_lo))


def expi(axis, theta: float) -> np.ndarray:
    """exp(i theta sigma_axis) for a unit axis."""
    return np.cos(theta) * I2 + 1j * np.sin(theta) * paulion(axis)


def su2_from_pair(a, b) -> np.ndarray:
    """sigma_a sigma_b, an element of SU(2) for unit a, b."""
    return paulion(a) @ paulion(b)


def su2_axis_angle(U) -> tuple[float, np.ndarray | None]:
    """Write U in SU(2) as exp(i theta sigma_w) with theta in [0, pi].

    The axis is None when U = +-I, where it is undetermined.
    """
    c = float(np.real(np.trace(U))) / 2.0
    sw = np.array([float(np.real(np.trace(P @ U) / 2j)) for P in PAULIS])
    s = float(np.linalg.norm(sw))
    theta = float(np.arctan2(s, c))
    if s <= 1e-12:
        return theta, None
    return theta, sw / s


def pair_from_su2(U, anchor=None) -> tuple[np.ndarray, np.ndarray]:
    """Find unit vectors (a, b) with sigma_a sigma_b = U.

    Both vectors lie in the plane perpendicular to the rotation axis of U.
    With ``anchor`` in that plane the first vector equals the anchor.
    """
    U = np.asarray(U, dtype=complex)
    if np.linalg.norm(U.conj().T @ U - I2) > 1e-10:
        raise ContractError("pair_from_su2 needs a unitary matrix")
    if abs(np.linalg.det(U) - 1.0) > 1e-10:
        raise ContractError("pair_from_su2 needs det(U) = 1")
    theta, w = su2_axis_angle(U)
    if w is None:
        a = X_HAT.copy() if anchor is None else unit(anchor)
        sign = 1.0 if np.real(U[0, 0]) > 0 else -1.0
        return a, sign * a
    if anchor is None:
        a = complete_rhon(w).f2
    else:
        a = unit(anchor)
        if abs(np.dot(a, w)) > GEOM_TOL:
            raise AnchorError("anchor is not perpendicular to the rotation axis")
        a = unit(across(a, w))
    b = np.cos(theta) * a + np.sin(theta) * np.cross(w, a)
    return a, unit(b)


def reflect(a, r) -> np.ndarray:
    """Reflect a on the line of r: sigma_r sigma_a sigma_r = sigma_reflect(a, r)."""
    return unit(along(a, r) - across(a, r))


def check_unitary(A, tol: float = 1e-10, what: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"{what} must be square")
    if np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0])) > tol:
        raise ContractError(f"{what} is not unitary")
    return A


def special_counterpart(A) -> np.ndarray:
    """A / det(A)^(1/n) using the principal branch of the root."""
    A = check_unitary(A)
    n = A.shape[0]
    d = np.linalg.det(A)
    ang = np.angle(d)
    if ang <= -np.pi:
        ang += 2 * np.pi
    return A / np.exp(1j * ang / n)


_GAMMA_BASIS = [[np.kron(Pi, Pj) for Pj in PAULIS] for Pi in PAULIS]


def gamma(M) -> np.ndarray:
    """3x3 matrix of quarter traces tr((sigma_i x sigma_j) M) / 4.

    The row index follows wire 1 and the column index wire 0. The result is
    real when M is Hermitian (the only case the rest of the package uses);
    otherwise the complex coefficients are returned.
    """
    M = np.asarray(M, dtype=complex)
    G = np.array([[np.trace(B @ M) / 4.0 for B in row] for row in _GAMMA_BASIS])
    if np.max(np.abs(G.imag)) <= 1e-12 * max(1.0, np.max(np.abs(G))):
        return G.real
    return G


def gamma_inv(L) -> np.ndarray:
    """Sum over i, j of L_ij sigma_i (wire 1) tensor sigma_j (wire 0)."""
    out = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        for j in range(3):
            out += L[i][j] * _GAMMA_BASIS[i][j]
    return out


def complete_rhon(u) -> RhonBasis:
    """Deterministic right-handed orthonormal basis whose first vector is u.

    f2 is the normalized part, perpendicular to u, of the coordinate axis
    along which u has its smallest absolute component (ties go x, y, z).
    """
    u = unit(u)
    k = int(np.argmin(np.abs(u)))
    f2 = unit(across(AXES[k], u))
    return RhonBasis(u, f2, np.cross(u, f2))


_MIX = (0.6180339887498949, -1.4142135623730951, 2.718281828459045, 0.3183098861837907)


def simultaneous_svd(A, B):
    """Shared SVD A = U D_A V^T, B = U D_B V^T of two real matrices.

    Requires A^T B = B^T A and A B^T = B A^T. The diagonal of D_A is made
    non-negative. Returns (U, D_A, D_B, V) with U, V orthogonal.

    The singular vectors come from an ordinary SVD of A + kappa B for a few
    fixed irrational kappa; the kappa giving the most diagonal D_A, D_B is
    kept. Inside a cluster of equal singular values A and B are proportional
    to the same partial isometry, so any basis of the cluster diagonalizes both.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError("simultaneous_svd needs two square matrices of equal shape")
    scale = max(np.linalg.norm(A), np.linalg.norm(B), 1.0)
    tol = 1e-8 * scale
    if np.linalg.norm(A.T @ B - B.T @ A) > tol or np.linalg.norm(A @ B.T - B @ A.T) > tol:
        raise NotSimultaneouslyDiagonalizable("left or right commutator is nonzero")
    best = None
    for kappa in _MIX:
        U, _, Vt = np.linalg.svd(A + kappa * B)
        V = Vt.T
        DA = U.T @ A @ V
        DB = U.T @ B @ V
        off = np.linalg.norm(DA - np.diag(np.diag(DA))) + np.linalg.norm(DB - np.diag(np.diag(DB)))
        if best is None or off < best[0]:
            best = (off, U, DA, DB, V)
        if off <= 1e-13 * scale:
            break
    _, U, DA, DB, V = best
    da, db = np.diag(DA).copy(), np.diag(DB).copy()
    flip = np.where(da < 0, -1.0, 1.0)
    U = U * flip
    da, db = da * flip, db * flip
    DA, DB = np.diag(da), np.diag(db)
    if np.linalg.norm(U @ DA @ V.T - A) > MAT_TOL * scale or np.linalg.norm(U @ DB @ V.T - B) > MAT_TOL * scale:
        raise NotSimultaneouslyDiagonalizable("no shared singular basis found")
    return U, DA, DB, V


def embed(op, wire: int, nbits: int) -> np.ndarray:
    """Place a 2x2 operator on ``wire`` of an nbits register."""
    out = np.ones((1, 1), dtype=complex)
    for w in reversed(range(nbits)):
        out = np.kron(out, op if w == wire else I2)
    return out


def kron_wires(ops: Sequence) -> np.ndarray:
    """Tensor product with ops[w] acting on wire w (highest wire leftmost)."""
    out = np.ones((1, 1), dtype=complex)
    for op in reversed(ops):
        out = np.kron(out, op)
    return out


def phase_distance(A, B) -> float:
    """min over phi of ||A - e^{i phi} B||_F."""
    t = np.trace(B.conj().T @ A)
    ph = t / abs(t) if abs(t) > 1e-300 else 1.0
    return float(np.linalg.norm(A - ph * B))


def random_unit(rng) -> np.ndarray:
    """Uniform point on the sphere from normalized Gaussian draws."""
    while True:
        v = rng.standard_normal(3)
        n = np.linalg.norm(v)
        if n > 1e-6:
            return v / n


def random_su2(rng) -> np.ndarray:
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    return q[0] * I2 + 1j * (q[1] * SX + q[2] * SY + q[3] * SZ)


def random_orthogonal(rng, det: float = 1.0) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((3, 3)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) * det < 0:
        Q[:, 2] *= -1
    return Q
