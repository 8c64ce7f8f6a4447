"""The quadratic LO-RHS invariant and its closed forms for 1-4 DC-NOTs.

For a unitary A on n qubits, A2 = A sy^n A^T sy^n is unchanged (up to a phase)
when single-qubit unitaries are multiplied on the right of A. On two qubits,
A2 determines the right-coset of A up to that phase, which is what every
2-qubit rewrite in this package relies on.

Vector pairs are given as (a, a') with a on wire 0 and a' on wire 1, listed
in application order: ``pairs[0]`` is the first DC-NOT to act (the rightmost
operator factor).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import dc, gates_unitary
from .errors import ContractError, NotAnInvariant, NotFactorable, NotSimultaneouslyDiagonalizable
from .linalg import (
    SY,
    Z_HAT,
    RhonBasis,
    check_unitary,
    complete_rhon,
    cross_fold,
    gamma,
    gamma_inv,
    simultaneous_svd,
    unit,
)

cf = cross_fold
PI_PERM = (1, 2, 0)  # j -> pi(j), zero-based
PI_MAT = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float)


def _sy(n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, SY)
    return out


def quad_invariant(A, nbits: int | None = None) -> np.ndarray:
    """A sy^n A^T sy^n."""
    A = check_unitary(A)
    n = int(round(math.log2(A.shape[0]))) if nbits is None else nbits
    if A.shape[0] != 2**n:
        raise ContractError("matrix size does not match nbits")
    S = _sy(n)
    return A @ S @ A.T @ S


def dcnot_counterpart(U, r: int) -> np.ndarray:
    """exp(i pi r / 4) U for the unitary U of an r-DC-NOT run on 2 qubits.

    det U = (-1)^r, so the result has det 1 and its invariant is i^r times
    that of U. The principal-root special_counterpart agrees only for r = 0, 3, 4.
    """
    return np.exp(1j * math.pi * r / 4) * np.asarray(U, dtype=complex)


@dataclass(frozen=True)
class InvariantParts:
    """M = lam_r + i lam_i + Lam_r + i Lam_i with Lam_r, Lam_i Hermitian traceless."""

    lam_r: float
    lam_i: float
    Lam_r: np.ndarray
    Lam_i: np.ndarray

    def matrix(self) -> np.ndarray:
        return (self.lam_r + 1j * self.lam_i) * np.eye(4) + self.Lam_r + 1j * self.Lam_i

    def gamma_r(self) -> np.ndarray:
        return np.real(gamma(self.Lam_r))

    def gamma_i(self) -> np.ndarray:
        return np.real(gamma(self.Lam_i))


def split_parts(M, r: int | None = None) -> InvariantParts:
    """Split a 4x4 invariant into scalar and traceless Hermitian parts."""
    M = np.asarray(M, dtype=complex)
    lam = np.trace(M) / 4.0
    D = M - lam * np.eye(4)
    return InvariantParts(float(lam.real), float(lam.imag), (D + D.conj().T) / 2, (D - D.conj().T) / 2j)


def _assemble(lam_r, lam_i, Gr, Gi) -> np.ndarray:
    return (lam_r + 1j * lam_i) * np.eye(4) + gamma_inv(Gr) + 1j * gamma_inv(Gi)


def _outer(u, v):
    return np.outer(u, v)


def _g1(a, ap):
    return _assemble(0.0, 0.0, -_outer(ap, a), np.zeros((3, 3)))


def _g2(a, ap, b, bp):
    ab, abp = a @ b, ap @ bp
    Gr = -_outer(cf([ap, bp, bp]), cf([a, b, b]))
    Gi = ab * _outer(np.cross(ap, bp), b) + abp * _outer(bp, np.cross(a, b))
    return _assemble(ab * abp, 0.0, Gr, Gi)


def _g3(a, ap, b, bp, c, cp):
    ab, bc = a @ b, b @ c
    abp, bcp = ap @ bp, bp @ cp
    V = np.cross(a, b) @ c
    Vp = np.cross(ap, bp) @ cp
    abb_c = cf([a, b, b]) @ c
    abb_cp = cf([ap, bp, bp]) @ cp
    lam_r = abb_cp * abb_c
    lam_i = -ab * bc * Vp - abp * bcp * V
    Gr = (
        -abp * ab * _outer(cp, c)
        + ab * bc * _outer(cf([ap, bp, cp]), c)
        + abp * bcp * _outer(cp, cf([a, b, c]))
        + abp * V * _outer(np.cross(bp, cp), c)
        + ab * Vp * _outer(cp, np.cross(b, c))
        - _outer(cf([ap, bp, bp, cp, cp]), cf([a, b, b, c, c]))
    )
    Gi = (
        ab * _outer(cf([ap, bp, cp, cp]), cf([b, c, c]))
        + abp * _outer(cf([bp, cp, cp]), cf([a, b, c, c]))
        + abb_c * _outer(cf([ap, bp, bp, cp]), c)
        + abb_cp * _outer(cp, cf([a, b, b, c]))
    )
    return _assemble(lam_r, lam_i, Gr, Gi)


def _pairs(vec_pairs) -> list:
    return [(np.asarray(a, dtype=float), np.asarray(ap, dtype=float)) for a, ap in vec_pairs]


def run_unitary(vec_pairs) -> np.ndarray:
    """4x4 unitary of DC-NOTs (a on wire 0, a' on wire 1) in application order."""
    return gates_unitary([dc(a, ap) for a, ap in vec_pairs], 2)


def g2_closed(r: int, vec_pairs: Sequence) -> np.ndarray:
    """Closed-form invariant of an r-DC-NOT run, r = 1..4."""
    if r not in (1, 2, 3, 4):
        raise ValueError("r must be between 1 and 4")
    p = _pairs(vec_pairs)
    if len(p) != r:
        raise ValueError(f"expected {r} vector pairs, got {len(p)}")
    if r == 1:
        return _g1(*p[0])
    if r == 2:
        return _g2(*p[0], *p[1])
    if r == 3:
        return _g3(*p[0], *p[1], *p[2])
    params, _ = diagonalize_g3(_g3(*p[0], *p[1], *p[2]))
    return g4_parts(params, p[3][0], p[3][1]).matrix()


# ---------------------------------------------------------------- G2 principal form


@dataclass(frozen=True)
class PrincipalParams2:
    alpha: float
    alpha_prime: float
    F: RhonBasis
    F_prime: RhonBasis


def g2_from_params(p: PrincipalParams2) -> np.ndarray:
    ca, sa = math.cos(p.alpha), math.sin(p.alpha)
    cap, sap = math.cos(p.alpha_prime), math.sin(p.alpha_prime)
    f, fp = p.F, p.F_prime
    Gr = -sap * sa * _outer(fp.f2, f.f2)
    Gi = sap * ca * _outer(fp.f3, f.f1) + cap * sa * _outer(fp.f1, f.f3)
    return _assemble(cap * ca, 0.0, Gr, Gi)


def _h_basis(f2) -> tuple:
    """Right-handed (h1, h2, h3) with h2 = f2."""
    e = complete_rhon(f2)
    return e.f3, e.f1, e.f2


def _angles_from_products(cc, ss, sc, cs) -> tuple:
    """(alpha', alpha) from the four products c'c, s's, s'c, c's."""
    plus = math.atan2(sc + cs, cc - ss)
    minus = math.atan2(sc - cs, cc + ss)
    return (plus + minus) / 2, (plus - minus) / 2


def g2_tail(lam2r: float, ss: float, f2, f2p, Gi) -> tuple:
    """Finish a G2 diagonalization once c'c, s's, f2 and f2' are known.

    ``Gi`` is the Gamma matrix of the imaginary traceless part. Returns the
    principal parameters and the recovered pairs ((a, a'), (b, b')).
    """
    h1, h2, h3 = _h_basis(f2)
    h1p, h2p, h3p = _h_basis(f2p)
    M = np.array([[h3p @ Gi @ h1, h3p @ Gi @ h3], [h1p @ Gi @ h1, h1p @ Gi @ h3]])
    U, d, Vt = np.linalg.svd(M)
    V = Vt.T
    sc, cs = float(d[0]), float(d[1])
    F3p_F1p = np.column_stack([h3p, h1p]) @ U
    F1_F3 = np.column_stack([h1, h3]) @ V
    f3p, f1p = F3p_F1p[:, 0], F3p_F1p[:, 1]
    f1, f3 = F1_F3[:, 0], F1_F3[:, 1]
    if np.linalg.det(U) < 0:
        f3p, sc = -f3p, -sc
    if np.linalg.det(V) < 0:
        f3, cs = -f3, -cs
    alpha_p, alpha = _angles_from_products(lam2r, ss, sc, cs)
    F = RhonBasis(unit(f1), unit(np.asarray(f2, dtype=float)), unit(f3))
    Fp = RhonBasis(unit(f1p), unit(np.asarray(f2p, dtype=float)), unit(f3p))
    params = PrincipalParams2(alpha, alpha_p, F, Fp)
    return params, pairs_from_params2(params)


def pairs_from_params2(p: PrincipalParams2) -> tuple:
    b = p.F.f1
    a = unit(math.cos(p.alpha) * p.F.f1 - math.sin(p.alpha) * p.F.f2)
    bp = p.F_prime.f1
    ap = unit(math.cos(p.alpha_prime) * p.F_prime.f1 - math.sin(p.alpha_prime) * p.F_prime.f2)
    return ((a, ap), (b, bp))


def _null_direction(A, tol: float = 1e-9) -> np.ndarray:
    """Unit vector orthogonal to the column space of A, preferring z, x, y.

    When the real part vanishes the free f2 must still be orthogonal to the
    vectors appearing in the imaginary part, so a fixed z is not always valid.
    """
    U, s, _ = np.linalg.svd(A)
    null = U[:, s <= tol] if np.any(s <= tol) else U[:, -1:]
    for e in (Z_HAT, np.array([1.0, 0, 0]), np.array([0, 1.0, 0])):
        v = null @ (null.T @ e)
        if np.linalg.norm(v) > 1e-6:
            return unit(v)
    return unit(null[:, 0])


def diagonalize_g2(M, tol: float = 1e-6) -> tuple:
    """Principal parameters and one set of pairs ((a, a'), (b, b')) reproducing M."""
    M = np.asarray(M, dtype=complex)
    parts = split_parts(M)
    Gr, Gi = parts.gamma_r(), parts.gamma_i()
    U, s, Vt = np.linalg.svd(Gr)
    best = None
    # The sign split between s's and f2' is free; try both and keep the exact one.
    for sign in (1.0, -1.0):
        if s[0] <= 1e-12:
            ss, f2, f2p = 0.0, _null_direction(Gi.T), _null_direction(Gi)
        else:
            ss, f2, f2p = sign * s[0], Vt[0], -sign * U[:, 0]
        params, pairs = g2_tail(parts.lam_r, ss, f2, f2p, Gi)
        res = float(np.linalg.norm(g2_closed(2, pairs) - M))
        if best is None or res < best[0]:
            best = (res, params, pairs)
        if res <= 1e-12 or s[0] <= 1e-12:
            break
    res, params, pairs = best
    if res > tol:
        raise NotAnInvariant(f"not a 2-DC-NOT invariant (residual {res:.3g})", res)
    return params, pairs


# ---------------------------------------------------------------- G3 principal form


@dataclass(frozen=True)
class PrincipalParams3:
    beta: float
    beta1: float
    beta2: float
    xi: int
    G: RhonBasis
    G_prime: RhonBasis
    nu: tuple
    mu: tuple
    Xo: float
    Yo: float

    @property
    def Mnu(self) -> np.ndarray:
        return np.diag(self.nu) @ PI_MAT

    @property
    def Mmu(self) -> np.ndarray:
        return np.diag(self.mu) @ PI_MAT


def principal_values3(beta: float, beta1: float, beta2: float, xi: int) -> tuple:
    """(nu, mu, Xo, Yo) from the three angles and the sign xi."""
    cb, sb = math.cos(beta), math.sin(beta)
    c1, s1 = math.cos(beta1), math.sin(beta1)
    c2, s2 = math.cos(beta2), math.sin(beta2)
    Xo = cb * xi * s1 * s2
    Yo = sb * c1 * c2
    nu = (sb * c1 * s2, sb * s1 * abs(c2), cb * c1 * c2)
    mu = (-cb * s1 * abs(c2), -cb * c1 * s2, sb * xi * s1 * s2)
    return nu, mu, Xo, Yo


def g3_from_params(p: PrincipalParams3) -> np.ndarray:
    Gm = p.G.matrix()
    Gpm = p.G_prime.matrix()
    Gr = Gpm @ p.Mnu @ Gm.T
    Gi = Gpm @ p.Mmu @ Gm.T
    return _assemble(-p.Xo, -p.Yo, Gr, Gi)


def pairs_from_params3(p: PrincipalParams3) -> tuple:
    """((a, a'), (b, b'), (c, c')) per the principal parameterization."""
    xi2 = -p.xi
    g1, _, g3 = p.G
    h1, h2, h3 = p.G_prime
    c = g1
    b = math.cos(p.beta2) * g1 + math.sin(p.beta2) * g3
    ang = p.beta2 - xi2 * p.beta1
    a = math.cos(ang) * g1 + math.sin(ang) * g3
    cp = h1
    bp = h3
    ap = math.cos(p.beta) * h1 + math.sin(p.beta) * h2
    return ((unit(a), unit(ap)), (unit(b), unit(bp)), (unit(c), unit(cp)))


def _rank_one_2x2x2(T) -> tuple:
    """Best (u, P) with T[k] ~ u[k] * P, u a unit 2-vector, P a 2x2 matrix."""
    U, s, Vt = np.linalg.svd(T.reshape(2, 4))
    u = U[:, 0]
    P = (s[0] * Vt[0]).reshape(2, 2)
    return u, P, float(s[1] if len(s) > 1 else 0.0)


def _angles3(nu, mu, Xo, Yo, xi) -> tuple | None:
    """Solve the principal relations for (beta, beta1, beta2) with sign xi.

    The relations say that the 2x2x2 array below is the rank-one product
    (c_b, s_b) x (c_b1, s_b1) x (c_b2, s_b2); it is factored by two SVDs,
    which also covers the branches where the closed-form divisions by
    c_beta or s_beta break down.
    """
    xi2 = -xi
    T = np.array(
        [
            [[nu[2], -mu[1]], [-xi2 * mu[0], xi * Xo]],
            [[Yo, nu[0]], [xi2 * nu[1], xi * mu[2]]],
        ]
    )
    u, P, rest = _rank_one_2x2x2(T)
    if rest > 1e-6 * max(1.0, np.abs(T).max()):
        return None
    U2, s2, Vt2 = np.linalg.svd(P)
    if s2[1] > 1e-6:
        return None
    w1 = U2[:, 0] * math.sqrt(s2[0])
    w2 = Vt2[0] * math.sqrt(s2[0])
    beta = math.atan2(u[1], u[0])
    beta1 = math.atan2(w1[1], w1[0])
    beta2 = math.atan2(w2[1], w2[0])
    # Sign conventions: s_b1 >= 0 and sign(c_b2) = xi2.
    if math.sin(beta1) < 0:
        beta1, beta2 = beta1 + math.pi, beta2 + math.pi
    if xi2 * math.cos(beta2) < 0:
        return None
    return beta, beta1, beta2


def _g3_candidates(Gr, Gi):
    """Labelings of the shared singular triples as (g'_j, g_pi(j)) with signs."""
    U, DA, DB, V = simultaneous_svd(Gr, Gi)
    da, db = np.diag(DA), np.diag(DB)
    for perm in itertools.permutations(range(3)):
        for su in itertools.product((1.0, -1.0), repeat=3):
            for sv in itertools.product((1.0, -1.0), repeat=3):
                Gp = np.column_stack([su[j] * U[:, perm[j]] for j in range(3)])
                if np.linalg.det(Gp) < 0:
                    continue
                # column j of V (after labeling) is g_pi(j)
                Gm = np.empty((3, 3))
                for j in range(3):
                    Gm[:, PI_PERM[j]] = sv[j] * V[:, perm[j]]
                if np.linalg.det(Gm) < 0:
                    continue
                nu = tuple(su[j] * sv[j] * da[perm[j]] for j in range(3))
                mu = tuple(su[j] * sv[j] * db[perm[j]] for j in range(3))
                yield Gm, Gp, nu, mu


def _bilinear_defect(nu, mu, Xo, Yo) -> float:
    out = max(abs(mu[j] * nu[j] - Xo * Yo) for j in range(3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        out = max(out, abs(mu[i] * mu[j] + Xo * nu[k]), abs(nu[i] * nu[j] + Yo * mu[k]))
    return out


def diagonalize_g3(M, tol: float = 1e-5) -> tuple:
    """Principal parameters and pairs ((a,a'),(b,b'),(c,c')) reproducing M.

    The shared singular triples of the real and imaginary Gamma parts are
    assigned to the labels j = 1, 2, 3 (with signs) by trying every labeling
    that satisfies the bilinear relations among mu, nu, Xo, Yo and keeping
    the one whose re-synthesized invariant matches M best.
    """
    M = np.asarray(M, dtype=complex)
    parts = split_parts(M)
    Xo, Yo = -parts.lam_r, -parts.lam_i
    try:
        cands = list(_g3_candidates(parts.gamma_r(), parts.gamma_i()))
    except NotSimultaneouslyDiagonalizable as exc:
        raise NotAnInvariant(f"not a 3-DC-NOT invariant: {exc}") from None
    best = None
    for Gm, Gp, nu, mu in cands:
        if _bilinear_defect(nu, mu, Xo, Yo) > 1e-6:
            continue
        for xi in (1, -1):
            ang = _angles3(nu, mu, Xo, Yo, xi)
            if ang is None:
                continue
            beta, beta1, beta2 = ang
            nu_f, mu_f, Xo_f, Yo_f = principal_values3(beta, beta1, beta2, xi)
            params = PrincipalParams3(
                beta, beta1, beta2, xi,
                RhonBasis(*Gm.T), RhonBasis(*Gp.T),
                nu_f, mu_f, Xo_f, Yo_f,
            )
            pairs = pairs_from_params3(params)
            res = float(np.linalg.norm(_g3(*pairs[0], *pairs[1], *pairs[2]) - M))
            # prefer exact candidates with s_b2 >= 0, where c_b = xi Xo / |(mu_3, Xo)| holds
            off = math.sin(beta2) < -1e-12
            key = (res > 1e-9, off, res)
            if best is None or key < best[0]:
                best = (key, params, pairs)
            if res <= 1e-12 and not off:
                return params, pairs
    if best is None or best[0][2] > tol:
        res = float("nan") if best is None else best[0][2]
        raise NotAnInvariant(f"not a 3-DC-NOT invariant (residual {res:.3g})", res)
    return best[1], best[2]


def canonical_orientation_defect(pairs) -> float:
    """max(|a x b . c|, |b'.c'|, |b'.a'|) for pairs ((a,a'),(b,b'),(c,c'))."""
    (a, ap), (b, bp), (c, cp) = pairs
    return max(abs(np.cross(a, b) @ c), abs(bp @ cp), abs(bp @ ap))


# ---------------------------------------------------------------- G4 blocks


@dataclass(frozen=True)
class Invariant4Blocks:
    """G4 ingredients in the frame where both principal bases are standard."""

    x: np.ndarray
    y: np.ndarray
    x_prime: np.ndarray
    y_prime: np.ndarray
    DeltaX: np.ndarray
    DeltaY: np.ndarray
    Mmu: np.ndarray
    Mnu: np.ndarray
    lam_r: float
    lam_i: float
    d: np.ndarray
    d_prime: np.ndarray


def g4_blocks(params3: PrincipalParams3, d, d_prime) -> Invariant4Blocks:
    """Blocks of the invariant of the 3-run followed by DC-NOT (d, d').

    ``d`` and ``d_prime`` are given in the lab frame and rotated into the
    principal bases (G for wire 0, G' for wire 1).
    """
    ds = params3.G.matrix().T @ np.asarray(d, dtype=float)
    dps = params3.G_prime.matrix().T @ np.asarray(d_prime, dtype=float)
    Mmu, Mnu = params3.Mmu, params3.Mnu

    def dX(Mx):
        return np.outer(dps, ds) * (dps @ Mx @ ds) - Mx @ np.outer(ds, ds) - np.outer(dps, dps) @ Mx + Mx

    x = np.cross(Mmu.T @ dps, ds)
    y = np.cross(Mnu.T @ dps, ds)
    xp = np.cross(Mmu @ ds, dps)
    yp = np.cross(Mnu @ ds, dps)
    return Invariant4Blocks(
        x, y, xp, yp, dX(Mnu), dX(Mmu), Mmu, Mnu,
        float(-dps @ Mnu @ ds), float(-dps @ Mmu @ ds), ds, dps,
    )


def g4_parts(params3: PrincipalParams3, d, d_prime) -> InvariantParts:
    """Invariant parts of the 4-run, rotated back to the lab frame."""
    b = g4_blocks(params3, d, d_prime)
    Xo, Yo = params3.Xo, params3.Yo
    dd = np.outer(b.d_prime, b.d)
    Gr = Xo * dd + np.outer(b.x_prime, b.d) + np.outer(b.d_prime, b.x) + b.DeltaX
    Gi = Yo * dd - np.outer(b.y_prime, b.d) - np.outer(b.d_prime, b.y) + b.DeltaY
    Gm, Gpm = params3.G.matrix(), params3.G_prime.matrix()
    Gr = Gpm @ Gr @ Gm.T
    Gi = Gpm @ Gi @ Gm.T
    return InvariantParts(b.lam_r, b.lam_i, gamma_inv(Gr), gamma_inv(Gi))


# ---------------------------------------------------------------- equivalence and factoring


def lo_rhs_equivalent(A, B, tol: float = 4e-7) -> tuple:
    """Decide A ~ B up to right-multiplied local unitaries (two qubits only).

    Returns (equivalent, zeta) with A2 ~ exp(i zeta) B2.
    """
    A = check_unitary(A, what="A")
    B = check_unitary(B, what="B")
    if A.shape != (4, 4) or B.shape != (4, 4):
        raise ContractError("lo_rhs_equivalent is defined for 4x4 matrices")
    A2, B2 = quad_invariant(A, 2), quad_invariant(B, 2)
    t = np.trace(B2.conj().T @ A2)
    if abs(t) >= 1e-10:
        zeta = float(np.angle(t))
        return bool(np.linalg.norm(A2 - np.exp(1j * zeta) * B2) <= tol), zeta
    if np.linalg.norm(np.abs(A2) - np.abs(B2)) > tol:
        return False, 0.0
    for k in range(4):
        zeta = k * math.pi / 2
        if np.linalg.norm(A2 - np.exp(1j * zeta) * B2) <= tol:
            return True, zeta
    return False, 0.0


@dataclass(frozen=True)
class TensorFactors:
    """M = exp(i phase) * kron(factors[n-1], ..., factors[0]); factors[w] acts on wire w."""

    phase: float
    factors: tuple
    residual: float


def _nearest_su2(X) -> np.ndarray:
    """Closest multiple of an SU(2) matrix, rescaled to det 1."""
    U, _, Vh = np.linalg.svd(X)
    W = U @ Vh
    d = np.linalg.det(W)
    return W / np.sqrt(d)


def factor_tensor_product(M, n: int, tol: float = 1e-6) -> TensorFactors:
    """Split a unitary into a phase times a tensor product of SU(2) factors.

    One wire is peeled at a time (highest wire first) from the dominant
    singular pair of the reshuffled matrix. Raises NotFactorable when the
    reassembled product misses M by more than ``tol`` relative.
    """
    M = check_unitary(M, tol=1e-8)
    if M.shape[0] != 2**n:
        raise ContractError("matrix size does not match n")
    rest = M
    hi_first = []
    for k in range(n - 1, 0, -1):
        m = 2**k
        R = rest.reshape(2, m, 2, m).transpose(0, 2, 1, 3).reshape(4, m * m)
        U, s, Vh = np.linalg.svd(R)
        A = _nearest_su2(U[:, 0].reshape(2, 2))
        hi_first.append(A)
        # Project out A: rest' = tr_A((A^dagger x 1) M) / 2
        rest = np.einsum("ab,bicj->aicj", A.conj().T, rest.reshape(2, m, 2, m))
        rest = (rest[0, :, 0, :] + rest[1, :, 1, :]) / 2
        Ur, _, Vr = np.linalg.svd(rest)
        rest = Ur @ Vr
    last = rest
    d = np.linalg.det(last)
    phase = float(np.angle(d)) / 2
    last = last * np.exp(-1j * phase)
    factors_hi = hi_first + [last]
    P = np.ones((1, 1), dtype=complex)
    for f in factors_hi:
        P = np.kron(P, f)
    P = np.exp(1j * phase) * P
    res = float(np.linalg.norm(P - M) / math.sqrt(M.shape[0]))
    if res > tol:
        raise NotFactorable(f"not a tensor product (relative residual {res:.3g})")
    return TensorFactors(phase, tuple(reversed(factors_hi)), res)


__all__ = [
    "InvariantParts",
    "Invariant4Blocks",
    "PrincipalParams2",
    "PrincipalParams3",
    "TensorFactors",
    "canonical_orientation_defect",
    "dcnot_counterpart",
    "diagonalize_g2",
    "diagonalize_g3",
    "factor_tensor_product",
    "g2_closed",
    "g2_from_params",
    "g2_tail",
    "g3_from_params",
    "g4_blocks",
    "g4_parts",
    "lo_rhs_equivalent",
    "pairs_from_params2",
    "pairs_from_params3",
    "principal_values3",
    "quad_invariant",
    "run_unitary",
    "split_parts",
]
