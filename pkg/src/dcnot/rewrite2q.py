"""Constructive rewrites of DC-NOT runs on a single wire pair.

A run is a sequence of DC-NOTs acting on one pair of wires, listed in
application order. Internally the lower wire of the pair is wire 0 and the
higher wire is wire 1, and a DC-NOT is the vector pair (a, a') with a on
wire 0. Every rewrite returns a RewriteOutcome such that

    L = post . R . pre        (pre acts first, post acts last)

holds as an operator identity. The stored residual is the Frobenius norm
of the difference, recomputed from the emitted gates before returning.

Local operators on the pair are carried around as (U0, U1): a 2x2 unitary
per wire, whose operator is kron(U1, U0). Global phases ride on U0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .circuit import DcNot, LocalRot, gates_unitary, local_gates
from .errors import (
    CertificateError,
    ContractError,
    NoSolutionFound,
    NotApplicable,
    NotFactorable,
)
from .invariants import (
    PrincipalParams2,
    _angles_from_products,
    factor_tensor_product,
    g2_tail,
    pairs_from_params2,
    run_unitary,
)
from .linalg import (
    GEOM_TOL,
    I2,
    PAULIS,
    RhonBasis,
    X_HAT,
    Y_HAT,
    Z_HAT,
    complete_rhon,
    cross_fold,
    expi,
    pair_from_su2,
    paulion,
    su2_axis_angle,
    unit,
)

cf = cross_fold
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
IDENTITY_LOCAL = (I2, I2)


# ---------------------------------------------------------------- outcome type


@dataclass(frozen=True)
class RewriteOutcome:
    """A certified rewrite: L = post . replacement . pre."""

    replacement: tuple
    pre_locals: tuple
    post_locals: tuple
    residual: float
    rule: str = ""
    notes: tuple = ()

    def gates(self) -> list:
        return [*self.pre_locals, *self.replacement, *self.post_locals]

    def dcnot_count(self) -> int:
        return len(self.replacement)


@dataclass(frozen=True)
class TClass:
    """Which sufficient 3-to-1 pattern a run matches (None if no pattern)."""

    tag: str | None

    def __bool__(self) -> bool:
        return self.tag is not None


@dataclass(frozen=True)
class PQVectors:
    """p = c w1 + s w2 and q = c w1 - s w2 for an angle xi."""

    xi: float
    p: np.ndarray
    q: np.ndarray


def pq_vectors(w1, w2, xi: float) -> PQVectors:
    c, s = math.cos(xi), math.sin(xi)
    w1, w2 = np.asarray(w1, dtype=float), np.asarray(w2, dtype=float)
    return PQVectors(xi, c * w1 + s * w2, c * w1 - s * w2)


@dataclass
class _Draft:
    """Replacement pairs plus optional explicit locals, before certification."""

    pairs: list
    pre: tuple | None = None
    post: tuple | None = None


# ---------------------------------------------------------------- small helpers


def _par(u, v, tol: float = GEOM_TOL) -> bool:
    return float(np.linalg.norm(np.cross(u, v))) <= tol


def _perp(u, v, tol: float = GEOM_TOL) -> bool:
    return abs(float(np.dot(u, v))) <= tol


def _lmat(loc) -> np.ndarray:
    return np.kron(loc[1], loc[0])


def _lmul(x, y) -> tuple:
    """Local operator x . y (y acts first)."""
    return (x[0] @ y[0], x[1] @ y[1])


def _ldag(x) -> tuple:
    return (x[0].conj().T, x[1].conj().T)


def rotate_vector(U, a) -> np.ndarray:
    """The vector v with sigma_v = U sigma_a U^dagger."""
    S = U @ paulion(a) @ U.conj().T
    return np.array([float(np.real(np.trace(P @ S))) / 2 for P in PAULIS])


def _conj_pair(loc, pair) -> tuple:
    return rotate_vector(loc[0], pair[0]), rotate_vector(loc[1], pair[1])


def _sweep_pre(items) -> tuple:
    """Move every local to the front of a time-ordered item list.

    Items are ("d", (a, a')) or ("l", (U0, U1)). Returns (pairs, Y) with
    operator(items) = run(pairs) . Y.
    """
    Y = IDENTITY_LOCAL
    out = []
    for kind, val in reversed(items):
        if kind == "l":
            Y = _lmul(Y, val)
        else:
            out.append(_conj_pair(Y, val))
    return out[::-1], Y


def _sweep_post(items) -> tuple:
    """Move every local to the end. Returns (pairs, Y) with operator = Y . run(pairs)."""
    Y = IDENTITY_LOCAL
    out = []
    for kind, val in items:
        if kind == "l":
            Y = _lmul(val, Y)
        else:
            out.append(_conj_pair(_ldag(Y), val))
    return out, Y


def _aligned(pair, target) -> list:
    """Items equal to D(pair), written with D(target) when pair = (+-t, +-t').

    D(a, a') = sigma_a'(1) D(-a, a') and D(a, a') = sigma_a(0) D(a, -a');
    the Paulions commute with the DC-NOT.
    """
    a, ap = np.asarray(pair[0], dtype=float), np.asarray(pair[1], dtype=float)
    t, tp = np.asarray(target[0], dtype=float), np.asarray(target[1], dtype=float)
    items = []
    if np.dot(a, t) < 0:
        items.append(("l", (I2, paulion(ap))))
        a = -a
    if np.dot(ap, tp) < 0:
        items.append(("l", (paulion(a), I2)))
    return items + [("d", (t, tp))]


def _cancel(pairs, tol: float = 1e-9) -> list:
    """Drop adjacent equal DC-NOTs (each is an involution)."""
    out: list = []
    for p in pairs:
        if out and np.linalg.norm(out[-1][0] - p[0]) <= tol and np.linalg.norm(out[-1][1] - p[1]) <= tol:
            out.pop()
        else:
            out.append(p)
    return out


def _mirror_pairs(pairs) -> list:
    return [(ap, a) for a, ap in pairs]


def _mirror_draft(d: _Draft) -> _Draft:
    def sw(loc):
        return None if loc is None else (loc[1], loc[0])

    return _Draft(_mirror_pairs(d.pairs), sw(d.pre), sw(d.post))


def _i_power_local(axis, sign: int = 1, wire: int = 1) -> tuple:
    """(sign i)^{n_axis} on ``wire``: exp(i sign pi/4) exp(-i sign pi/4 sigma_axis)."""
    U = np.exp(1j * sign * math.pi / 4) * expi(axis, -sign * math.pi / 4)
    return (U, I2) if wire == 0 else (I2, U)


def _with_phase(pairs, pairs_r, pre) -> tuple:
    """Absorb the scalar left over between run(pairs) and run(pairs_r) . pre."""
    M = run_unitary(pairs_r) @ _lmat(pre)
    z = np.trace(M.conj().T @ run_unitary(pairs))
    return (pre[0] * (z / abs(z)), pre[1])


def su2_taking(src, dst) -> np.ndarray:
    """An SU(2) matrix V with V sigma_src V^dagger = sigma_dst."""
    src, dst = unit(src), unit(dst)
    n = np.cross(src, dst)
    s, c = float(np.linalg.norm(n)), float(np.dot(src, dst))
    if s <= 1e-12:
        if c > 0:
            return I2.copy()
        n = complete_rhon(src).f2
        return expi(n, math.pi / 2)
    return expi(n / s, -math.atan2(s, c) / 2)


# ---------------------------------------------------------------- run normalization


def _run_frame(run: Sequence[DcNot]) -> tuple:
    """(lo, hi, pairs) for a run on one wire pair."""
    run = list(run)
    if not run:
        raise ContractError("empty run")
    wires = run[0].wires
    if any(g.wires != wires for g in run):
        raise ContractError("all DC-NOTs of a run must act on the same wire pair")
    lo, hi = sorted(wires)
    return lo, hi, [tuple(np.array(v) for v in g.oriented(lo, hi)) for g in run]


def _frame_gates(gates, lo: int, hi: int) -> list:
    """Relabel gates from the internal (0, 1) frame to wires (lo, hi)."""
    m = {0: lo, 1: hi}
    out = []
    for g in gates:
        if isinstance(g, DcNot):
            out.append(DcNot(m[g.wire_i], g.v_i, m[g.wire_j], g.v_j))
        elif isinstance(g, LocalRot):
            out.append(LocalRot(m[g.wire], g.axis, g.theta))
        else:
            out.append(g)
    return out


def _exact_unit(v) -> tuple:
    """Unit vector as a tuple, renormalized so the gate constructor accepts it."""
    u = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(u))
    return tuple(float(x) for x in (u if abs(n - 1.0) <= 1e-14 else u / n))


def _dcnot_gates(pairs) -> list:
    return [DcNot(0, _exact_unit(a), 1, _exact_unit(ap)) for a, ap in pairs]


def _loc_gates(loc) -> list:
    if loc is None:
        return []
    return local_gates(loc[0], 0) + local_gates(loc[1], 1)


def _factor_local(M, tol: float = 1e-6) -> tuple:
    try:
        tf = factor_tensor_product(M, 2, tol=tol)
    except NotFactorable as exc:
        raise CertificateError(f"certificate failed: {exc}") from None
    return (np.exp(1j * tf.phase) * tf.factors[0], tf.factors[1])


def _certify(rule: str, L, draft: _Draft, lo: int, hi: int, tol: float) -> RewriteOutcome:
    """Turn a draft into an outcome, computing missing pre-locals by factoring."""
    R = _dcnot_gates(draft.pairs)
    Rm = gates_unitary(R, 2)
    post = draft.post
    pre = draft.pre
    if pre is None:
        P = _lmat(post) if post is not None else np.eye(4)
        pre = _factor_local(Rm.conj().T @ P.conj().T @ L)
    pre_g, post_g = _loc_gates(pre), _loc_gates(post)
    total = gates_unitary(pre_g + R + post_g, 2)
    res = float(np.linalg.norm(total - L))
    if not res <= tol:
        raise CertificateError(f"{rule}: certificate residual {res:.3g} exceeds {tol:g}", res)
    return RewriteOutcome(
        tuple(_frame_gates(R, lo, hi)),
        tuple(_frame_gates(pre_g, lo, hi)),
        tuple(_frame_gates(post_g, lo, hi)),
        res,
        rule,
    )


def _apply(rule: str, fn, run, tol: float, *args) -> RewriteOutcome:
    lo, hi, pairs = _run_frame(run)
    draft = fn(pairs, *args)
    return _certify(rule, run_unitary(pairs), draft, lo, hi, tol)


def _expect(pairs, n: int) -> None:
    if len(pairs) != n:
        raise ContractError(f"expected a run of {n} DC-NOTs, got {len(pairs)}")


# ---------------------------------------------------------------- 2 -> 2: angle swapping


def _swap_frame(a, b) -> tuple:
    """RHON basis (f1 = b, f2, f3) with a = c f1 - s f2, and the angle between a and b."""
    c = float(np.dot(a, b))
    ab = np.cross(a, b)
    s = float(np.linalg.norm(ab))
    if s <= 1e-12:
        F = complete_rhon(b)
        return F, (0.0 if c > 0 else math.pi)
    return (np.asarray(b, dtype=float), (c * b - a) / s, ab / s), math.atan2(s, c)


def _swap_angles_draft(pairs) -> _Draft:
    _expect(pairs, 2)
    (a, ap), (b, bp) = pairs
    (f1, f2, f3), al = _swap_frame(a, b)
    (g1, g2, g3), alp = _swap_frame(ap, bp)
    af = math.cos(alp) * f3 + math.sin(alp) * f2
    apf = math.cos(al) * g3 + math.sin(al) * g2
    U = expi(f3, al / 2) @ expi(f1, -alp / 2)
    Up = expi(g3, alp / 2) @ expi(g1, -al / 2)
    pairs_r = [(af, apf), (f3, g3)]
    pre = _ldag((U, Up))
    return _Draft(pairs_r, pre=_with_phase(pairs, pairs_r, pre))


def swap_angles(run: Sequence[DcNot], tol: float = 1e-8) -> RewriteOutcome:
    """Rewrite two DC-NOTs so the inter-vector angles of the two wires trade places."""
    return _apply("swap_angles", _swap_angles_draft, run, tol)


# ---------------------------------------------------------------- 2 -> 1 and 2 -> 0


def _two_to_one_core(pairs) -> _Draft:
    """b perpendicular to a, b' parallel to a'."""
    (a, ap), (b, bp) = pairs
    items = _aligned((a, ap), (a, bp)) + [("d", (b, bp))]
    (p1, p2), Y = _sweep_pre(items)
    # D(b, c) D(a, c) = [sigma_b sigma_a]^{n_c} = i^{n_c(1)} D(b x a, c)
    c = p2[1]
    return _Draft([(unit(np.cross(p2[0], p1[0])), c)], pre=Y, post=_i_power_local(c, 1, wire=1))


def _two_to_one_draft(pairs) -> _Draft:
    _expect(pairs, 2)
    (a, ap), (b, bp) = pairs
    if _perp(b, a) and _par(bp, ap):
        return _two_to_one_core(pairs)
    if _par(b, a) and _perp(bp, ap):
        return _mirror_draft(_two_to_one_core(_mirror_pairs(pairs)))
    raise NotApplicable("2->1 needs one wire parallel and the other perpendicular")


def reduce_2to1(run: Sequence[DcNot], tol: float = 1e-8) -> RewriteOutcome:
    return _apply("reduce_2to1", _two_to_one_draft, run, tol)


def _two_to_zero_draft(pairs) -> _Draft:
    _expect(pairs, 2)
    (a, ap), (b, bp) = pairs
    if not (_par(a, b) and _par(ap, bp)):
        raise NotApplicable("2->0 needs parallel vectors on both wires")
    items = _aligned((b, bp), (a, ap))
    # D(b,b') D(a,a') = P D(a,a') D(a,a') = P
    Y = IDENTITY_LOCAL
    for kind, val in items:
        if kind == "l":
            Y = _lmul(val, Y)
    return _Draft([], pre=Y)


def reduce_2to0(run: Sequence[DcNot], tol: float = 1e-8) -> RewriteOutcome:
    return _apply("reduce_2to0", _two_to_zero_draft, run, tol)


# ---------------------------------------------------------------- 3 -> 2


def _k_frame(ap, bp, cp, tol: float = 1e-12) -> tuple:
    """Basis (k1 = b', k2, k3) with a' = c k1 - s k2 and c' in span(k1, k3).

    Returns (k1, k2, k3, s_lam, c_lam, s_phi, c_phi).
    """
    bp = np.asarray(bp, dtype=float)
    ab = np.cross(ap, bp)
    s = float(np.linalg.norm(ab))
    c = float(np.dot(ap, bp))
    if s > tol:
        k2, k3 = cf([ap, bp, bp]) / s, ab / s
    else:
        bc = np.cross(bp, cp)
        k2 = unit(bc) if np.linalg.norm(bc) > tol else complete_rhon(bp).f2
        k3 = np.cross(bp, k2)
        s = 0.0
    return bp, k2, k3, s, c, float(np.dot(cp, bp)), float(np.dot(cp, k3))


def _three_to_two_primed(pairs) -> tuple:
    """Closed-form G2 data for a 3-run with [a'b'b'].c' = 0.

    Returns (lam2r, h, f2', k2', v1, v2, c') for the replacement invariant
    i L^(2) (whose real part is minus the imaginary part of L^(2)).
    """
    (a, ap), (b, bp), (c, cp) = pairs
    k1, k2, k3, sl, cl, sp, cpp = _k_frame(ap, bp, cp)
    ab, bc = float(np.dot(a, b)), float(np.dot(b, c))
    V = float(np.dot(np.cross(a, b), c))
    lam2r = ab * bc * sl * cpp + cl * sp * V
    h = sl * sp * ab * cf([b, c, c]) - cl * cpp * cf([a, b, c, c]) + sl * float(np.dot(cf([a, b, b]), c)) * c
    v1 = -cl * ab * c + cl * sp * cf([a, b, c]) + sl * cpp * ab * np.cross(b, c)
    v2 = sl * sp * ab * bc * c - cl * cpp * V * c + sl * cf([a, b, b, c, c])
    return lam2r, h, np.cross(k2, cp), k2, v1, v2, np.asarray(cp, dtype=float)


def _null_of(A, tol: float = 1e-9) -> np.ndarray:
    """Unit vector orthogonal to the columns of A, preferring z, x, y."""
    U, s, _ = np.linalg.svd(A)
    null = U[:, s <= tol] if np.any(s <= tol) else U[:, -1:]
    for e in (Z_HAT, X_HAT, Y_HAT):
        v = null @ (null.T @ e)
        if np.linalg.norm(v) > 1e-6:
            return unit(v)
    return unit(null[:, 0])


def _three_to_two_core(pairs) -> _Draft:
    lam2r, h, f2p, k2, v1, v2, cp = _three_to_two_primed(pairs)
    Gi = np.outer(cp, v1) + np.outer(k2, v2)
    nh = float(np.linalg.norm(h))
    if nh > 1e-12:
        ss, f2 = nh, h / nh
    else:
        ss, f2, f2p = 0.0, _null_of(Gi.T), _null_of(Gi)
    _, (pa, pb) = g2_tail(lam2r, ss, f2, f2p, Gi)
    return _Draft([pa, pb])


def three_to_two_predicates(pairs) -> tuple:
    """([abb].c, [a'b'b'].c') for a 3-run; 3->2 applies iff either vanishes."""
    (a, ap), (b, bp), (c, cp) = pairs
    return float(np.dot(cf([a, b, b]), c)), float(np.dot(cf([ap, bp, bp]), cp))


def _three_to_two_draft(pairs) -> _Draft:
    _expect(pairs, 3)
    un, pr = three_to_two_predicates(pairs)
    if abs(pr) <= GEOM_TOL:
        return _three_to_two_core(pairs)
    if abs(un) <= GEOM_TOL:
        return _mirror_draft(_three_to_two_core(_mirror_pairs(pairs)))
    raise NotApplicable("3->2 needs a right spherical angle at b on one wire")


def reduce_3to2(run: Sequence[DcNot], tol: float = 1e-7) -> RewriteOutcome:
    return _apply("reduce_3to2", _three_to_two_draft, run, tol)


def persistence_residuals(pairs) -> tuple:
    """The two scalar conditions under which c' survives a 3->2 rewrite as b'_f."""
    (a, ap), (b, bp), (c, cp) = pairs
    _, _, _, sl, cl, sp, cpp = _k_frame(ap, bp, cp)
    r1 = float(np.dot(cf([ap, bp, bp]), cp))
    u = cpp * float(np.dot(a, b)) * np.cross(a, b) - sl * cl * sp * np.asarray(b, dtype=float)
    return r1, float(np.dot(u, c))


def _persistent_draft(pairs, keep=None, tol: float = 1e-8) -> _Draft:
    _expect(pairs, 3)
    cp = np.asarray(pairs[2][1], dtype=float)
    if keep is not None and np.linalg.norm(np.asarray(keep, dtype=float) - cp) > 1e-12:
        raise ContractError("keep must be the wire-1 vector of the last DC-NOT")
    r1, r2 = persistence_residuals(pairs)
    if abs(r1) > tol or abs(r2) > tol:
        raise NotApplicable(f"persistence conditions fail ({r1:.3g}, {r2:.3g})")
    lam2r, h, f2p, k2, v1, v2, cp = _three_to_two_primed(pairs)
    n1, n2, nh = (float(np.linalg.norm(x)) for x in (v1, v2, h))
    small = 1e-12
    if n1 > small and n2 > small:
        f1, f3 = v2 / n2, v1 / n1
        f2 = np.cross(f3, f1)
    elif n2 > small:
        f1 = v2 / n2
        f2 = unit(np.cross(np.cross(f1, h), f1)) if nh > small and not _par(h, f1) else complete_rhon(f1).f2
        f3 = np.cross(f1, f2)
    elif n1 > small:
        f3 = v1 / n1
        f2 = unit(np.cross(f3, np.cross(h, f3))) if nh > small and not _par(h, f3) else complete_rhon(f3).f3
        f1 = np.cross(f2, f3)
    else:
        f2 = h / nh if nh > small else Z_HAT
        f3, f1 = complete_rhon(f2).f2, complete_rhon(f2).f3
    f1p, f3p = cp, k2
    f2p = np.cross(f3p, f1p)
    sc, cs = n2, n1
    ss = float(np.dot(h, f2))
    alp, al = _angles_from_products(lam2r, ss, sc, cs)
    params = PrincipalParams2(al, alp, RhonBasis(f1, f2, f3), RhonBasis(f1p, f2p, f3p))
    (pa, pb) = pairs_from_params2(params)
    # b'_f is c' itself, copied rather than recomputed
    return _Draft([pa, (pb[0], cp.copy())])


def reduce_3to2_persistent(run: Sequence[DcNot], keep=None, tol: float = 1e-7) -> RewriteOutcome:
    """3->2 rewrite whose second output DC-NOT keeps the last input's wire-1 vector."""
    return _apply("reduce_3to2_persistent", _persistent_draft, run, tol, keep)


# ---------------------------------------------------------------- 3 -> 1


def _sgn(x: float, tol: float = GEOM_TOL) -> int:
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def _tan_equal(u1, v1, u2, v2, tol: float = GEOM_TOL) -> bool:
    """|u1 x v1| / |u1 . v1| == |u2 x v2| / |u2 . v2|, cross-multiplied."""
    lhs = float(np.linalg.norm(np.cross(u1, v1))) * abs(float(np.dot(u2, v2)))
    rhs = float(np.linalg.norm(np.cross(u2, v2))) * abs(float(np.dot(u1, v1)))
    return abs(lhs - rhs) <= tol


def _no_breach(pairs, tol: float = GEOM_TOL) -> bool:
    (a, ap), (b, bp), (c, cp) = pairs
    return all(float(np.linalg.norm(np.cross(u, v))) > tol for u, v in ((a, b), (b, c), (ap, bp), (bp, cp)))


def _t4_holds(pairs, tol: float = GEOM_TOL) -> bool:
    (a, ap), (b, bp), (c, cp) = pairs
    un, pr = three_to_two_predicates(pairs)
    if abs(un) > tol or abs(pr) > tol or not _no_breach(pairs, tol):
        return False
    if not (_tan_equal(a, b, ap, bp, tol) and _tan_equal(b, c, bp, cp, tol)):
        return False
    V = float(np.dot(np.cross(a, b), c))
    Vp = float(np.dot(np.cross(ap, bp), cp))
    s0 = _sgn(V * float(np.dot(a, b)) * float(np.dot(b, c)), tol)
    s1 = _sgn(Vp * float(np.dot(ap, bp)) * float(np.dot(bp, cp)), tol)
    return s0 == -s1


def _classify(pairs, tol: float = GEOM_TOL) -> str | None:
    (a, ap), (b, bp), (c, cp) = pairs
    V = float(np.dot(np.cross(a, b), c))
    Vp = float(np.dot(np.cross(ap, bp), cp))
    checks = (
        ("T1a", lambda: _par(b, a, tol) and _par(bp, ap, tol)),
        ("T1b", lambda: _par(c, b, tol) and _par(cp, bp, tol)),
        ("T2a", lambda: _par(cp, bp, tol) and _par(bp, ap, tol) and abs(V) <= tol),
        ("T2b", lambda: _par(c, b, tol) and _par(b, a, tol) and abs(Vp) <= tol),
        ("T3a", lambda: all(_perp(x, y, tol) for x, y in ((a, b), (a, c), (ap, bp), (ap, cp)))),
        ("T3b", lambda: all(_perp(x, y, tol) for x, y in ((c, a), (c, b), (cp, ap), (cp, bp)))),
        ("T4", lambda: _t4_holds(pairs, tol)),
    )
    for tag, pred in checks:
        if pred():
            return tag
    return None


def classify_3to1(run: Sequence[DcNot], tol: float = GEOM_TOL) -> TClass:
    """First matching 3->1 pattern in the order T1a, T1b, T2a, T2b, T3a, T3b, T4."""
    _, _, pairs = _run_frame(run)
    _expect(pairs, 3)
    return TClass(_classify(pairs, tol))


def _t3a_locals(pairs) -> tuple:
    """Explicit locals X with L = D(a, a') X for a T3a run, from the 2/3-Swapper identity.

    The identity D(b,b')D(a,a') = D(b_f,b'_f) D(a,a') (U x U') holds for any two
    angles; they are chosen so that (b_f, b'_f) = (c, c') and the last two
    DC-NOTs cancel.
    """
    (a, ap), (b, bp), (c, cp) = pairs

    def angle_to(a, b, c):
        return math.atan2(-float(np.dot(c, np.cross(a, b))), float(np.dot(c, b)))

    al, alp = angle_to(a, b, c), angle_to(ap, bp, cp)
    U = expi(a, al / 2) @ expi(b, -alp / 2)
    Up = expi(ap, alp / 2) @ expi(bp, -al / 2)
    return U, Up


def _t4_core(pairs) -> _Draft:
    """Single DC-NOT for a T4 run via the split similarity-transformation identities."""
    (a, ap), (b, bp), (c, cp) = pairs

    def frame(a, b, c):
        k1, k2, k3, sl, cl, sp, cpp = _k_frame(a, b, c)
        return np.column_stack([k1, k2, k3]), math.atan2(sl, cl), math.atan2(sp, cpp)

    K0, lam, phi = frame(a, b, c)
    K1, lamp, phip = frame(ap, bp, cp)

    def close(x, y):
        return abs(math.remainder(x - y, 2 * math.pi)) <= 1e-6

    flip_a = flip_c = None
    for fa, fc, lam_t, phi_t in (
        (False, False, lam, -phi),
        (False, True, lam, math.pi - phi),
        (True, False, math.pi - lam, phi),
        (True, True, math.pi - lam, math.pi + phi),
    ):
        if close(lamp, lam_t) and close(phip, phi_t):
            flip_a, flip_c = fa, fc
            break
    if flip_a is None:
        raise NotApplicable("T4 angle relations not met")
    # negating c' leaves sigma_c(0) acting last; the pre side is factored by the certificate
    post_p = (paulion(c), I2) if flip_c else IDENTITY_LOCAL
    cl, sl, cphi, sphi = math.cos(lam), math.sin(lam), math.cos(phi), math.sin(phi)
    p_zx = np.array([sphi, 0.0, cphi])
    q_zx = np.array([-sphi, 0.0, cphi])
    af = cl * p_zx + sl * Y_HAT
    apf = cl * q_zx + sl * Y_HAT
    if not flip_a:
        # wire 1 carries q-vectors: one DC-NOT (a_f, a'_f), right locals only
        return _Draft([(K0 @ af, K1 @ apf)], post=post_p)
    # wire 1 carries p-vectors: sigma_z(0) . D(a'_f, a_f) . locals, in the special frames
    z0 = (paulion(K0 @ Z_HAT), I2)
    return _Draft([(K0 @ apf, K1 @ af)], post=_lmul(post_p, z0))


def _three_to_one_draft(pairs) -> _Draft:
    _expect(pairs, 3)
    tag = _classify(pairs)
    (a, ap), (b, bp), (c, cp) = pairs
    A, B, C = pairs
    if tag == "T1a":
        # D(b,b') D(a,a') is local
        return _Draft([C], pre=_two_to_zero_draft([A, B]).pre)
    if tag == "T1b":
        return _Draft([A], post=_two_to_zero_draft([B, C]).pre)
    if tag == "T2a":
        # Paulions from aligning a' and c' with b' commute with their own
        # DC-NOT; the one from C is kept as a post-local.
        post = IDENTITY_LOCAL
        if np.dot(cp, bp) < 0:
            post = (paulion(c), I2)
        af = float(np.dot(a, b)) * c - cf([a, b, c])
        return _Draft([(unit(af), np.asarray(bp, dtype=float))], post=post)
    if tag == "T2b":
        m = _mirror_pairs(pairs)
        (ma, map_), (mb, mbp), (mc, mcp) = m
        post = (paulion(mc), I2) if np.dot(mcp, mbp) < 0 else IDENTITY_LOCAL
        af = float(np.dot(ma, mb)) * mc - cf([ma, mb, mc])
        return _mirror_draft(_Draft([(unit(af), np.asarray(mbp, dtype=float))], post=post))
    if tag == "T3a":
        X = _t3a_locals(pairs)
        return _Draft([A], pre=_with_phase(pairs, [A], X))
    if tag == "T3b":
        # The inverse run (c first) is T3a-shaped: L^dagger = D(c,c') X, so
        # L = X^dagger D(c,c') = D(X^dagger c) X^dagger.
        rev = [C, B, A]
        X = _t3a_locals(rev)
        Xd = _ldag(X)
        Rp = _conj_pair(Xd, C)
        return _Draft([Rp], pre=_with_phase(pairs, [Rp], Xd))
    if tag == "T4":
        return _t4_core(pairs)
    raise NotApplicable("no 3->1 pattern matches")


def reduce_3to1(run: Sequence[DcNot], tol: float = 1e-7) -> RewriteOutcome:
    return _apply("reduce_3to1", _three_to_one_draft, run, tol)


# ---------------------------------------------------------------- 3 -> 0


def _mutually_orthogonal(u, v, w, tol: float = GEOM_TOL) -> bool:
    return _perp(u, v, tol) and _perp(v, w, tol) and _perp(u, w, tol)


def _three_to_zero_core(pairs) -> _Draft:
    """Wire 0 all parallel, wire 1 mutually orthogonal."""
    A, B, C = pairs
    a = A[0]
    items = [("d", A)] + _aligned(B, (a, B[1])) + _aligned(C, (a, C[1]))
    run3, Y = _sweep_post(items)
    (_, p1), (_, p2), (_, p3) = run3
    # sigma_c' sigma_b' sigma_a' = i c'.(b' x a') = +-i, so the run is (+-i)^{n_a(0)}
    sign = 1 if float(np.dot(p3, np.cross(p2, p1))) > 0 else -1
    return _Draft([], pre=_i_power_local(a, sign, wire=0), post=Y)


def _three_to_zero_draft(pairs) -> _Draft:
    _expect(pairs, 3)
    (a, ap), (b, bp), (c, cp) = pairs
    if _par(a, b) and _par(b, c) and _mutually_orthogonal(ap, bp, cp):
        return _three_to_zero_core(pairs)
    if _par(ap, bp) and _par(bp, cp) and _mutually_orthogonal(a, b, c):
        return _mirror_draft(_three_to_zero_core(_mirror_pairs(pairs)))
    raise NotApplicable("3->0 needs one wire parallel and the other mutually orthogonal")


def reduce_3to0(run: Sequence[DcNot], tol: float = 1e-7) -> RewriteOutcome:
    return _apply("reduce_3to0", _three_to_zero_draft, run, tol)


# ---------------------------------------------------------------- controlled-U


def controlled_u_pairs(axis, theta: float, control=Z_HAT) -> list:
    """Pairs (time order) of two DC-NOTs equal to [exp(i theta sigma_axis)(0)]^{n_control(1)}."""
    p, q = pair_from_su2(expi(axis, theta))
    # sigma_p sigma_q = U: q acts first
    ctl = np.asarray(control, dtype=float)
    return [(q, ctl), (p, ctl)]


def controlled_u_unitary(axis, theta: float, control=Z_HAT) -> np.ndarray:
    """P0 + P1 (x) U with P = projectors of sigma_control on wire 1, U on wire 0."""
    n = (I2 - paulion(control)) / 2
    return np.kron(I2 - n, I2) + np.kron(n, expi(axis, theta))


def controlled_u_to_dcnots(axis, theta: float, target: int = 0, control: int = 1) -> list:
    """Two DC-NOTs equal to exp(i theta sigma_axis) on ``target`` controlled by n_z on ``control``."""
    return [DcNot(target, _exact_unit(a), control, _exact_unit(c)) for a, c in controlled_u_pairs(axis, theta)]


def flip_controlled_u(axis_target, theta: float, anchor, wire_a: int = 0, wire_b: int = 1) -> list:
    """Gate run equal to [exp(i theta sigma_anchor)(wire_b)]^{n_axis_target(wire_a)}.

    The control and target roles are exchanged: the run applies
    exp(i theta/2 sigma_anchor)(wire_b), exp(-i theta/2 sigma_a)(wire_a) and then
    [exp(i theta sigma_a)(wire_a)]^{n_anchor(wire_b)} as two DC-NOTs.
    """
    a = unit(axis_target)
    bp = unit(anchor)
    gates: list = []
    if abs(theta) > 0:
        gates.append(LocalRot(wire_b, tuple(bp), theta / 2))
        gates.append(LocalRot(wire_a, tuple(a), -theta / 2))
    for u, c in controlled_u_pairs(a, theta, bp):
        gates.append(DcNot(wire_a, _exact_unit(u), wire_b, _exact_unit(c)))
    return gates


# ---------------------------------------------------------------- deflation


def _plane_line(UL, UR) -> np.ndarray:
    """Unit vector perpendicular to both rotation axes (free when an axis is undefined)."""
    _, wL = su2_axis_angle(UL)
    _, wR = su2_axis_angle(UR)
    if wL is not None and wR is not None:
        n = np.cross(wL, wR)
        if np.linalg.norm(n) > 1e-9:
            return unit(n)
        return complete_rhon(wL).f2
    if wL is not None:
        return complete_rhon(wL).f2
    if wR is not None:
        return complete_rhon(wR).f2
    return X_HAT.copy()


def deflation_unitary(thetaL: float, axisL, A_mid, thetaR: float, axisR) -> np.ndarray:
    """CU_L . A(1) . CU_R with controls n_z(1)."""
    return (
        controlled_u_unitary(axisL, thetaL)
        @ np.kron(np.asarray(A_mid, dtype=complex), I2)
        @ controlled_u_unitary(axisR, thetaR)
    )


def _deflate_draft(thetaL, axisL, A_mid, thetaR, axisR) -> _Draft:
    UL, UR = expi(axisL, thetaL), expi(axisR, thetaR)
    A_mid = np.asarray(A_mid, dtype=complex)
    t = _plane_line(UL, UR)
    _, d = pair_from_su2(UL.conj().T, anchor=t)  # sigma_d sigma_t = UL
    _, a = pair_from_su2(UR, anchor=t)  # sigma_t sigma_a = UR
    dp = Z_HAT
    ap = rotate_vector(A_mid, Z_HAT)
    # L = D(d,d') D(t,d') D(t,a') D(a,a') A(1); the invariant is that of the 4-run.
    at, td = float(np.dot(a, t)), float(np.dot(t, d))
    apdp = float(np.dot(ap, dp))
    lam2r = -at * td + apdp * float(np.dot(cf([a, t, t]), d))
    apxdp = np.cross(ap, dp)
    sphi = float(np.linalg.norm(apxdp))
    ss = float(np.dot(np.cross(a, t), d)) * sphi
    f2 = np.asarray(d, dtype=float)
    f2p = apxdp / sphi if sphi > 1e-12 else complete_rhon(dp).f2
    Gi = (
        -at * np.outer(dp, np.cross(t, d))
        + apdp * np.outer(dp, cf([a, t, t, d]))
        - np.outer(cf([ap, dp, dp]), cf([a, t, d, d]))
    )
    _, (pa, pb) = g2_tail(lam2r, ss, f2, f2p, Gi)
    return _Draft([pa, pb])


def deflate(thetaL: float, axisL, A_mid, thetaR: float, axisR, tol: float = 1e-7, wires=(0, 1)) -> RewriteOutcome:
    """Two controlled-U's with a local gate between them, as two DC-NOTs plus locals.

    The operator rewritten is [e^{i thetaL sigma_axisL}(0)]^{n_z(1)} A_mid(1)
    [e^{i thetaR sigma_axisR}(0)]^{n_z(1)}, with A_mid in SU(2).
    """
    A_mid = np.asarray(A_mid, dtype=complex)
    if np.linalg.norm(A_mid.conj().T @ A_mid - I2) > 1e-10 or abs(np.linalg.det(A_mid) - 1) > 1e-10:
        raise ContractError("A_mid must be in SU(2)")
    draft = _deflate_draft(thetaL, axisL, A_mid, thetaR, axisR)
    L = deflation_unitary(thetaL, axisL, A_mid, thetaR, axisR)
    return _certify("deflate", L, draft, wires[0], wires[1], tol)


# ---------------------------------------------------------------- opening a breach


def _draft_pre(L, draft: _Draft) -> tuple:
    """The pre-local of a draft, factored from L = post . R . pre when missing."""
    if draft.pre is not None:
        return draft.pre
    P = _lmat(draft.post) if draft.post is not None else np.eye(4)
    return _factor_local(run_unitary(draft.pairs).conj().T @ P.conj().T @ L)


def breach_residuals(pairs, t, tp) -> np.ndarray:
    """The four persistence conditions on the wedge D(t, t') for a 4-run."""
    wedge = (np.asarray(t, dtype=float), np.asarray(tp, dtype=float))
    right = persistence_residuals([pairs[0], pairs[1], wedge])
    left = persistence_residuals([pairs[3], pairs[2], wedge])
    return np.array(right + left)


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z * z)
    ph = math.pi * (1 + math.sqrt(5)) * k
    return np.stack([r * np.cos(ph), r * np.sin(ph), z], axis=1)


def _linear_t(pairs, tp) -> np.ndarray | None:
    """t solving the two conditions that are linear in t, for a fixed t'."""
    us = []
    for a, b in ((pairs[0], pairs[1]), (pairs[3], pairs[2])):
        _, _, _, sl, cl, sp, cpp = _k_frame(a[1], b[1], tp)
        us.append(cpp * float(np.dot(a[0], b[0])) * np.cross(a[0], b[0]) - sl * cl * sp * np.asarray(b[0], dtype=float))
    n = np.cross(us[0], us[1])
    if np.linalg.norm(n) > 1e-9:
        return unit(n)
    big = max(us, key=lambda u: float(np.linalg.norm(u)))
    if np.linalg.norm(big) > 1e-12:
        return complete_rhon(unit(big)).f2
    return Z_HAT.copy()


def _breach_candidates(pairs):
    """Closed-form wedge choices: t' orthogonal to both [p' q' q'], then t linear."""
    wR = cf([pairs[0][1], pairs[1][1], pairs[1][1]])
    wL = cf([pairs[3][1], pairs[2][1], pairs[2][1]])
    n = np.cross(wR, wL)
    if np.linalg.norm(n) > 1e-9:
        tps = [unit(n)]
    else:
        w = max((wR, wL), key=lambda u: float(np.linalg.norm(u)))
        if np.linalg.norm(w) > 1e-12:
            rb = complete_rhon(unit(w))
            tps = [math.cos(x) * rb.f2 + math.sin(x) * rb.f3 for x in np.linspace(0, math.pi, 7)[:-1]]
        else:
            tps = list(_fibonacci_sphere(16))
    for tp in tps:
        yield _linear_t(pairs, tp), tp


def _breach_dls(pairs, starts: int = 32, tol: float = 1e-9):
    def vec(th, ph):
        return np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])

    def fun(x):
        return breach_residuals(pairs, vec(x[0], x[1]), vec(x[2], x[3]))

    grid = _fibonacci_sphere(starts)
    for k, g in enumerate(grid):
        h = grid[(7 * k + 3) % starts]
        x0 = [math.acos(g[2]), math.atan2(g[1], g[0]), math.acos(h[2]), math.atan2(h[1], h[0])]
        sol = least_squares(fun, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.max(np.abs(sol.fun)) <= tol:
            x = sol.x
            return vec(x[0], x[1]), vec(x[2], x[3])
    return None


def solve_breach(pairs, tol: float = 1e-9) -> tuple:
    """Wedge vectors (t, t') satisfying the four breach constraints within ``tol``."""
    for t, tp in _breach_candidates(pairs):
        if np.max(np.abs(breach_residuals(pairs, t, tp))) <= tol:
            return t, tp
    found = _breach_dls(pairs, tol=tol)
    if found is None:
        raise NoSolutionFound("no wedge satisfies the breach constraints")
    return found


def _breach_parts(pairs, tol: float = 1e-9) -> tuple:
    """Split a 4-run as post . run([xr, (yr, t'), (yl, t'), xl]) . pre."""
    _expect(pairs, 4)
    t, tp = solve_breach(pairs, tol)
    wedge = (t, tp)
    right = [pairs[0], pairs[1], wedge]
    dr = _persistent_draft(right, tol=10 * tol)
    pre = _draft_pre(run_unitary(right), dr)
    left = [pairs[3], pairs[2], wedge]
    dl = _persistent_draft(left, tol=10 * tol)
    # the left half is the adjoint of the reversed run
    post = _ldag(_draft_pre(run_unitary(left), dl))
    return dr.pairs + dl.pairs[::-1], pre, post


def _open_breach_draft(pairs) -> _Draft:
    out, pre, post = _breach_parts(pairs)
    return _Draft(out, pre, post)


def open_breach(run: Sequence[DcNot], tol: float = 1e-6) -> RewriteOutcome:
    """Rewrite 4 DC-NOTs so the middle two share their wire-1 vector."""
    return _apply("open_breach", _open_breach_draft, run, tol)


def _four_to_three_draft(pairs) -> _Draft:
    out, pre, post = _breach_parts(pairs)
    xr, (yr, tp), (yl, _), (p, pp) = out
    # D(yl, t') D(yr, t') = [sigma_yl sigma_yr]^{n_t'}
    M = paulion(yl) @ paulion(yr)
    theta, w = su2_axis_angle(M)
    if w is None:
        w = Z_HAT
    V, W = su2_taking(Z_HAT, tp), su2_taking(Z_HAT, pp)
    # D(p, p') = (-i)^{n_p'} [exp(i pi/2 sigma_p)]^{n_p'}
    dpairs = _deflate_draft(math.pi / 2, p, W.conj().T @ V, theta, w).pairs
    Ld = deflation_unitary(math.pi / 2, p, W.conj().T @ V, theta, w)
    dpre = _factor_local(run_unitary(dpairs).conj().T @ Ld)
    items = [
        ("l", pre),
        ("d", xr),
        ("l", (I2, V.conj().T)),
        ("l", dpre),
        ("d", dpairs[0]),
        ("d", dpairs[1]),
        ("l", (I2, W)),
        ("l", _i_power_local(pp, -1, 1)),
        ("l", post),
    ]
    pairs3, Y = _sweep_pre(items[1:6])
    # items[1:6] = run(pairs3) . Y
    return _Draft(pairs3, _lmul(Y, pre), _lmul(post, _lmul(_i_power_local(pp, -1, 1), (I2, W))))


def reduce_4to3(run: Sequence[DcNot], tol: float = 1e-6) -> RewriteOutcome:
    """Any 4 DC-NOTs on one wire pair as 3 DC-NOTs plus locals."""
    return _apply("reduce_4to3", _four_to_three_draft, run, tol)


# ---------------------------------------------------------------- identity catalog


@dataclass(frozen=True)
class IdentityCase:
    """Two gate runs on wires (0, 1), in application order, claimed equal."""

    name: str
    lhs: tuple
    rhs: tuple
    target: np.ndarray | None = None  # stands in for lhs when it is not a gate run

    def lhs_unitary(self) -> np.ndarray:
        return self.target if self.target is not None else gates_unitary(self.lhs, 2)

    def defect(self) -> float:
        return float(np.linalg.norm(self.lhs_unitary() - gates_unitary(self.rhs, 2)))


def _items_gates(items) -> list:
    out: list = []
    for kind, val in items:
        out += _dcnot_gates([val]) if kind == "d" else _loc_gates(val)
    return out


def _reframe(items, frames) -> list:
    """Conjugate every item by the per-wire SU(2) frames (V0, V1)."""
    if frames is None:
        return list(items)
    V = (np.asarray(frames[0], dtype=complex), np.asarray(frames[1], dtype=complex))
    out = []
    for kind, val in items:
        if kind == "d":
            out.append(("d", _conj_pair(V, val)))
        else:
            out.append(("l", tuple(V[k] @ val[k] @ V[k].conj().T for k in (0, 1))))
    return out


def _case(name, lhs, rhs, frames=None) -> IdentityCase:
    return IdentityCase(name, tuple(_items_gates(_reframe(lhs, frames))), tuple(_items_gates(_reframe(rhs, frames))))


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise NotApplicable(f"identity hypothesis fails: {what}")


def pq(w1, w2, xi: float) -> tuple:
    v = pq_vectors(w1, w2, xi)
    return v.p, v.q


def swapper_expansion(a, b, U=None) -> IdentityCase:
    """SWAP as three DC-NOTs D(a, b'), D(b, a'), D(a, b') with a' = U^+ a U.

    Without U the primed vectors equal the unprimed ones.
    """
    a, b = unit(a), unit(b)
    _require(_perp(a, b), "a must be perpendicular to b")
    if U is None:
        U = I2
    U = np.asarray(U, dtype=complex)
    Ud = U.conj().T
    ap, bp = rotate_vector(Ud, a), rotate_vector(Ud, b)
    rhs = [("l", (U, Ud)), ("d", (a, bp)), ("d", (b, ap)), ("d", (a, bp))]
    return IdentityCase("swapper", (), tuple(_items_gates(rhs)), SWAP.copy())


def two_thirds_swap(a, b, ap, bp, alpha: float, alphap: float, form: str = "after") -> IdentityCase:
    """D(a, a') then D(b, b') with both sides foiled, rewritten with free angles.

    form="after": locals first, then D(a, a'), D(b_f, b'_f).
    form="before": D(a'_f, a_f) swapped-angle pair, D(b, b'), then locals.
    """
    a, b, ap, bp = (unit(v) for v in (a, b, ap, bp))
    _require(_perp(a, b) and _perp(ap, bp), "a perp b and a' perp b'")
    ab, abp = np.cross(a, b), np.cross(ap, bp)
    ca, sa, cb, sb = math.cos(alpha), math.sin(alpha), math.cos(alphap), math.sin(alphap)
    U = expi(a, alpha / 2) @ expi(b, -alphap / 2)
    Up = expi(ap, alphap / 2) @ expi(bp, -alpha / 2)
    lhs = [("d", (a, ap)), ("d", (b, bp))]
    if form == "after":
        rhs = [("l", (U, Up)), ("d", (a, ap)), ("d", (ca * b - sa * ab, cb * bp - sb * abp))]
    elif form == "before":
        rhs = [("d", (cb * a + sb * ab, ca * ap + sa * abp)), ("d", (b, bp)), ("l", (U, Up))]
    else:
        raise ContractError("form must be 'after' or 'before'")
    return _case("two_thirds_swap", lhs, rhs)


def one_third_swap(alpha: float, alphap: float, frames=None) -> IdentityCase:
    """D(q_xy, q'_xy) then D(x, x) equals locals, D(p'_zy, p_zy), D(z, z)."""
    U = expi(Z_HAT, alpha / 2) @ expi(X_HAT, -alphap / 2)
    Up = expi(Z_HAT, alphap / 2) @ expi(X_HAT, -alpha / 2)
    q, qp = pq(X_HAT, -Y_HAT, alpha)[0], pq(X_HAT, -Y_HAT, alphap)[0]
    p, pp = pq(Z_HAT, Y_HAT, alpha)[0], pq(Z_HAT, Y_HAT, alphap)[0]
    lhs = [("d", (q, qp)), ("d", (X_HAT, X_HAT))]
    rhs = [("l", _ldag((U, Up))), ("d", (pp, p)), ("d", (Z_HAT, Z_HAT))]
    return _case("one_third_swap", lhs, rhs, frames)


def sim_trans_rewrite(alpha: float, lam: float, frames=None) -> IdentityCase:
    """D(x,x) M D(x,x) is unchanged when x is replaced by q_xy^lam throughout."""
    q = pq(X_HAT, -Y_HAT, lam)[0]
    ca, sa = math.cos(alpha), math.sin(alpha)

    def side(v):
        M = (ca * paulion(v) + sa * paulion(Z_HAT), sa * paulion(v) + ca * paulion(Z_HAT))
        return [("d", (v, v)), ("l", M), ("d", (v, v))]

    return _case("sim_trans", side(X_HAT), side(q), frames)


def _split_parts(phi: float, lam: float) -> tuple:
    alpha = (math.pi / 2 - phi) / 2
    beta = math.pi / 2 - alpha
    q = pq(X_HAT, -Y_HAT, lam)[0]
    pzx, qzx = pq(Z_HAT, X_HAT, phi)
    cl, sl = math.cos(lam), math.sin(lam)
    af, afp = cl * pzx + sl * Y_HAT, cl * qzx + sl * Y_HAT

    def u(x):
        return (math.cos(x) * paulion(X_HAT) + math.sin(x) * paulion(Z_HAT)) @ (
            math.cos(x) * paulion(q) + math.sin(x) * paulion(Z_HAT)
        )

    return q, pzx, qzx, af, afp, u(alpha), u(beta)


def split_sim_trans(phi: float, lam: float, frames=None) -> IdentityCase:
    """D(q,q), D(x,x), D(p_zx^phi, q_zx^phi) collapse to one DC-NOT plus locals."""
    q, pzx, qzx, af, afp, U, Up = _split_parts(phi, lam)
    lhs = [("d", (q, q)), ("d", (X_HAT, X_HAT)), ("d", (pzx, qzx))]
    rhs = [("l", (U, Up)), ("d", (af, afp))]
    return _case("split_sim_trans", lhs, rhs, frames)


def split_sim_trans2(phi: float, lam: float, frames=None) -> IdentityCase:
    """Variant with p_xy^lam and p_zx^phi on wire 1."""
    q, pzx, qzx, af, afp, U, Up = _split_parts(phi, lam)
    p = pq(X_HAT, Y_HAT, lam)[0]
    lhs = [("d", (q, p)), ("d", (X_HAT, X_HAT)), ("d", (pzx, pzx))]
    SZm = paulion(Z_HAT)
    rhs = [("l", (Up @ SZm, U @ paulion(q) @ paulion(X_HAT))), ("d", (afp, af)), ("l", (SZm, I2))]
    return _case("split_sim_trans2", lhs, rhs, frames)
