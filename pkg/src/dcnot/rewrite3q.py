"""Three-qubit rewrites: the wake identity and the pass-through identities.

A pass-through moves a run of DC-NOTs on one wire pair past a single
"static" DC-NOT on another pair sharing one wire. Internally the shared wire
is 0, the mobile run's other wire is 1 and the static gate's other wire is 2.
Outcomes follow the rewrite2q convention L = post . R . pre and are certified
by factoring the 8x8 defect into single-qubit pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import DcNot, GlobalPhase, gates_unitary, inverse_gates, local_gates
from .errors import CertificateError, ContractError, NotAnInvariant, NotApplicable, NotFactorable
from .invariants import diagonalize_g2, factor_tensor_product, quad_invariant, run_unitary
from .linalg import GEOM_TOL, X_HAT, Y_HAT, Z_HAT, across, unit
from .rewrite2q import (
    RewriteOutcome,
    _classify,
    _conj_pair,
    _exact_unit,
    _perp,
    _three_to_one_draft,
)


@dataclass(frozen=True)
class PassThroughContext:
    """A mobile run on one wire pair next to a static DC-NOT on an overlapping pair.

    ``static_first`` tells whether the static gate acts before the run.
    """

    mobile_run: tuple
    static_gate: DcNot
    static_first: bool = False

    def __post_init__(self):
        run = tuple(self.mobile_run)
        object.__setattr__(self, "mobile_run", run)
        if not 1 <= len(run) <= 3:
            raise ContractError("a pass-through moves 1 to 3 DC-NOTs")
        pair = run[0].wires
        if any(g.wires != pair for g in run):
            raise ContractError("mobile DC-NOTs must share one wire pair")
        shared = pair & self.static_gate.wires
        if len(shared) != 1:
            raise ContractError("mobile and static gates must share exactly one wire")

    @property
    def wire_map(self) -> tuple:
        """(shared, mobile other, static other) as circuit wires."""
        (s,) = self.mobile_run[0].wires & self.static_gate.wires
        (m,) = self.mobile_run[0].wires - {s}
        (t,) = self.static_gate.wires - {s}
        return s, m, t


def _internal(ctx: PassThroughContext) -> tuple:
    s, m, t = ctx.wire_map
    run = [(g.vector_on(s), g.vector_on(m)) for g in ctx.mobile_run]
    st = (ctx.static_gate.vector_on(s), ctx.static_gate.vector_on(t))
    return run, st


def _d01(p) -> DcNot:
    return DcNot(0, _exact_unit(p[0]), 1, _exact_unit(p[1]))


def _d02(p) -> DcNot:
    return DcNot(0, _exact_unit(p[0]), 2, _exact_unit(p[1]))


def _relabel(gates, wmap) -> tuple:
    out = []
    for g in gates:
        if isinstance(g, DcNot):
            out.append(DcNot(wmap[g.wire_i], g.v_i, wmap[g.wire_j], g.v_j))
        elif isinstance(g, GlobalPhase):
            out.append(g)
        else:
            out.append(type(g)(wmap[g.wire], g.axis, g.theta))
    return tuple(out)


def _local3(M, tol: float) -> list:
    try:
        tf = factor_tensor_product(M, 3, tol=tol)
    except NotFactorable as exc:
        raise CertificateError(f"pass-through certificate failed: {exc}") from None
    gates = [GlobalPhase(tf.phase)] if abs(tf.phase) > 1e-15 else []
    for w in range(3):
        gates += local_gates(tf.factors[w], w)
    return gates


def _certify3(rule: str, L, R: list, tol: float) -> tuple:
    """(pre gates, residual) with L = R . pre, or CertificateError."""
    Rm = gates_unitary(R, 3)
    pre = _local3(Rm.conj().T @ L, 1e-6)
    res = float(np.linalg.norm(gates_unitary(pre + R, 3) - L))
    if not res <= tol:
        raise CertificateError(f"{rule}: certificate residual {res:.3g} exceeds {tol:g}", res)
    return pre, res


def _pass(rule: str, ctx: PassThroughContext, build, tol: float) -> RewriteOutcome:
    """Run ``build`` on the mobile-first form and map the result back."""
    run, st = _internal(ctx)
    if ctx.static_first:
        # L = run . D02 has adjoint D02 . run-reversed: the mobile-first shape
        run = run[::-1]
    L = gates_unitary([_d01(p) for p in run] + [_d02(st)], 3)
    R = build(run, st)
    pre, res = _certify3(rule, L, R, tol)
    s, m, t = ctx.wire_map
    wmap = {0: s, 1: m, 2: t}
    if not ctx.static_first:
        return RewriteOutcome(_relabel(R, wmap), _relabel(pre, wmap), (), res, rule)
    # L^dagger = R . pre, so L = pre^dagger . R^dagger
    return RewriteOutcome(_relabel(R[::-1], wmap), (), _relabel(inverse_gates(pre), wmap), res, rule)


# ---------------------------------------------------------------- wake


def wake_rewrite(first: DcNot, second: DcNot) -> tuple:
    """Exchange two foiled DC-NOTs on overlapping pairs, leaving a wake.

    ``first`` acts before ``second``; their vectors on the shared wire must
    be perpendicular. Returns (second, wake, first) in application order,
    where the wake joins the two unshared wires. The result equals the input
    exactly, with no external locals.
    """
    shared = first.wires & second.wires
    if len(shared) != 1:
        raise ContractError("wake needs two DC-NOTs sharing exactly one wire")
    (s,) = shared
    if not _perp(first.vector_on(s), second.vector_on(s)):
        raise NotApplicable("wake needs perpendicular vectors on the shared wire")
    (w1,) = first.wires - {s}
    (w2,) = second.wires - {s}
    wake = DcNot(w2, second.v_i if second.wire_i == w2 else second.v_j, w1, first.v_i if first.wire_i == w1 else first.v_j)
    return (second, wake, first)


# ---------------------------------------------------------------- pass-through 1


def _pt1(run, st) -> list:
    (a, ap), = run
    e, _ = st
    if np.linalg.norm(np.cross(a, e)) > GEOM_TOL:
        raise NotApplicable("pass-through 1 needs the shared-wire vectors parallel")
    # D(-a, a') differs from D(a, a') by sigma_a'(1), which the certificate absorbs
    return [_d02(st), _d01((np.asarray(e, dtype=float), ap))]


def pass_through_1(ctx: PassThroughContext, tol: float = 1e-8) -> RewriteOutcome:
    """Move one DC-NOT past the static one; applies iff their shared-wire vectors are parallel."""
    if len(ctx.mobile_run) != 1:
        raise ContractError("pass-through 1 moves a single DC-NOT")
    return _pass("pass_through_1", ctx, _pt1, tol)


# ---------------------------------------------------------------- pass-through 2


def wedge_candidates(run, e) -> list:
    """Wire-1 vectors t' to try so that [a, b, (e, t')] may collapse to one DC-NOT."""
    (a, ap), (b, bp) = run
    bp = np.asarray(bp, dtype=float)
    out = [bp]
    n = np.cross(ap, bp)
    if np.linalg.norm(n) > GEOM_TOL:
        out.append(unit(n))
        k3 = unit(n)
        # T4: t' = sin(phi') b' + cos(phi') k3 with phi' tied to the wire-0 angle
        ebn = np.cross(b, e)
        if np.linalg.norm(ebn) > GEOM_TOL:
            m3 = unit(np.cross(a, b)) if np.linalg.norm(np.cross(a, b)) > GEOM_TOL else unit(ebn)
            phi = math.atan2(float(np.dot(e, b)), float(np.dot(e, m3)))
            for ph in (phi, -phi, math.pi - phi, math.pi + phi):
                out.append(math.sin(ph) * bp + math.cos(ph) * k3)
    out.append(np.asarray(ap, dtype=float))
    return out


def _pt2(run, st) -> list:
    e = np.asarray(st[0], dtype=float)
    for tp in wedge_candidates(run, e):
        three = [run[0], run[1], (e, tp)]
        if _classify(three) is None:
            continue
        try:
            draft = _three_to_one_draft(three)
        except NotApplicable:
            continue
        # [a, b, (e, t')] = post . D(f) . pre, and post . D(f) = D(post f) . post
        (f,) = draft.pairs
        if draft.post is not None:
            f = _conj_pair(draft.post, f)
        return [_d01(f), _d02(st), _d01((e, tp))]
    raise NotApplicable("no wedge vector makes the mobile pair collapse")


def pass_through_2(ctx: PassThroughContext, tol: float = 1e-7) -> RewriteOutcome:
    """Move a two-DC-NOT run past the static one, if a collapsing wedge exists."""
    if len(ctx.mobile_run) != 2:
        raise ContractError("pass-through 2 moves two DC-NOTs")
    return _pass("pass_through_2", ctx, _pt2, tol)


# ---------------------------------------------------------------- pass-through 3


def _lam_i(pairs) -> float:
    return float(np.imag(np.trace(quad_invariant(run_unitary(pairs), 2)))) / 4


def wedge_functional(run, e) -> np.ndarray:
    """m with Im tr(L^(2))/4 = m . d' for the 4-run [a, b, c, (e, d')], d' unit."""
    e = np.asarray(e, dtype=float)
    return np.array([_lam_i(list(run) + [(e, v)]) for v in (X_HAT, Y_HAT, Z_HAT)])


def choose_wedge(run, e) -> np.ndarray:
    """Deterministic unit d' with m . d' = 0: the across-part of a seed axis."""
    m = wedge_functional(run, e)
    if np.linalg.norm(m) <= 1e-12:
        return Z_HAT.copy()
    for seed in (Z_HAT, X_HAT, Y_HAT):
        if np.linalg.norm(np.cross(seed, m)) > 1e-6:
            return unit(across(seed, m))
    return unit(np.cross(m, X_HAT))


def _two_from_invariant(pairs4) -> list:
    """Two DC-NOTs LO-RHS equivalent to a 4-run whose invariant has a real trace."""
    L2 = quad_invariant(run_unitary(pairs4), 2)
    U4 = run_unitary(pairs4)
    last = None
    for z in (-1, 1, 1j, -1j):
        try:
            _, pairs2 = diagonalize_g2(z * L2)
        except NotAnInvariant as exc:
            last = exc
            continue
        R = run_unitary(pairs2)
        try:
            factor_tensor_product(R.conj().T @ U4, 2, tol=1e-7)
        except NotFactorable as exc:
            last = exc
            continue
        return list(pairs2)
    raise CertificateError(f"4-run did not deflate to two DC-NOTs: {last}")


def _pt3(run, st) -> list:
    e = np.asarray(st[0], dtype=float)
    dp = choose_wedge(run, e)
    pa, pb = _two_from_invariant(list(run) + [(e, dp)])
    return [_d01(pa), _d01(pb), _d02(st), _d01((e, dp))]


def pass_through_3(ctx: PassThroughContext, tol: float = 1e-6) -> RewriteOutcome:
    """Move a three-DC-NOT run past the static one; always possible."""
    if len(ctx.mobile_run) != 3:
        raise ContractError("pass-through 3 moves three DC-NOTs")
    return _pass("pass_through_3", ctx, _pt3, tol)


def pass_through(ctx: PassThroughContext) -> RewriteOutcome:
    """Dispatch on the mobile run length."""
    fn = {1: pass_through_1, 2: pass_through_2, 3: pass_through_3}[len(ctx.mobile_run)]
    return fn(ctx)
