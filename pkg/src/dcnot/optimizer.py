"""Peephole driver: shrink same-pair DC-NOT runs and merge runs across pairs.

Local gates are always pushed to the end of the circuit by conjugating the
DC-NOTs they cross, so the DC-NOT list alone determines the runs. Every
rewrite is certified when it is made, and the whole result is checked
against the input unitary at the end.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import rewrite2q as r2
from .circuit import Circuit, DcNot, GlobalPhase, LocalRot, circuit_unitary, local_gates
from .errors import CertificateError, ContractError, NoSolutionFound, NotApplicable, NotFactorable
from .invariants import run_unitary
from .linalg import I2
from .rewrite2q import RewriteOutcome, rotate_vector
from .rewrite3q import PassThroughContext, pass_through_1, pass_through_2, pass_through_3

log = logging.getLogger(__name__)

ALL_RULES = frozenset({"4to3", "3to0", "3to1", "3to2", "2to0", "2to1", "pt1", "pt2", "pt3"})


@dataclass(frozen=True)
class OptimizeConfig:
    tol: float = 1e-6
    verify_scale: float = 1e-5
    max_iter: int = 64
    rules: frozenset = ALL_RULES

    def enabled(self, rule: str) -> bool:
        return rule in self.rules


@dataclass(frozen=True)
class Segment:
    """A maximal run of consecutive DC-NOTs on one wire pair."""

    wire_pair: tuple
    start: int
    end: int
    gates: tuple


@dataclass
class OptimizeReport:
    initial_dcnot_count: int
    final_dcnot_count: int = 0
    passes_applied: list = field(default_factory=list)
    total_residual: float = 0.0
    verified: bool = False
    verify_defect: float = float("nan")
    iterations: int = 0
    no_solution: int = 0

    def as_dict(self) -> dict:
        return {
            "initial_dcnot_count": self.initial_dcnot_count,
            "final_dcnot_count": self.final_dcnot_count,
            "passes_applied": [{"rule": r, "position": p} for r, p in self.passes_applied],
            "total_residual": self.total_residual,
            "verified": self.verified,
            "verify_defect": self.verify_defect,
            "iterations": self.iterations,
            "no_solution": self.no_solution,
        }


# ---------------------------------------------------------------- runs


_SMALL = {
    3: (("3to0", r2._three_to_zero_draft), ("3to1", r2._three_to_one_draft), ("3to2", r2._three_to_two_draft)),
    2: (("2to0", r2._two_to_zero_draft), ("2to1", r2._two_to_one_draft)),
}


def _checked(fn, pairs, tol: float) -> tuple:
    """(pairs, pre, post) of a verified draft for ``pairs``."""
    L = run_unitary(pairs)
    d = fn(pairs)
    pre = r2._draft_pre(L, d)
    post = d.post if d.post is not None else r2.IDENTITY_LOCAL
    M = r2._lmat(post) @ run_unitary(d.pairs) @ r2._lmat(pre)
    res = float(np.linalg.norm(M - L))
    if not res <= tol:
        raise CertificateError(f"step residual {res:.3g}", res)
    return d.pairs, pre, post


def _shrink(pairs, config: OptimizeConfig) -> tuple:
    """(pairs, pre, post, rules, notes) with run(pairs_in) = post . run(pairs) . pre."""
    cur = list(pairs)
    pre, post = r2.IDENTITY_LOCAL, r2.IDENTITY_LOCAL
    rules: list = []
    notes: list = []

    def splice(k, new, dpre, dpost):
        # run(cur) = run(rest) . dpost . run(new) . dpre with the window first
        nonlocal cur, pre, post
        rest, Y = r2._sweep_post([("l", dpost)] + [("d", p) for p in cur[k:]])
        cur = list(new) + rest
        pre = r2._lmul(dpre, pre)
        post = r2._lmul(post, Y)

    while len(cur) > 3 and config.enabled("4to3"):
        try:
            new, dpre, dpost = _checked(r2._four_to_three_draft, cur[:4], config.tol)
        except (NoSolutionFound, CertificateError) as exc:
            notes.append(f"4to3 stopped: {exc}")
            log.warning("4->3 stopped at %d DC-NOTs: %s", len(cur), exc)
            break
        splice(4, new, dpre, dpost)
        rules.append("4to3")
    changed = True
    while changed and 2 <= len(cur) <= 3:
        changed = False
        for rule, fn in _SMALL[len(cur)]:
            if not config.enabled(rule):
                continue
            try:
                new, dpre, dpost = _checked(fn, cur, config.tol)
            except (NotApplicable, CertificateError, NotFactorable):
                continue
            if len(new) < len(cur):
                splice(len(cur), new, dpre, dpost)
                rules.append(rule)
                changed = True
                break
    return cur, pre, post, rules, notes


def simplify_run(run: Sequence[DcNot], config: OptimizeConfig | None = None) -> RewriteOutcome:
    """Shrink a same-pair run to at most min(k, 3) DC-NOTs plus locals."""
    config = config or OptimizeConfig()
    lo, hi, pairs = r2._run_frame(run)
    cur, pre, post, rules, notes = _shrink(pairs, config)
    out = r2._certify("simplify_run", run_unitary(pairs), r2._Draft(cur, pre, post), lo, hi, config.tol)
    return RewriteOutcome(out.replacement, out.pre_locals, out.post_locals, out.residual, "+".join(rules), tuple(notes))


# ---------------------------------------------------------------- circuit state


def _push_to_end(gates: Sequence, nbits: int) -> tuple:
    """(DC-NOT list, per-wire tail unitaries) with the same operator as ``gates``.

    Each local crossing a DC-NOT conjugates that DC-NOT's vectors. The global
    phase rides on wire 0's tail.
    """
    Y = [I2.copy() for _ in range(nbits)]
    out = []
    for g in gates:
        if isinstance(g, DcNot):
            vi = rotate_vector(Y[g.wire_i].conj().T, g.v_i)
            vj = rotate_vector(Y[g.wire_j].conj().T, g.v_j)
            out.append(DcNot(g.wire_i, r2._exact_unit(vi), g.wire_j, r2._exact_unit(vj)))
        elif isinstance(g, LocalRot):
            Y[g.wire] = g.matrix() @ Y[g.wire]
        elif isinstance(g, GlobalPhase):
            Y[0] = np.exp(1j * g.theta) * Y[0]
        else:
            raise TypeError(f"not a gate: {g!r}")
    return out, Y


def _tail_gates(Y) -> list:
    out: list = []
    for w, U in enumerate(Y):
        out += local_gates(U, w)
    return out


def segments(dcnots: Sequence[DcNot]) -> list:
    """Maximal same-pair runs of a DC-NOT list."""
    segs: list = []
    start = 0
    for k in range(1, len(dcnots) + 1):
        if k == len(dcnots) or dcnots[k].wires != dcnots[start].wires:
            if k > start:
                pair = tuple(sorted(dcnots[start].wires))
                segs.append(Segment(pair, start, k, tuple(dcnots[start:k])))
            start = k
    return segs


@dataclass
class _State:
    dcnots: list
    tail: list
    nbits: int

    def gates(self) -> list:
        return list(self.dcnots) + _tail_gates(self.tail)

    def count(self) -> int:
        return len(self.dcnots)

    def replaced(self, start: int, end: int, new_gates: Sequence) -> "_State":
        gates = self.dcnots[:start] + list(new_gates) + self.dcnots[end:] + _tail_gates(self.tail)
        d, Y = _push_to_end(gates, self.nbits)
        return _State(d, Y, self.nbits)


def _simplify_all(state: _State, config: OptimizeConfig, report: OptimizeReport | None) -> _State:
    """Shrink every segment whose length can drop, left to right."""
    k = 0
    while True:
        segs = segments(state.dcnots)
        if k >= len(segs):
            return state
        seg = segs[k]
        k += 1
        if len(seg.gates) < 2:
            continue
        try:
            out = simplify_run(seg.gates, config)
        except (CertificateError, NotFactorable) as exc:
            log.warning("segment at %d left as is: %s", seg.start, exc)
            continue
        if report is not None and out.notes:
            report.no_solution += sum("4to3 stopped" in n for n in out.notes)
        if out.dcnot_count() < len(seg.gates):
            state = state.replaced(seg.start, seg.end, out.gates())
            if report is not None:
                report.passes_applied += [(r, seg.start) for r in out.rule.split("+") if r]
                report.total_residual += out.residual
            k = 0


_PT = {1: ("pt1", pass_through_1), 2: ("pt2", pass_through_2), 3: ("pt3", pass_through_3)}


def _junction_moves(state: _State, config: OptimizeConfig):
    """Candidate pass-throughs: a run, a single static gate, then a run on the first pair."""
    segs = segments(state.dcnots)
    for k in range(len(segs) - 2):
        A, S, B = segs[k], segs[k + 1], segs[k + 2]
        if len(S.gates) != 1 or A.wire_pair != B.wire_pair:
            continue
        for mob, static_first in ((A, False), (B, True)):
            if len(mob.gates) > 3:
                continue
            rule, fn = _PT[len(mob.gates)]
            if not config.enabled(rule):
                continue
            start = A.start if not static_first else S.start
            end = S.end if not static_first else B.end
            yield rule, fn, PassThroughContext(mob.gates, S.gates[0], static_first), start, end


def _pass_through_round(state: _State, config: OptimizeConfig, report: OptimizeReport) -> _State | None:
    for rule, fn, ctx, start, end in _junction_moves(state, config):
        try:
            out = fn(ctx)
        except (NotApplicable, CertificateError, NotFactorable, NoSolutionFound):
            continue
        trial = _simplify_all(state.replaced(start, end, out.gates()), config, None)
        if trial.count() < state.count():
            report.passes_applied.append((rule, start))
            report.total_residual += out.residual
            return _simplify_all(state.replaced(start, end, out.gates()), config, report)
    return None


# ---------------------------------------------------------------- driver


def optimize(c: Circuit, config: OptimizeConfig | None = None) -> tuple:
    """Reduce the DC-NOT count of a circuit on at most 3 qubits.

    Returns (circuit, report). The output circuit, local gates included,
    equals the input unitary; the report's ``verified`` flag records the
    final end-to-end check.
    """
    config = config or OptimizeConfig()
    if c.nbits > 3:
        raise ContractError("optimize handles at most 3 qubits")
    report = OptimizeReport(c.dcnot_count())
    d, Y = _push_to_end(c.gates, c.nbits)
    state = _State(d, Y, c.nbits)
    for it in range(config.max_iter):
        report.iterations = it + 1
        before = state.count()
        state = _simplify_all(state, config, report)
        if c.nbits == 3:
            nxt = _pass_through_round(state, config, report)
            if nxt is not None:
                state = nxt
        if state.count() >= before:
            break
    out = Circuit(c.nbits, state.gates())
    report.final_dcnot_count = out.dcnot_count()
    defect = float(np.linalg.norm(circuit_unitary(c) - circuit_unitary(out)))
    report.verify_defect = defect
    report.verified = bool(defect <= config.verify_scale * (1 + len(c.gates)))
    return out, report


__all__ = ["ALL_RULES", "OptimizeConfig", "OptimizeReport", "Segment", "optimize", "segments", "simplify_run"]
