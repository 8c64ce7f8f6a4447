"""Gate and circuit model, DC-NOT semantics and the QCKT text format.

A DC-NOT with defining vectors (a on wire i, a' on wire j) is the operator
(-1)^(n_a(i) n_a'(j)) where n_a = (1 - sigma_a) / 2. Gate lists are in
application order: ``gates[0]`` acts first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CircuitFormatError, ContractError
from .linalg import I2, embed, expi, paulion, su2_axis_angle

Vec = tuple[float, float, float]


def _as_tuple(v) -> Vec:
    t = tuple(float(x) for x in np.asarray(v, dtype=float).reshape(3))
    if not all(math.isfinite(x) for x in t):
        raise ContractError("vector components must be finite")
    return t  # type: ignore[return-value]


def _check_unit(v: Vec, what: str) -> None:
    if abs(math.sqrt(sum(x * x for x in v)) - 1.0) > 1e-12:
        raise ContractError(f"{what} is not a unit vector: {v}")


@dataclass(frozen=True)
class DcNot:
    """Dressed CNOT between ``wire_i`` (vector ``v_i``) and ``wire_j`` (vector ``v_j``)."""

    wire_i: int
    v_i: Vec
    wire_j: int
    v_j: Vec

    def __post_init__(self):
        object.__setattr__(self, "v_i", _as_tuple(self.v_i))
        object.__setattr__(self, "v_j", _as_tuple(self.v_j))
        if self.wire_i == self.wire_j:
            raise ContractError("a DC-NOT needs two distinct wires")
        _check_unit(self.v_i, "v_i")
        _check_unit(self.v_j, "v_j")

    @property
    def wires(self) -> frozenset:
        return frozenset((self.wire_i, self.wire_j))

    def vector_on(self, wire: int) -> np.ndarray:
        if wire == self.wire_i:
            return np.array(self.v_i)
        if wire == self.wire_j:
            return np.array(self.v_j)
        raise ValueError(f"DC-NOT does not touch wire {wire}")

    def oriented(self, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectors as (vector on ``lo``, vector on ``hi``)."""
        return self.vector_on(lo), self.vector_on(hi)


@dataclass(frozen=True)
class LocalRot:
    """exp(i theta sigma_axis) on one wire."""

    wire: int
    axis: Vec
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "axis", _as_tuple(self.axis))
        object.__setattr__(self, "theta", float(self.theta))
        _check_unit(self.axis, "rotation axis")
        if not math.isfinite(self.theta):
            raise ContractError("rotation angle must be finite")

    def matrix(self) -> np.ndarray:
        return expi(np.array(self.axis), self.theta)


@dataclass(frozen=True)
class GlobalPhase:
    """Scalar factor exp(i theta)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta))
        if not math.isfinite(self.theta):
            raise ContractError("phase must be finite")


Gate = Union[DcNot, LocalRot, GlobalPhase]


@dataclass(frozen=True)
class Circuit:
    nbits: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not 1 <= self.nbits <= 3:
            raise ContractError("nbits must be 1, 2 or 3")
        for g in self.gates:
            for w in gate_wires(g):
                if not 0 <= w < self.nbits:
                    raise ContractError(f"wire {w} out of range for {self.nbits} bits")

    def dcnot_count(self) -> int:
        return sum(isinstance(g, DcNot) for g in self.gates)

    def dcnots(self) -> list:
        return [g for g in self.gates if isinstance(g, DcNot)]


def gate_wires(g: Gate) -> tuple:
    if isinstance(g, DcNot):
        return (g.wire_i, g.wire_j)
    if isinstance(g, LocalRot):
        return (g.wire,)
    if isinstance(g, GlobalPhase):
        return ()
    raise TypeError(f"not a gate: {g!r}")


def dc(a, ap, w0: int = 0, w1: int = 1) -> DcNot:
    """DC-NOT with ``a`` on wire ``w0`` and ``ap`` on wire ``w1``."""
    return DcNot(w0, a, w1, ap)


def dcnot_unitary(d: DcNot, nbits: int) -> np.ndarray:
    """I - 2 P_i P_j with P = (1 - sigma) / 2 on each touched wire."""
    for w in (d.wire_i, d.wire_j):
        if not 0 <= w < nbits:
            raise ContractError(f"wire {w} out of range for {nbits} bits")
    Pi = embed((I2 - paulion(d.v_i)) / 2, d.wire_i, nbits)
    Pj = embed((I2 - paulion(d.v_j)) / 2, d.wire_j, nbits)
    return np.eye(2**nbits, dtype=complex) - 2 * Pi @ Pj


def gate_unitary(g: Gate, nbits: int) -> np.ndarray:
    if isinstance(g, DcNot):
        return dcnot_unitary(g, nbits)
    if isinstance(g, LocalRot):
        if not 0 <= g.wire < nbits:
            raise ContractError(f"wire {g.wire} out of range for {nbits} bits")
        return embed(g.matrix(), g.wire, nbits)
    if isinstance(g, GlobalPhase):
        return np.exp(1j * g.theta) * np.eye(2**nbits, dtype=complex)
    raise TypeError(f"not a gate: {g!r}")


def gates_unitary(gates: Iterable[Gate], nbits: int) -> np.ndarray:
    """Operator product of ``gates`` in application order."""
    out = np.eye(2**nbits, dtype=complex)
    for g in gates:
        out = gate_unitary(g, nbits) @ out
    return out


def circuit_unitary(c: Circuit) -> np.ndarray:
    return gates_unitary(c.gates, c.nbits)


def local_gates(U, wire: int) -> list:
    """Express a 2x2 unitary as at most one LocalRot and one GlobalPhase."""
    U = np.asarray(U, dtype=complex)
    det = np.linalg.det(U)
    phi = float(np.angle(det)) / 2.0
    S = U * np.exp(-1j * phi)
    theta, w = su2_axis_angle(S)
    out: list = []
    if w is None:
        if np.real(S[0, 0]) < 0:
            phi += math.pi
    elif theta > 1e-15:
        out.append(LocalRot(wire, w, theta))
    phi = math.remainder(phi, 2 * math.pi)
    if abs(phi) > 1e-15:
        out.append(GlobalPhase(phi))
    return out


def paulion_gates(a, wire: int) -> list:
    """sigma_a on ``wire`` as exp(i pi/2 sigma_a) times the phase -i."""
    return [LocalRot(wire, a, math.pi / 2), GlobalPhase(-math.pi / 2)]


def negate_vector(d: DcNot, side: str) -> tuple:
    """Flip the sign of one defining vector, compensating with a Paulion.

    Returns (flipped DC-NOT, gates) such that ``gates`` followed by the
    flipped DC-NOT equals ``d``. The Paulion acts on the opposite wire and
    commutes with the DC-NOT.
    """
    if side == "i":
        new = DcNot(d.wire_i, tuple(-x for x in d.v_i), d.wire_j, d.v_j)
        return new, paulion_gates(d.v_j, d.wire_j)
    if side == "j":
        new = DcNot(d.wire_i, d.v_i, d.wire_j, tuple(-x for x in d.v_j))
        return new, paulion_gates(d.v_i, d.wire_i)
    raise ValueError("side must be 'i' or 'j'")


def inverse_gates(gates: Sequence[Gate]) -> list:
    """Gate list of the inverse operator (DC-NOTs are involutions)."""
    out = []
    for g in reversed(gates):
        if isinstance(g, DcNot):
            out.append(g)
        elif isinstance(g, LocalRot):
            out.append(LocalRot(g.wire, g.axis, -g.theta))
        else:
            out.append(GlobalPhase(-g.theta))
    return out


# ---------------------------------------------------------------- text format

MAGIC = "QCKT"
VERSION = "1"
RENORM_TOL = 1e-6
# Vectors this close to unit length are kept bit-for-bit, so a second
# parse of serialized output never perturbs them.
_KEEP_TOL = 1e-14


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _read_unit(tokens: Sequence[str], lineno: int) -> Vec:
    try:
        v = [float(t) for t in tokens]
    except ValueError as exc:
        raise CircuitFormatError(f"bad number: {exc}", lineno) from None
    if not all(math.isfinite(x) for x in v):
        raise CircuitFormatError("non-finite vector component", lineno)
    n = math.sqrt(sum(x * x for x in v))
    if abs(n - 1.0) > RENORM_TOL:
        raise CircuitFormatError(f"vector {tokens} has norm {n:.9g}, not 1", lineno)
    if abs(n - 1.0) > _KEEP_TOL:
        v = [x / n for x in v]
    return tuple(v)  # type: ignore[return-value]


def _read_int(tok: str, lineno: int) -> int:
    if not re.fullmatch(r"[0-9]+", tok):
        raise CircuitFormatError(f"expected a wire index, got {tok!r}", lineno)
    return int(tok)


def _read_float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise CircuitFormatError(f"bad number {tok!r}", lineno) from None
    if not math.isfinite(x):
        raise CircuitFormatError("non-finite angle", lineno)
    return x


def parse(text: str) -> Circuit:
    """Read a circuit from QCKT text."""
    header: list = []
    nbits = None
    gates: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if len(header) == 0:
            if toks != [MAGIC, VERSION]:
                raise CircuitFormatError(f"expected '{MAGIC} {VERSION}' header", lineno)
            header.append(lineno)
            continue
        if nbits is None:
            if len(toks) != 2 or toks[0] != "NBITS":
                raise CircuitFormatError("expected 'NBITS <n>'", lineno)
            nbits = _read_int(toks[1], lineno)
            if not 1 <= nbits <= 3:
                raise CircuitFormatError("NBITS must be 1, 2 or 3", lineno)
            continue
        kind = toks[0]
        if kind == "DCNOT":
            if len(toks) != 9:
                raise CircuitFormatError("DCNOT takes 8 arguments", lineno)
            wi, wj = _read_int(toks[1], lineno), _read_int(toks[2], lineno)
            for w in (wi, wj):
                if w >= nbits:
                    raise CircuitFormatError(f"wire {w} out of range", lineno)
            if wi == wj:
                raise CircuitFormatError("DCNOT wires must differ", lineno)
            gates.append(DcNot(wi, _read_unit(toks[3:6], lineno), wj, _read_unit(toks[6:9], lineno)))
        elif kind == "ROT":
            if len(toks) != 6:
                raise CircuitFormatError("ROT takes 5 arguments", lineno)
            w = _read_int(toks[1], lineno)
            if w >= nbits:
                raise CircuitFormatError(f"wire {w} out of range", lineno)
            gates.append(LocalRot(w, _read_unit(toks[2:5], lineno), _read_float(toks[5], lineno)))
        elif kind == "PHASE":
            if len(toks) != 2:
                raise CircuitFormatError("PHASE takes 1 argument", lineno)
            gates.append(GlobalPhase(_read_float(toks[1], lineno)))
        else:
            raise CircuitFormatError(f"unknown gate {kind!r}", lineno)
    if nbits is None:
        raise CircuitFormatError("NBITS missing" if header else f"NBITS missing (no '{MAGIC} {VERSION}' header)")
    return Circuit(nbits, gates)


def serialize(c: Circuit) -> str:
    """Write a circuit as QCKT text, one gate per line in application order."""
    lines = [f"{MAGIC} {VERSION}", f"NBITS {c.nbits}"]
    for g in c.gates:
        if isinstance(g, DcNot):
            nums = " ".join(_fmt(x) for x in (*g.v_i, *g.v_j))
            lines.append(f"DCNOT {g.wire_i} {g.wire_j} {nums}")
        elif isinstance(g, LocalRot):
            nums = " ".join(_fmt(x) for x in (*g.axis, g.theta))
            lines.append(f"ROT {g.wire} {nums}")
        else:
            lines.append(f"PHASE {_fmt(g.theta)}")
    return "\n".join(lines) + "\n"


def random_circuit(rng, nbits: int, n_dcnots: int, pairs: Sequence | None = None) -> Circuit:
    """Circuit of ``n_dcnots`` DC-NOTs with uniformly random defining vectors.

    Wire pairs are drawn uniformly from ``pairs`` (all pairs by default).
    """
    from .linalg import random_unit

    if nbits < 2:
        raise ContractError("DC-NOTs need at least two wires")
    if pairs is None:
        pairs = [(i, j) for i in range(nbits) for j in range(i + 1, nbits)]
    gates = []
    for _ in range(n_dcnots):
        i, j = pairs[int(rng.integers(len(pairs)))] if len(pairs) > 1 else pairs[0]
        gates.append(DcNot(i, random_unit(rng), j, random_unit(rng)))
    return Circuit(nbits, gates)


__all__ = [
    "Circuit",
    "DcNot",
    "Gate",
    "GlobalPhase",
    "LocalRot",
    "circuit_unitary",
    "dc",
    "dcnot_unitary",
    "gate_unitary",
    "gates_unitary",
    "inverse_gates",
    "local_gates",
    "negate_vector",
    "parse",
    "paulion_gates",
    "random_circuit",
    "serialize",
]
