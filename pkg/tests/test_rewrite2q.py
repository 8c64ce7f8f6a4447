import math

import numpy as np
import pytest
from hypothesis import given

import instances as gen
from conftest import angles, su2s, unit_vectors
from dcnot import rewrite2q as rw
from dcnot.circuit import DcNot, dc, gates_unitary
from dcnot.errors import ContractError, NotApplicable, NoSolutionFound
from dcnot.invariants import run_unitary
from dcnot.linalg import I2, X_HAT, Y_HAT, Z_HAT, expi, paulion, random_su2, random_unit, unit
from dcnot.rewrite2q import (
    breach_residuals,
    classify_3to1,
    controlled_u_pairs,
    controlled_u_to_dcnots,
    controlled_u_unitary,
    deflate,
    deflation_unitary,
    flip_controlled_u,
    one_third_swap,
    open_breach,
    pq_vectors,
    reduce_2to0,
    reduce_2to1,
    reduce_3to0,
    reduce_3to1,
    reduce_3to2,
    reduce_3to2_persistent,
    reduce_4to3,
    sim_trans_rewrite,
    split_sim_trans,
    split_sim_trans2,
    swap_angles,
    swapper_expansion,
    two_thirds_swap,
)

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def run(pairs):
    return [dc(a, ap) for a, ap in pairs]


def defect(outcome, pairs):
    return np.linalg.norm(gates_unitary(outcome.gates(), 2) - run_unitary(pairs))


def angle(u, v):
    return math.atan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v))


def out_pairs(outcome):
    return [(np.array(g.v_i), np.array(g.v_j)) for g in outcome.replacement]


# ---------------------------------------------------------------- angle swapping


def test_swap_angles_example():
    pairs = [(Y_HAT, X_HAT), (X_HAT, X_HAT)]
    o = swap_angles(run(pairs))
    (af, apf), (bf, bpf) = out_pairs(o)
    assert angle(af, bf) == pytest.approx(0, abs=1e-12)
    assert angle(apf, bpf) == pytest.approx(math.pi / 2, abs=1e-12)
    assert defect(o, pairs) <= 1e-8


@given(unit_vectors(), unit_vectors(), unit_vectors(), unit_vectors())
def test_swap_angles_exchanges(a, b, ap, bp):
    pairs = [(a, ap), (b, bp)]
    o = swap_angles(run(pairs))
    assert len(o.replacement) == 2 and o.residual <= 1e-8
    (af, apf), (bf, bpf) = out_pairs(o)
    assert angle(af, bf) == pytest.approx(angle(ap, bp), abs=1e-7)
    assert angle(apf, bpf) == pytest.approx(angle(a, b), abs=1e-7)


def test_swap_angles_moves_breach(rng):
    a, ap, bp = random_unit(rng), random_unit(rng), random_unit(rng)
    o = swap_angles(run([(a, ap), (a, bp)]))
    (af, apf), (bf, bpf) = out_pairs(o)
    assert np.linalg.norm(np.cross(apf, bpf)) <= 1e-9


# ---------------------------------------------------------------- 2 -> 1, 2 -> 0


def test_2to1_example():
    pairs = [(Y_HAT, Z_HAT), (X_HAT, Z_HAT)]
    o = reduce_2to1(run(pairs))
    (f, fp), = out_pairs(o)
    assert abs(abs(f @ Z_HAT) - 1) <= 1e-12 and np.allclose(fp, Z_HAT)
    assert defect(o, pairs) <= 1e-8


def test_2to1_hypothesis_and_mirror(rng):
    for _ in range(100):
        pairs = gen.two_to_one(rng)
        o = reduce_2to1(run(pairs))
        assert len(o.replacement) == 1 and defect(o, pairs) <= 1e-8


def test_2to1_generic():
    with pytest.raises(NotApplicable):
        reduce_2to1(run(gen.generic(np.random.default_rng(3), 2)))


def test_2to0_examples():
    d = (unit([1.0, 2, 3]), unit([0.0, 1, -1]))
    o = reduce_2to0(run([d, d]))
    assert o.replacement == () and o.pre_locals == () and o.post_locals == ()
    pairs = [d, (-d[0], d[1])]
    o = reduce_2to0(run(pairs))
    assert o.replacement == () and defect(o, pairs) <= 1e-8
    with pytest.raises(NotApplicable):
        reduce_2to0(run([(X_HAT, Z_HAT), (Y_HAT, Z_HAT)]))


def test_2to0_hypothesis(rng):
    for _ in range(100):
        pairs = gen.two_to_zero(rng)
        assert defect(reduce_2to0(run(pairs)), pairs) <= 1e-8


# ---------------------------------------------------------------- 3 -> 2


def test_3to2(rng):
    for _ in range(100):
        pairs = gen.three_to_two(rng)
        o = reduce_3to2(run(pairs))
        assert len(o.replacement) == 2 and defect(o, pairs) <= 1e-7
    with pytest.raises(NotApplicable):
        reduce_3to2(run(gen.generic(rng, 3)))


def test_3to2_collinear():
    a, ap = unit([1.0, 1, 0]), unit([0.0, 1, 2])
    pairs = [(a, ap), (a, ap), (-a, ap)]
    o = reduce_3to2(run(pairs))
    assert len(o.replacement) == 2 and defect(o, pairs) <= 1e-7


def test_3to2_persistent(rng):
    for _ in range(50):
        pairs = gen.persistent(rng)
        o = reduce_3to2_persistent(run(pairs), keep=pairs[2][1])
        assert o.replacement[1].v_j == tuple(float(x) for x in pairs[2][1])
        assert defect(o, pairs) <= 1e-7


def test_3to2_persistent_rejects(rng):
    pairs = gen.persistent(rng)
    pairs[2] = (unit(pairs[2][0] + 0.3 * random_unit(rng)), pairs[2][1])
    with pytest.raises(NotApplicable):
        reduce_3to2_persistent(run(pairs), keep=pairs[2][1])
    with pytest.raises(ContractError):
        reduce_3to2_persistent(run(pairs), keep=X_HAT)


# ---------------------------------------------------------------- 3 -> 1


def test_3to1_t2a_example():
    pairs = [(X_HAT, Z_HAT), (unit(X_HAT + Y_HAT), Z_HAT), (Y_HAT, Z_HAT)]
    assert classify_3to1(run(pairs)).tag == "T2a"
    o = reduce_3to1(run(pairs))
    (f, _), = out_pairs(o)
    assert abs(abs(f @ unit(X_HAT + Y_HAT)) - 1) <= 1e-12
    # sigma_c sigma_b sigma_a is proportional to sigma of that vector
    P = paulion(Y_HAT) @ paulion(unit(X_HAT + Y_HAT)) @ paulion(X_HAT)
    assert np.allclose(P, paulion(unit(X_HAT + Y_HAT)))
    assert defect(o, pairs) <= 1e-7


@pytest.mark.parametrize("tag", gen.T_TAGS)
def test_3to1_each_class(rng, tag):
    for _ in range(40):
        pairs = gen.three_to_one(rng, tag)
        assert classify_3to1(run(pairs)).tag is not None
        o = reduce_3to1(run(pairs))
        assert len(o.replacement) == 1 and defect(o, pairs) <= 1e-7


def test_3to1_generic(rng):
    pairs = gen.generic(rng, 3)
    assert classify_3to1(run(pairs)).tag is None
    with pytest.raises(NotApplicable):
        reduce_3to1(run(pairs))


# ---------------------------------------------------------------- 3 -> 0


def test_3to0_example():
    pairs = [(X_HAT, Z_HAT), (Y_HAT, Z_HAT), (Z_HAT, Z_HAT)]
    o = reduce_3to0(run(pairs))
    assert o.replacement == () and defect(o, pairs) <= 1e-7
    assert all(getattr(g, "wire", 1) == 1 for g in o.gates())
    with pytest.raises(NotApplicable):
        reduce_3to0(run([(X_HAT, X_HAT)] * 3))


def test_3to0_hypothesis(rng):
    for _ in range(100):
        pairs = gen.three_to_zero(rng)
        assert defect(reduce_3to0(run(pairs)), pairs) <= 1e-7


# ---------------------------------------------------------------- controlled-U and flip


def test_controlled_u_examples():
    (q, c1), (p, c2) = controlled_u_pairs(X_HAT, 0.0)
    assert np.allclose(p, q) and np.allclose(c1, Z_HAT) and np.allclose(c2, Z_HAT)
    (q, _), (p, _) = controlled_u_pairs(Z_HAT, math.pi / 2)
    assert abs(p @ q) <= 1e-12 and abs(p[2]) <= 1e-12 and abs(q[2]) <= 1e-12
    # controlled i sigma_x
    U = gates_unitary(controlled_u_to_dcnots(X_HAT, math.pi / 2), 2)
    want = np.eye(4, dtype=complex)
    want[2:, 2:] = 1j * paulion(X_HAT)
    assert np.linalg.norm(U - want) <= 1e-10


@given(unit_vectors(), angles)
def test_controlled_u_exact(axis, theta):
    U = gates_unitary(controlled_u_to_dcnots(axis, theta), 2)
    assert np.linalg.norm(U - controlled_u_unitary(axis, theta)) <= 1e-10


def _flipped_target(a, theta, bp):
    n = (I2 - paulion(a)) / 2
    return np.kron(I2, I2 - n) + np.kron(expi(bp, theta), n)


def test_flip_examples():
    assert np.allclose(gates_unitary(flip_controlled_u(X_HAT, 0.0, Z_HAT), 2), np.eye(4))
    g = flip_controlled_u(X_HAT, math.pi, Z_HAT)
    assert np.linalg.norm(gates_unitary(g, 2) - _flipped_target(X_HAT, math.pi, Z_HAT)) <= 1e-10


@given(unit_vectors(), angles, unit_vectors())
def test_flip_exact(a, theta, bp):
    g = flip_controlled_u(a, theta, bp)
    assert np.linalg.norm(gates_unitary(g, 2) - _flipped_target(a, theta, bp)) <= 1e-10


# ---------------------------------------------------------------- deflation


def _deflate_defect(o, args):
    return np.linalg.norm(gates_unitary(o.gates(), 2) - deflation_unitary(*args))


def test_deflate_examples(rng):
    cases = [
        (0.0, random_unit(rng), random_su2(rng), 0.0, random_unit(rng)),
        (0.8, random_unit(rng), I2, -1.3, random_unit(rng)),
        (0.8, Z_HAT, I2, 2.0, Z_HAT),
    ]
    for args in cases:
        o = deflate(*args)
        assert len(o.replacement) == 2 and _deflate_defect(o, args) <= 1e-7


@given(angles, unit_vectors(), su2s(), angles, unit_vectors())
def test_deflate_generic(tL, wL, A, tR, wR):
    args = (tL, wL, A, tR, wR)
    o = deflate(*args)
    assert len(o.replacement) <= 2 and _deflate_defect(o, args) <= 1e-7


def test_deflate_contract():
    with pytest.raises(ContractError):
        deflate(0.3, X_HAT, 1j * I2, 0.2, Z_HAT)


# ---------------------------------------------------------------- breach and 4 -> 3


def test_open_breach(rng):
    for _ in range(40):
        pairs = gen.generic(rng, 4)
        o = open_breach(run(pairs))
        d = o.replacement
        assert len(d) == 4 and d[1].v_j == d[2].v_j
        assert defect(o, pairs) <= 1e-6


def test_breach_constraints_with_existing_breach(rng):
    a, b, c, d = (random_unit(rng) for _ in range(4))
    ap, tp, dp = random_unit(rng), random_unit(rng), random_unit(rng)
    pairs = [(a, ap), (b, tp), (c, tp), (d, dp)]
    o = open_breach(run(pairs))
    assert o.replacement[1].v_j == o.replacement[2].v_j and defect(o, pairs) <= 1e-6


def test_breach_solution_satisfies_constraints(rng):
    for _ in range(20):
        pairs = gen.generic(rng, 4)
        t, tp = rw.solve_breach(pairs)
        assert np.max(np.abs(breach_residuals(pairs, t, tp))) <= 1e-9


def test_4to3(rng):
    for _ in range(40):
        pairs = gen.generic(rng, 4)
        o = reduce_4to3(run(pairs))
        assert len(o.replacement) <= 3 and defect(o, pairs) <= 1e-6


def test_4to3_near_degenerate(rng):
    for _ in range(20):
        pairs = [tuple(unit(Z_HAT + 1e-3 * rng.normal(size=3)) for _ in range(2)) for _ in range(4)]
        try:
            o = reduce_4to3(run(pairs))
        except NoSolutionFound:
            continue
        assert len(o.replacement) <= 3 and defect(o, pairs) <= 1e-6


def test_4to3_axis_aligned(rng):
    axes = [s * e for e in (X_HAT, Y_HAT, Z_HAT) for s in (1, -1)]
    for _ in range(100):
        pairs = [(axes[rng.integers(6)], axes[rng.integers(6)]) for _ in range(4)]
        o = reduce_4to3(run(pairs))
        assert len(o.replacement) <= 3 and defect(o, pairs) <= 1e-6


# ---------------------------------------------------------------- identity catalog


def test_pq_vectors():
    v = pq_vectors(X_HAT, Y_HAT, 0.3)
    assert np.allclose(v.p, math.cos(0.3) * X_HAT + math.sin(0.3) * Y_HAT, atol=1e-12)
    assert np.allclose(v.q, math.cos(0.3) * X_HAT - math.sin(0.3) * Y_HAT, atol=1e-12)


def test_swapper_exact():
    case = swapper_expansion(X_HAT, Z_HAT)
    assert np.linalg.norm(case.lhs_unitary() - SWAP) <= 1e-12
    assert case.defect() <= 1e-12
    with pytest.raises(NotApplicable):
        swapper_expansion(X_HAT, unit([1.0, 1, 0]))


@given(unit_vectors(), unit_vectors(), su2s())
def test_swapper_random(a, v, U):
    b = np.cross(a, v)
    if np.linalg.norm(b) < 1e-3:
        return
    assert swapper_expansion(a, unit(b), U).defect() <= 1e-9


def test_two_thirds_swap_zero_angles(rng):
    a, ap = random_unit(rng), random_unit(rng)
    b, bp = unit(np.cross(a, X_HAT)), unit(np.cross(ap, Y_HAT))
    for form in ("after", "before"):
        case = two_thirds_swap(a, b, ap, bp, 0.0, 0.0, form)
        assert case.defect() <= 1e-12


@given(unit_vectors(), unit_vectors(), unit_vectors(), unit_vectors(), angles, angles)
def test_two_thirds_swap_random(a, v, ap, vp, al, alp):
    b, bp = np.cross(a, v), np.cross(ap, vp)
    if min(np.linalg.norm(b), np.linalg.norm(bp)) < 1e-3:
        return
    for form in ("after", "before"):
        assert two_thirds_swap(a, unit(b), ap, unit(bp), al, alp, form).defect() <= 1e-9


def test_sim_trans_at_zero():
    case = sim_trans_rewrite(0.7, 0.0)
    assert case.defect() <= 1e-12


@given(angles, angles, su2s(), su2s())
def test_catalog_random(x1, x2, F0, F1):
    for make in (one_third_swap, sim_trans_rewrite, split_sim_trans, split_sim_trans2):
        assert make(x1, x2, (F0, F1)).defect() <= 1e-9


def test_dcnot_identity_wire_pair():
    o = reduce_2to0([DcNot(2, X_HAT, 1, Y_HAT), DcNot(1, Y_HAT, 2, X_HAT)])
    assert o.replacement == ()
