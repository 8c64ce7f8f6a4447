import itertools
import math

import numpy as np
import pytest
from hypothesis import given

from conftest import su2s, vec_pairs
from dcnot.circuit import DcNot, dcnot_unitary
from dcnot.errors import ContractError, NotAnInvariant, NotFactorable
from dcnot.invariants import (
    canonical_orientation_defect,
    dcnot_counterpart,
    diagonalize_g2,
    diagonalize_g3,
    factor_tensor_product,
    g2_closed,
    g3_from_params,
    g4_blocks,
    g4_parts,
    lo_rhs_equivalent,
    principal_values3,
    quad_invariant,
    run_unitary,
    split_parts,
)
from dcnot.linalg import SX, SY, SZ, X_HAT, Y_HAT, Z_HAT, gamma, kron_wires, random_su2, random_unit

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def random_pairs(rng, r):
    return [(random_unit(rng), random_unit(rng)) for _ in range(r)]


def test_quad_invariant_examples(rng):
    assert np.allclose(quad_invariant(np.eye(4)), np.eye(4))
    assert np.allclose(quad_invariant(CNOT), -np.kron(SZ, SX))
    for _ in range(20):
        L = np.kron(random_su2(rng), random_su2(rng))
        assert np.allclose(quad_invariant(L), np.eye(4), atol=1e-12)


def test_quad_invariant_contract():
    with pytest.raises(ContractError):
        quad_invariant(2 * np.eye(4))


def test_g2_closed_examples():
    assert np.allclose(g2_closed(1, [(X_HAT, Z_HAT)]), -np.kron(SZ, SX))
    a, ap = random_unit(np.random.default_rng(1)), random_unit(np.random.default_rng(2))
    assert np.allclose(g2_closed(2, [(a, ap), (a, ap)]), np.eye(4))
    assert np.allclose(g2_closed(3, [(X_HAT, X_HAT)] * 3), -np.kron(SX, SX))
    with pytest.raises(ValueError):
        g2_closed(5, [(X_HAT, X_HAT)] * 5)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@given(data=vec_pairs(4))
def test_g2_closed_matches_direct(r, data):
    pairs = data[:r]
    assert np.linalg.norm(g2_closed(r, pairs) - quad_invariant(run_unitary(pairs))) <= 1e-9


@given(vec_pairs(4))
def test_recursion(pairs):
    # G_{r+1} = D G_r D G_1(d) for the appended DC-NOT d
    for r in range(1, 4):
        D = run_unitary(pairs[r : r + 1])
        lhs = quad_invariant(run_unitary(pairs[: r + 1]))
        rhs = D @ quad_invariant(run_unitary(pairs[:r])) @ D @ g2_closed(1, pairs[r : r + 1])
        assert np.linalg.norm(lhs - rhs) <= 1e-10


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_counterpart_relation(rng, r):
    for _ in range(20):
        U = run_unitary(random_pairs(rng, r))
        assert abs(np.linalg.det(U) - (-1) ** r) <= 1e-10
        H = dcnot_counterpart(U, r)
        assert abs(np.linalg.det(H) - 1) <= 1e-10
        assert np.linalg.norm(quad_invariant(H) - 1j**r * quad_invariant(U)) <= 1e-10


def test_split_parts_examples():
    p = split_parts(np.eye(4))
    assert (p.lam_r, p.lam_i) == (1.0, 0.0)
    assert np.allclose(p.Lam_r, 0) and np.allclose(p.Lam_i, 0)
    p = split_parts(-np.kron(SZ, SX))
    assert np.isclose(p.lam_r, 0) and np.isclose(p.lam_i, 0)
    assert np.allclose(p.Lam_r, -np.kron(SZ, SX)) and np.allclose(p.Lam_i, 0)


@given(vec_pairs(3))
def test_split_parts_reconstructs(pairs):
    for r in (2, 3):
        M = quad_invariant(run_unitary(pairs[:r]))
        p = split_parts(M, r)
        assert np.linalg.norm(p.matrix() - M) <= 1e-12
        assert np.allclose(p.Lam_r, p.Lam_r.conj().T) and abs(np.trace(p.Lam_r)) <= 1e-10
        assert np.allclose(p.Lam_i, p.Lam_i.conj().T) and abs(np.trace(p.Lam_i)) <= 1e-10
        if r == 2:
            assert abs(p.lam_i) <= 1e-9


def _cf(*vs):
    out = vs[0]
    for v in vs[1:]:
        out = np.cross(out, v)
    return out


def test_split_parts_three_term_by_term(rng):
    # real scalar part is ([abb].c)([a'b'b'].c'), imaginary is -(a.b)(b.c)V' - (a'.b')(b'.c')V
    for _ in range(50):
        (a, ap), (b, bp), (c, cp) = random_pairs(rng, 3)
        p = split_parts(quad_invariant(run_unitary([(a, ap), (b, bp), (c, cp)])), 3)
        V, Vp = np.cross(a, b) @ c, np.cross(ap, bp) @ cp
        assert np.isclose(p.lam_r, (_cf(a, b, b) @ c) * (_cf(ap, bp, bp) @ cp), atol=1e-12)
        assert np.isclose(p.lam_i, -(a @ b) * (b @ c) * Vp - (ap @ bp) * (bp @ cp) * V, atol=1e-12)


@given(vec_pairs(2))
def test_commutators_two(pairs):
    p = split_parts(quad_invariant(run_unitary(pairs)), 2)
    assert np.linalg.norm(p.Lam_r @ p.Lam_i - p.Lam_i @ p.Lam_r) <= 1e-9
    Gr, Gi = gamma(p.Lam_r), gamma(p.Lam_i)
    assert np.linalg.norm(Gr.T @ Gi) <= 1e-9
    assert np.linalg.norm(Gr @ Gi.T) <= 1e-9


@given(vec_pairs(3))
def test_commutators_three(pairs):
    p = split_parts(quad_invariant(run_unitary(pairs)), 3)
    assert np.linalg.norm(p.Lam_r @ p.Lam_i - p.Lam_i @ p.Lam_r) <= 1e-9
    Gr, Gi = gamma(p.Lam_r), gamma(p.Lam_i)
    assert np.linalg.norm(Gr.T @ Gi - Gi.T @ Gr) <= 1e-9
    assert np.linalg.norm(Gr @ Gi.T - Gi @ Gr.T) <= 1e-9


@given(vec_pairs(3))
def test_g3_odd_in_first_vectors(pairs):
    # odd in a and in a' separately, hence even when both are negated
    (a, ap), B, C = pairs
    G = g2_closed(3, pairs)
    assert np.linalg.norm(g2_closed(3, [(-a, ap), B, C]) + G) <= 1e-10
    assert np.linalg.norm(g2_closed(3, [(a, -ap), B, C]) + G) <= 1e-10
    assert np.linalg.norm(g2_closed(3, [(-a, -ap), B, C]) - G) <= 1e-10


def test_diagonalize_g2_identity():
    params, ((a, ap), (b, bp)) = diagonalize_g2(np.eye(4))
    assert params.alpha == pytest.approx(0, abs=1e-12) and params.alpha_prime == pytest.approx(0, abs=1e-12)
    assert np.allclose(a, b) and np.allclose(ap, bp)


def test_diagonalize_g2_perpendicular_example():
    M = quad_invariant(run_unitary([(Y_HAT, Z_HAT), (X_HAT, Z_HAT)]))
    params, pairs = diagonalize_g2(M)
    assert np.linalg.norm(g2_closed(2, pairs) - M) <= 1e-12
    # one wire carries a right angle, the other none; which one is not fixed by M
    got = sorted([abs(params.alpha), abs(params.alpha_prime)])
    assert np.allclose(got, [0, math.pi / 2], atol=1e-12)


def test_diagonalize_g2_round_trip(rng):
    worst = 0.0
    for _ in range(200):
        M = quad_invariant(run_unitary(random_pairs(rng, 2)))
        params, pairs = diagonalize_g2(M)
        (a, _), (b, _) = pairs
        assert np.allclose(b, params.F.f1)
        assert np.allclose(a, math.cos(params.alpha) * params.F.f1 - math.sin(params.alpha) * params.F.f2)
        worst = max(worst, np.linalg.norm(g2_closed(2, pairs) - M))
    assert worst <= 1e-8


def test_diagonalize_g2_rejects(rng):
    # a generic 3-run has an imaginary scalar part, which no 2-run has
    M = quad_invariant(run_unitary(random_pairs(rng, 3)))
    assert abs(split_parts(M).lam_i) > 1e-3
    with pytest.raises(NotAnInvariant):
        diagonalize_g2(M)


def test_single_dcnot_is_a_g2():
    M = quad_invariant(run_unitary([(X_HAT, Z_HAT)]))
    params, pairs = diagonalize_g2(M)
    assert np.linalg.norm(g2_closed(2, pairs) - M) <= 1e-12
    assert abs(math.cos(params.alpha)) <= 1e-12 and abs(math.cos(params.alpha_prime)) <= 1e-12


def test_diagonalize_g3_single_dcnot():
    M = -np.kron(SX, SX)
    params, pairs = diagonalize_g3(M)
    assert np.linalg.norm(g2_closed(3, pairs) - M) <= 1e-12
    assert np.allclose(params.mu, 0, atol=1e-12)
    assert abs(params.Xo) <= 1e-12 and abs(params.Yo) <= 1e-12
    assert sorted(np.abs(params.nu))[-1] == pytest.approx(1.0)


def test_diagonalize_g3_round_trip(rng):
    worst = orient = 0.0
    for _ in range(100):
        M = quad_invariant(run_unitary(random_pairs(rng, 3)))
        params, pairs = diagonalize_g3(M)
        worst = max(worst, np.linalg.norm(g2_closed(3, pairs) - M))
        orient = max(orient, canonical_orientation_defect(pairs))
        assert np.linalg.norm(g3_from_params(params) - M) <= 1e-7
    assert worst <= 1e-7 and orient <= 1e-8


def test_diagonalize_g3_beta_extraction(rng):
    for _ in range(100):
        params, _ = diagonalize_g3(quad_invariant(run_unitary(random_pairs(rng, 3))))
        n = math.hypot(params.mu[2], params.Xo)
        if n < 1e-6:
            continue
        assert math.cos(params.beta) == pytest.approx(params.xi * params.Xo / n, abs=1e-9)
        assert math.sin(params.beta) == pytest.approx(params.xi * params.mu[2] / n, abs=1e-9)


def test_principal_values_and_bilinear(rng):
    for _ in range(100):
        p, _ = diagonalize_g3(quad_invariant(run_unitary(random_pairs(rng, 3))))
        nu, mu, Xo, Yo = principal_values3(p.beta, p.beta1, p.beta2, p.xi)
        assert np.allclose(nu, p.nu, atol=1e-10) and np.allclose(mu, p.mu, atol=1e-10)
        assert np.isclose(Xo, p.Xo, atol=1e-10) and np.isclose(Yo, p.Yo, atol=1e-10)
        for j in range(3):
            assert abs(mu[j] * nu[j] - Xo * Yo) <= 1e-9
        for i, j, k in itertools.permutations(range(3)):
            assert abs(mu[i] * mu[j] + Xo * nu[k]) <= 1e-9
            assert abs(nu[i] * nu[j] + Yo * mu[k]) <= 1e-9


def test_g4_blocks(rng):
    for _ in range(100):
        pairs = random_pairs(rng, 4)
        p3, _ = diagonalize_g3(quad_invariant(run_unitary(pairs[:3])))
        d, dp = pairs[3]
        b = g4_blocks(p3, d, dp)
        Xo, Yo = p3.Xo, p3.Yo
        assert np.linalg.norm(b.Mmu.T @ b.Mnu - Xo * Yo * np.eye(3)) <= 1e-9
        assert np.linalg.norm(b.Mnu.T @ b.y_prime - Yo * b.x) <= 1e-9
        assert np.linalg.norm(b.Mmu @ b.x - Xo * b.y_prime) <= 1e-9
        assert np.linalg.norm(b.Mmu.T @ b.x_prime - Xo * b.y) <= 1e-9
        assert np.linalg.norm(b.Mnu @ b.y - Yo * b.x_prime) <= 1e-9
        assert np.linalg.norm(g4_parts(p3, d, dp).matrix() - quad_invariant(run_unitary(pairs))) <= 1e-9


def test_g4_real_scalar_is_bilinear(rng):
    for _ in range(50):
        p3, _ = diagonalize_g3(quad_invariant(run_unitary(random_pairs(rng, 3))))
        Mnu = p3.G_prime.matrix() @ p3.Mnu @ p3.G.matrix().T
        d = random_unit(rng)
        dp = random_unit(rng)
        assert g4_blocks(p3, d, dp).lam_r == pytest.approx(-dp @ Mnu @ d, abs=1e-10)
        # d' orthogonal to M_nu d kills it
        v = np.cross(Mnu @ d, random_unit(rng))
        assert abs(g4_blocks(p3, d, v / np.linalg.norm(v)).lam_r) <= 1e-9


def test_lo_rhs_equivalent(rng):
    for _ in range(20):
        A = run_unitary(random_pairs(rng, 3))
        assert lo_rhs_equivalent(A, A)[0]
        assert lo_rhs_equivalent(A, A)[1] == pytest.approx(0, abs=1e-12)
        B = A @ np.kron(random_su2(rng), random_su2(rng))
        assert lo_rhs_equivalent(A, np.exp(0.4j) * B)[0]
    assert not lo_rhs_equivalent(CNOT, SWAP)[0]
    with pytest.raises(ContractError):
        lo_rhs_equivalent(np.eye(8), np.eye(8))


def test_factor_tensor_product(rng):
    tf = factor_tensor_product(np.kron(SX, SZ), 2)
    assert np.allclose(np.exp(1j * tf.phase) * kron_wires(tf.factors), np.kron(SX, SZ))
    with pytest.raises(NotFactorable):
        factor_tensor_product(CNOT, 2)
    for _ in range(50):
        fs = [random_su2(rng) for _ in range(3)]
        M = np.exp(1j * math.pi / 7) * kron_wires(fs)
        tf = factor_tensor_product(M, 3)
        assert np.linalg.norm(np.exp(1j * tf.phase) * kron_wires(tf.factors) - M) <= 1e-8
        assert all(abs(np.linalg.det(f) - 1) <= 1e-10 for f in tf.factors)


@given(su2s(), su2s())
def test_factor_two(u0, u1):
    tf = factor_tensor_product(np.kron(u1, u0), 2)
    assert np.linalg.norm(np.exp(1j * tf.phase) * kron_wires(tf.factors) - np.kron(u1, u0)) <= 1e-8


def test_dcnot_wire_symmetry_invariant():
    d = DcNot(0, X_HAT, 1, Y_HAT)
    assert np.allclose(quad_invariant(dcnot_unitary(d, 2)), g2_closed(1, [(X_HAT, Y_HAT)]))
    assert np.allclose(g2_closed(1, [(X_HAT, Y_HAT)]), -np.kron(SY, SX))
