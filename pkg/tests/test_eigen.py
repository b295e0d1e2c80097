import numpy as np
import pytest

from tempora import (DiscountVector, OperatorMatrix, adjoint,
                     builtin_operator, geometric_invariance_check,
                     invariant_structure, random_stream, uniform_vector,
                     verify_eigen)
from tempora.errors import (InvalidOperator, InvalidPermutation,
                            NoInvariantFound, NonConvergence)


def test_operator_validation():
    with pytest.raises(InvalidOperator):
        OperatorMatrix(np.array([[1.0, -0.1], [0.0, 1.0]]))
    with pytest.raises(InvalidOperator):
        OperatorMatrix(np.ones((2, 3)))
    with pytest.raises(InvalidOperator):
        DiscountVector(np.array([0.5, 0.6]))
    with pytest.raises(InvalidOperator):
        DiscountVector(np.array([1.5, -0.5]))


# ---------------------------------------------------------------------------
# adjoint
# ---------------------------------------------------------------------------

def test_adjoint_identity_and_cyclic():
    eye = OperatorMatrix(np.eye(4))
    assert np.array_equal(adjoint(eye).entries, np.eye(4))
    cyc = builtin_operator("cyclic_delay", 4)
    # transpose of a permutation matrix is its inverse
    assert np.array_equal(adjoint(cyc).entries @ cyc.entries, np.eye(4))


def test_adjoint_involution(rng):
    m = OperatorMatrix(rng.uniform(0.0, 2.0, (6, 6)))
    assert np.array_equal(adjoint(adjoint(m)).entries, m.entries)


def test_adjoint_inner_product_identity(rng):
    for _ in range(100):
        n = int(rng.integers(1, 8))
        m = OperatorMatrix(rng.uniform(0.0, 3.0, (n, n)))
        x = rng.uniform(-5.0, 5.0, n)
        p = rng.uniform(0.0, 1.0, n)
        lhs = float((m.entries @ x) @ p)
        rhs = float(x @ (adjoint(m).entries @ p))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


# ---------------------------------------------------------------------------
# builtin truncations
# ---------------------------------------------------------------------------

def test_cyclic_delay_matrix():
    m = builtin_operator("cyclic_delay", 3)
    x = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(m.entries @ x, [3.0, 1.0, 2.0])


def test_absorbing_delay_matrix():
    m = builtin_operator("absorbing_delay", 3)
    x = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(m.entries @ x, [0.0, 1.0, 2.0])


def test_scaling_matrix():
    m = builtin_operator("scaling", 2, factor=2.0)
    assert np.array_equal(m.entries, 2.0 * np.eye(2))


def test_permutation_matrix_and_validation():
    m = builtin_operator("permutation", 3, sigma=[1, 2, 0])
    x = np.array([10.0, 20.0, 30.0])
    assert np.array_equal(m.entries @ x, [20.0, 30.0, 10.0])
    with pytest.raises(InvalidPermutation):
        builtin_operator("permutation", 3, sigma=[0, 0, 1])
    with pytest.raises(InvalidPermutation):
        builtin_operator("permutation", 3, sigma=None)
    with pytest.raises(InvalidOperator):
        builtin_operator("unknown_thing", 3)


# ---------------------------------------------------------------------------
# invariant_structure
# ---------------------------------------------------------------------------

def test_cyclic_delay_adjoint_gives_uniform():
    mstar = adjoint(builtin_operator("cyclic_delay", 8))
    res = invariant_structure(mstar)
    assert np.allclose(res.p.weights, 1.0 / 8.0, atol=1e-12)
    assert res.eigenvalue == pytest.approx(1.0, abs=1e-12)
    assert res.residual <= 1e-10


def test_absorbing_delay_adjoint_collapses_to_present():
    mstar = adjoint(builtin_operator("absorbing_delay", 8))
    res = invariant_structure(mstar)
    expected = np.zeros(8)
    expected[0] = 1.0
    assert np.array_equal(res.p.weights, expected)
    assert res.eigenvalue == 0.0


def test_absorbing_delay_eigen_degenerate_at_every_size():
    # the only normalized eigenvector of the faithful truncation is e_0
    for n in (2, 3, 5, 13):
        mstar = adjoint(builtin_operator("absorbing_delay", n))
        res = invariant_structure(mstar)
        assert res.p.weights[0] == 1.0
        assert res.eigenvalue == 0.0


def test_scaling_operator_returns_start_with_lambda_two():
    mstar = OperatorMatrix(2.0 * np.eye(2))
    res = invariant_structure(mstar)
    assert np.allclose(res.p.weights, 0.5)
    assert res.eigenvalue == pytest.approx(2.0, abs=1e-12)
    # total mass expands: <1, T*(p)> = 2 > 1, the condition that breaks
    # preservation of improvements under T
    assert float(mstar.entries @ res.p.weights @ np.ones(2)) > 1.0


def test_permutation_needs_cesaro_averaging(rng):
    mstar = adjoint(builtin_operator("permutation", 5, sigma=[1, 2, 0, 4, 3]))
    start = DiscountVector(np.array([0.5, 0.3, 0.2, 0.0, 0.0]))
    with pytest.raises(NonConvergence) as err:
        invariant_structure(mstar, start=start, max_iter=500)
    assert err.value.residual is not None
    res = invariant_structure(mstar, start=start, cesaro_averaging=True)
    assert res.residual <= 1e-10
    assert res.eigenvalue == pytest.approx(1.0, abs=1e-12)
    w = res.p.weights
    assert np.allclose(w[:3], w[0], atol=1e-10)   # constant on cycle {0,1,2}
    assert np.allclose(w[3:], w[3], atol=1e-10)   # constant on cycle {3,4}


def test_verify_eigen_examples():
    eye = OperatorMatrix(np.eye(5))
    lam, res = verify_eigen(eye, uniform_vector(5))
    assert (lam, res) == (1.0, 0.0)

    cyc = adjoint(builtin_operator("cyclic_delay", 6))
    lam, res = verify_eigen(cyc, uniform_vector(6))
    assert lam == pytest.approx(1.0, abs=1e-15)
    assert res <= 1e-15

    perm = adjoint(builtin_operator("permutation", 5, sigma=[1, 2, 0, 4, 3]))
    p = DiscountVector(np.array([1 / 6, 1 / 6, 1 / 6, 1 / 4, 1 / 4]))
    lam, res = verify_eigen(perm, p)
    assert lam == pytest.approx(1.0, abs=1e-15)
    assert res <= 1e-15


def test_uniform_sits_in_every_permutation_eigen_set():
    # for a finite family of permutation operators, the intersection of
    # their invariant-vector sets is witnessed by the uniform vector; no
    # general intersection solver is attempted
    sigmas = [[1, 2, 0, 4, 3], [4, 3, 2, 1, 0], [0, 2, 1, 4, 3]]
    p = uniform_vector(5)
    for sigma in sigmas:
        mstar = adjoint(builtin_operator("permutation", 5, sigma=sigma))
        lam, res = verify_eigen(mstar, p)
        assert lam == pytest.approx(1.0, abs=1e-15)
        assert res <= 1e-15


def test_invariant_outputs_live_on_simplex(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        mstar = OperatorMatrix(rng.uniform(0.0, 1.0, (n, n)))
        res = invariant_structure(mstar)
        w = res.p.weights
        assert (w >= 0).all()
        assert abs(w.sum() - 1.0) <= 1e-12
        assert res.residual <= 1e-10
        assert res.eigenvalue >= 0.0


def test_kernel_branch_via_nilpotent_block():
    # strictly upper triangular: iteration dies, kernel element is e_0
    m = np.zeros((3, 3))
    m[0, 1] = 1.0
    m[0, 2] = 1.0
    res = invariant_structure(OperatorMatrix(m))
    assert res.eigenvalue == 0.0
    assert float(np.abs(m @ res.p.weights).sum()) <= 1e-10


def test_no_invariant_in_kernel_branch_is_impossible_for_singular_start():
    # a matrix whose kernel misses the simplex never reaches the kernel
    # branch from the uniform start; it converges to a positive eigenvector
    m = np.array([[1.0, 1.0], [1.0, 1.0]])
    res = invariant_structure(OperatorMatrix(m))
    assert res.eigenvalue == pytest.approx(2.0, abs=1e-10)


# ---------------------------------------------------------------------------
# geometric invariance witness
# ---------------------------------------------------------------------------

def test_geometric_invariance_examples(rng):
    x = random_stream(rng)
    assert geometric_invariance_check(x, 0.5) <= 1e-15
    from tempora import constant_stream
    assert geometric_invariance_check(constant_stream(1.0), 0.9) <= 1e-15
    worst = 0.0
    for _ in range(100):
        y = random_stream(rng)
        d = float(rng.uniform(0.0, 1.0 - 1e-12))
        worst = max(worst, geometric_invariance_check(y, d))
    assert worst <= 1e-12
