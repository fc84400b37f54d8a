import numpy as np
import pytest

from kippenhahn.linalg import det_complex
from kippenhahn.pencil import Pencil, random_pencil, roman_pencil, roman_quartic


def roman_det(u0, u1, u2, u3):
    # cofactor expansion of [[u0, u1/2, u2/2], [u1/2, u0, u3/2], [u2/2, u3/2, u0]]
    return u0**3 - u0 * (u1**2 + u2**2 + u3**2) / 4 + u1 * u2 * u3 / 4


class TestConstruction:
    def test_shapes(self):
        p = random_pencil(3, 4, np.random.default_rng(0))
        assert (p.k, p.d) == (3, 4)

    def test_mismatched_orders(self):
        with pytest.raises(ValueError, match="different shapes"):
            Pencil([np.eye(2), np.eye(3)])

    def test_empty(self):
        with pytest.raises(ValueError):
            Pencil([])

    def test_non_hermitian(self):
        with pytest.raises(ValueError):
            Pencil([[[0, 1], [0, 0]]])

    def test_stored_exactly_hermitian(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        a = a + a.conj().T
        a[0, 1] += 1e-14
        p = Pencil([a])
        np.testing.assert_array_equal(p.F[0], p.F[0].conj().T)


class TestEvaluateL:
    def test_identity(self, rng):
        p = random_pencil(3, 4, rng)
        np.testing.assert_array_equal(p.evaluate_L(1.0, np.zeros(3)), np.eye(4))

    def test_basis_vectors(self, rng):
        p = random_pencil(3, 4, rng)
        for i in range(3):
            np.testing.assert_array_equal(p.evaluate_L(0.0, np.eye(3)[i]), p.F[i])

    def test_roman_determinant(self, rng):
        p = roman_pencil()
        for _ in range(20):
            u = rng.uniform(-2, 2, size=4)
            assert det_complex(p.evaluate_L(u[0], u[1:])) == pytest.approx(roman_det(*u), abs=1e-12)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            random_pencil(2, 3, rng).evaluate_L(1.0, [1.0, 2.0, 3.0])

    def test_linearity(self, rng):
        p = random_pencil(3, 4, rng)
        a, b = rng.normal(size=2)
        u0, v0 = rng.normal(size=2)
        u, v = rng.normal(size=(2, 3))
        lhs = p.evaluate_L(a * u0 + b * v0, a * u + b * v)
        rhs = a * p.evaluate_L(u0, u) + b * p.evaluate_L(v0, v)
        assert np.abs(lhs - rhs).max() <= 1e-12

    def test_hermitian_output(self, rng):
        m = random_pencil(3, 5, rng).evaluate_L(0.3, rng.normal(size=3))
        np.testing.assert_array_equal(m, m.conj().T)

    @pytest.mark.parametrize("seed", range(5))
    def test_homogeneity(self, seed):
        r = np.random.default_rng(seed)
        p = random_pencil(2, 4, r)
        u0, u = r.normal(), r.normal(size=2)
        t = r.uniform(0.5, 2.0)
        base = det_complex(p.evaluate_L(u0, u))
        scaled = det_complex(p.evaluate_L(t * u0, t * u))
        assert abs(scaled - t**4 * base) <= 1e-8 * abs(t**4 * base)


class TestAggregate:
    def test_endpoints(self, rng):
        p = random_pencil(2, 3, rng)
        np.testing.assert_allclose(p.aggregate_A(0.0), p.F[0], atol=0)
        np.testing.assert_allclose(p.aggregate_A(np.pi / 2), p.F[1], atol=1e-16)
        np.testing.assert_allclose(p.aggregate_A_prime(0.0), p.F[1], atol=0)
        np.testing.assert_allclose(p.aggregate_A_prime(np.pi / 2), -p.F[0], atol=1e-16)

    def test_quarter_turn(self):
        p = Pencil([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(p.aggregate_A(np.pi / 4), np.diag([r, r]), atol=1e-16)

    def test_derivative_finite_difference(self, rng):
        for _ in range(5):
            f = [m / np.linalg.norm(m, 2) for m in random_pencil(2, 4, rng).F]
            p = Pencil(f)
            theta, h = rng.uniform(0, 2 * np.pi), 1e-5
            fd = (p.aggregate_A(theta + h) - p.aggregate_A(theta - h)) / (2 * h)
            assert np.abs(fd - p.aggregate_A_prime(theta)).max() <= 1e-9

    def test_vectorized(self, rng):
        p = random_pencil(2, 3, rng)
        th = np.array([0.1, 0.2])
        np.testing.assert_allclose(p.aggregate_A(th)[1], p.aggregate_A(0.2))

    def test_requires_two(self, rng):
        with pytest.raises(ValueError, match="k = 2"):
            random_pencil(3, 2, rng).aggregate_A(0.0)
        with pytest.raises(ValueError, match="k = 2"):
            random_pencil(1, 2, rng).aggregate_A_prime(0.0)


class TestDirectionMatrix:
    def test_basis(self, rng):
        p = random_pencil(3, 3, rng)
        np.testing.assert_array_equal(p.direction_matrix([1.0, 0.0, 0.0]), p.F[0])

    def test_planar_agrees_with_aggregate(self, rng):
        p = random_pencil(2, 3, rng)
        th = 0.7
        np.testing.assert_allclose(p.direction_matrix([np.cos(th), np.sin(th)]), p.aggregate_A(th))

    def test_roman_diagonal_direction(self):
        m = roman_pencil().direction_matrix(np.ones(3) / np.sqrt(3))
        expected = (np.ones((3, 3)) - np.eye(3)) / (2 * np.sqrt(3))
        np.testing.assert_allclose(m, expected, atol=1e-16)

    def test_non_unit(self, rng):
        with pytest.raises(ValueError, match="unit"):
            random_pencil(2, 2, rng).direction_matrix([1.0, 1.0])


def test_roman_quartic_contains_axes():
    t = np.linspace(-50, 50, 100)
    z = np.zeros_like(t)
    for pts in ([t, z, z], [z, t, z], [z, z, t]):
        assert np.all(roman_quartic(np.stack(pts, axis=1)) == 0.0)
