import numpy as np
import pytest

from canspec import PotentialSpec, ScalarFunction


@pytest.fixture(scope="session")
def zero_pot():
    return PotentialSpec.zero()


@pytest.fixture(scope="session")
def sigma1():
    """Constant off-diagonal potential [[0, 1], [1, 0]]."""
    return PotentialSpec.constant(0.0, 0.0, 1.0)


@pytest.fixture(scope="session")
def scalar_cos():
    """Scalar-identity potential (1 + cos 2z) I."""
    return PotentialSpec.scalar_identity(ScalarFunction.trigpoly(1.0, (1.0,)))


def make_dirac(m):
    """Constant diagonal potential m * diag(1, -1)."""
    return PotentialSpec.constant(m, -m, 0.0)


def random_trigpoly(rng, degree=4, scale=0.5, mean_scale=0.5):
    def coeffs():
        return scale * (2.0 * rng.random(degree) - 1.0)

    return ScalarFunction.trigpoly(mean_scale * (2.0 * rng.random() - 1.0),
                                   coeffs(), coeffs())


def random_potential(rng, degree=4, scale=0.5):
    return PotentialSpec(random_trigpoly(rng, degree, scale),
                         random_trigpoly(rng, degree, scale),
                         random_trigpoly(rng, degree, scale))


@pytest.fixture(scope="session")
def random_potentials():
    """Three seeded trig-poly potentials shared across property suites."""
    rng = np.random.default_rng(20240613)
    return [random_potential(rng) for _ in range(3)]


@pytest.fixture(scope="session")
def canonical_wiggle():
    """Canonical-form potential with q1 = 0.3 cos 2z, off-diag 0.2 sin 2z."""
    return PotentialSpec.canonical(ScalarFunction.trigpoly(0.0, (0.3,)),
                                   ScalarFunction.trigpoly(0.0, (), (0.2,)))


@pytest.fixture(scope="session")
def scalar_specimens():
    """Five scalar-identity potentials used by the inverse soundness tests."""
    return [
        PotentialSpec.zero(),
        PotentialSpec.scalar_identity(2.0),
        PotentialSpec.scalar_identity(ScalarFunction.trigpoly(1.0, (1.0,))),
        PotentialSpec.scalar_identity(
            ScalarFunction.trigpoly(-0.5, (0.3, 0.1), (0.2,))),
        PotentialSpec.scalar_identity(
            ScalarFunction.trigpoly(0.25, (), (0.7,))),
    ]
