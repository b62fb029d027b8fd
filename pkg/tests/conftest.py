import numpy as np
import pytest

from bandspec import presets
from bandspec.operator import validate_params

PRESETS = {
    "paper-ex1": presets.example_one,
    "paper-ex2": presets.example_two,
    "delta": presets.delta,
    "zweier(0.5)": lambda: presets.zweier(0.5),
    "brst(0,1,0.25)": lambda: presets.brst(0, 1, 0.25),
}
T_ZERO_PRESETS = ("paper-ex2", "delta", "zweier(0.5)")


def _cplx(rng, scale=1.0):
    return complex(*(scale * rng.normal(size=2)))


def random_params(rng, t_zero=None):
    """Random admissible parameters; s-entries drawn on the principal branch."""
    r1, r2 = _cplx(rng), _cplx(rng)
    s = []
    for _ in range(2):
        mag = rng.uniform(0.5, 2.0)
        ang = rng.uniform(-0.45 * np.pi, 0.45 * np.pi)
        s.append(mag * np.exp(1j * ang))
    if t_zero is None:
        t_zero = rng.random() < 0.3
    if t_zero:
        t1 = t2 = 0
    else:
        t1 = rng.uniform(0.3, 1.5) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        t2 = rng.uniform(0.3, 1.5) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return validate_params(r1, r2, s[0], s[1], t1, t2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=sorted(PRESETS))
def preset_params(request):
    return PRESETS[request.param]()


@pytest.fixture
def ex1():
    return presets.example_one()


@pytest.fixture
def ex2():
    return presets.example_two()


@pytest.fixture
def delta_op():
    return presets.delta()
