import numpy as np
import pytest

from hmsopt import Objective
from hmsopt.benchmarks import sphere


class ScriptedStream:
    """Duck-typed RngStream returning scripted values.

    Pass handlers by method name; calling an unscripted method fails the
    test, so each test states exactly which draws it expects.
    """

    def __init__(self, **handlers):
        self.handlers = handlers

    def _call(self, name, *args):
        if name not in self.handlers:
            raise AssertionError(f"unscripted rng method {name} called with {args}")
        return self.handlers[name](*args)

    def random(self, size=None):
        return self._call("random", size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._call("uniform", low, high, size)

    def integers(self, low, high=None, size=None):
        return self._call("integers", low, high, size)

    def standard_normal(self, size=None):
        return self._call("standard_normal", size)

    def choice(self, a, size=None, replace=True):
        return self._call("choice", a, size, replace)


@pytest.fixture
def scripted_stream():
    return ScriptedStream


def make_box_objective(dim=2, bound=100.0, name="plain_sphere"):
    """Unshifted sphere objective on [-bound, bound]^dim with optimum 0."""
    return Objective(
        name=name,
        dim=dim,
        lower=np.full(dim, -bound),
        upper=np.full(dim, bound),
        optimum_value=0.0,
        eval_fn=sphere,
    )


@pytest.fixture
def plain_sphere():
    return make_box_objective()
