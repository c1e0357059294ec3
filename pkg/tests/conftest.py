"""Shared fixtures: a small sine-Gordon-style jet model for unit tests."""

import pytest

from grassgeo.jets import JetSpec
from grassgeo.ring import EVEN, Generator, GRat


def sine_model(max_order=5, rhs_sign=1):
    gens = [
        Generator("s", EVEN, invertible=True, role="sqrt_lambda"),
        Generator("X", EVEN, invertible=True),
    ]
    rules = {
        "X": (
            lambda c: c.i() * c.gen("X") * c.gen("Pp1"),
            lambda c: c.i() * c.gen("X") * c.gen("Pm1"),
        )
    }

    def rhs(cat):
        return (cat.gen("X") - cat.gen("X", -1)) * (GRat(rhs_sign) / 2)

    return JetSpec(gens, rhs, rules, max_order=max_order)


@pytest.fixture(scope="session")
def model():
    return sine_model()
