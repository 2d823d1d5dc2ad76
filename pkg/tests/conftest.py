"""Shared helpers for the test suite."""

import numpy as np
import pytest

from diracsep.separation import SET_IDS, get_set, make_potential

#: chart parameter used whenever set 6 needs one
A_PARAM = 0.7


def set_by_id(sid):
    return get_set(sid, a=A_PARAM)


def random_admissible_potential(cset, rng, scale=0.3):
    """Random polynomial (plus inverse-power where admissible) profiles.

    Coefficients shrink with the power so the finite-difference stencils
    of the certificates stay well resolved on every set's sample box.
    """
    profiles = []
    for _ in range(3):
        terms = [(int(p), float(rng.normal() * scale / (1 + p) ** 2))
                 for p in rng.integers(0, 3, size=2)]
        if cset.reduced_positive and rng.random() < 0.4:
            terms.append((-1, float(rng.normal() * scale * 0.6)))
        profiles.append(terms)
    return make_potential(cset, profiles)


#: end-to-end pipeline inputs per set: profiles, separation constants
PIPELINE_CASES = {
    "1": (([(1, 0.3)], [(2, 0.2)], [(1, 0.1)]), (2.0, 0.5)),
    "2": (([(1, 0.3)], [(2, 0.2)], [(1, 0.1)]), (2.0, 0.5)),
    "3": (([(-1, 0.5)], [(1, 0.1)], [(2, 0.2)]), (2.0, 0.5)),
    "4a": (([(1, 0.3)], [(-1, 0.2)], [(1, 0.1)]), (2.0, 0.5)),
    "4b": (([(1, 0.3)], [(-1, 0.2)], [(1, 0.1)]), (2.0, 0.5)),
    "5": (([(1, 0.3)], [(1, 0.2)], [(1, 0.1)]), (1.5, 2.0)),
    "6": (([(1, 0.1)], [(1, 0.15)], [(2, 0.05)]), (2.0, 0.5)),
    "7": (([(1, 0.3)], [(1, 0.1)], [(1, 0.2)]), (2.0, 0.5)),
}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(params=SET_IDS, ids=[f"set{sid}" for sid in SET_IDS])
def cset(request):
    return set_by_id(request.param)
