"""Shared fixtures: pinned builtin models and their process handles."""

import numpy as np
import pytest

from attractorlab import scenarios
from attractorlab.models_pde import chafee_handle, parabolic_handle
from attractorlab.models_scalar import inclusion_handle, linear_handle


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


@pytest.fixture(scope="session")
def linear_t_model():
    return scenarios.build_model("linear-t")


@pytest.fixture(scope="session")
def linear_sin_model():
    return scenarios.build_model("linear-sin")


@pytest.fixture(scope="session")
def inclusion_model():
    return scenarios.build_model("ode-inclusion")


@pytest.fixture(scope="session")
def inclusion_aa_model():
    return scenarios.build_model("ode-inclusion-aa")


@pytest.fixture(scope="session")
def chafee_model():
    return scenarios.build_model("chafee")


@pytest.fixture(scope="session")
def chafee_aa_model():
    return scenarios.build_model("chafee-aa")


@pytest.fixture(scope="session")
def parabolic_model():
    return scenarios.build_model("parabolic")


@pytest.fixture(scope="session")
def parabolic_aa_model():
    return scenarios.build_model("parabolic-aa")


@pytest.fixture(scope="session")
def linear_t_handle(linear_t_model):
    return linear_handle(linear_t_model)


@pytest.fixture(scope="session")
def linear_sin_handle(linear_sin_model):
    return linear_handle(linear_sin_model)


@pytest.fixture(scope="session")
def inclusion_handle_fix(inclusion_model):
    return inclusion_handle(inclusion_model)


@pytest.fixture(scope="session")
def chafee_handle_fix(chafee_model):
    return chafee_handle(chafee_model)


@pytest.fixture(scope="session")
def parabolic_handle_fix(parabolic_model):
    return parabolic_handle(parabolic_model)
