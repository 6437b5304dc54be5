"""Shared fixtures: geometries, discretizations, and factored plans are
expensive, so they are built once per session and cached by parameters."""

import numpy as np
import pytest

from dirfft import (
    Bean,
    Ellipse,
    HelmholtzKernel,
    OperatorKind,
    build_cover_set,
    build_geometry,
    build_tree,
    classify_pairs,
    compute_factors,
    discretize,
)

OPERATORS = {
    "S": OperatorKind.SINGLE_LAYER,
    "D": OperatorKind.DOUBLE_LAYER,
    "Dp": OperatorKind.NORMAL_DERIV_SINGLE,
    "N": OperatorKind.NORMAL_DERIV_DOUBLE,
}


def make_shape(name):
    if name == "ellipse":
        return Ellipse()
    if name == "bean":
        return Bean()
    if name == "circle":
        return Ellipse(1.0, 1.0)
    if name == "pointy":
        # high curvature at the tips: leaves there stay non-planar, which
        # exercises the one-sided modulation variants
        return Ellipse(1.0, 0.12)
    raise ValueError(name)


@pytest.fixture(scope="session")
def geometries():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_geometry(make_shape(name))
        return cache[name]

    return get


@pytest.fixture(scope="session")
def discretizations(geometries):
    cache = {}

    def get(name, q, p=8):
        key = (name, q, p)
        if key not in cache:
            cache[key] = discretize(geometries(name), q, p)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def trees(discretizations):
    cache = {}

    def get(name, q, p=8, m_leaf=4):
        key = (name, q, p, m_leaf)
        if key not in cache:
            cache[key] = build_tree(discretizations(name, q, p), m_leaf)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def classified(trees):
    """Plan structure (no factors) per (shape, q); factors are per-kernel."""
    cache = {}

    def get(name, q, p=8, m_leaf=4):
        key = (name, q, p, m_leaf)
        if key not in cache:
            tree = trees(name, q, p, m_leaf)
            cache[key] = classify_pairs(tree, build_cover_set(tree))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def plans(discretizations, trees):
    """Fully factored plans, cached by every parameter that matters.

    Factors mutate the plan in place, so each (kernel, m_cheb) combination
    gets its own classification run.
    """
    cache = {}

    def get(name, q, op="S", m_cheb=8, m_freq=2, m_leaf=4, p=8):
        key = (name, q, op, m_cheb, m_freq, m_leaf, p)
        if key not in cache:
            disc = discretizations(name, q, p)
            tree = trees(name, q, p, m_leaf)
            plan = classify_pairs(tree, build_cover_set(tree))
            kernel = HelmholtzKernel(OPERATORS[op], disc.omega)
            cache[key] = compute_factors(plan, disc, kernel, m_cheb=m_cheb, m_freq=m_freq)
        return cache[key]

    return get


def random_density(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
