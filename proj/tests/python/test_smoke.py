"""Smoke tests for the python bindings."""

import math

import pytest

contattn = pytest.importorskip("contattn")


def test_epanechnikov_anchor():
    p = contattn.truncated_parabola(0.0, 2.0 / 3.0)
    assert p.lam == pytest.approx(-0.75, abs=1e-12)
    assert p(0.0) == pytest.approx(0.75, abs=1e-12)
    lo, hi = p.info()["support"]
    assert (lo, hi) == (pytest.approx(-1.0), pytest.approx(1.0))


def test_discrete_transformations():
    soft = contattn.softmax([0.0, 0.0, 0.0])
    assert soft["probs"] == pytest.approx([1 / 3] * 3)

    sparse = contattn.sparsemax([0.5, 0.5, -1.0])
    assert sparse["probs"] == pytest.approx([0.5, 0.5, 0.0])
    assert sparse["support"] == [True, True, False]

    ent = contattn.alpha_entmax([0.2, -0.1, 1.0], 2.0)
    assert ent["probs"] == pytest.approx(sparse_probs([0.2, -0.1, 1.0]), abs=1e-10)


def sparse_probs(f):
    return contattn.sparsemax(f)["probs"]


def test_special_functions():
    assert contattn.erf(0.0) == 0.0
    assert contattn.erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-13)
    assert contattn.gamma_fn(3.0) == pytest.approx(2.0, rel=1e-12)
    assert contattn.beta_exp(-3.0, 0.0) == 0.0
    assert contattn.beta_log(contattn.beta_exp(0.7, 0.5), 0.5) == pytest.approx(0.7)


def test_attention_1d():
    res = contattn.attend_1d(0.0, 0.5, centers=[0.0], widths=[0.5], alpha=1.0)
    assert res["r"][0] == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-12)

    res2 = contattn.attend_1d(0.5, 0.04, centers=[0.2, 0.5, 0.8], widths=[0.01] * 3, alpha=2.0)
    assert all(v >= 0.0 for v in res2["r"])
    assert len(res2["jacobian"]) == 2  # d r / d theta rows


def test_attention_2d_sparsity():
    near = contattn.attend_2d(
        [0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]],
        centers=[[0.0, 0.0]], widths=[[0.25, 0.25]], alpha=2.0,
    )
    far = contattn.attend_2d(
        [0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]],
        centers=[[10.0, 10.0]], widths=[[0.01, 0.01]], alpha=2.0,
    )
    assert near["r"][0] == pytest.approx(0.34036190930394, abs=1e-8)
    assert far["r"][0] < 1e-12


def test_fit_value():
    h = [[float(i + j) for j in range(12)] for i in range(3)]
    out = contattn.fit_value(h, basis_n=6, rbf_sigma=0.2, ridge=1e-6)
    assert len(out["B"]) == 3
    assert len(out["B"][0]) == 6
    assert out["residual"] < 10.0


def test_moment_match_and_demo():
    mu, sigma2 = contattn.moment_match([0.5, 0.5], [0.0, 1.0])
    assert (mu, sigma2) == (pytest.approx(0.5), pytest.approx(0.25))

    run = contattn.run_demo(alpha=2.0, seed=42)
    assert run["gradient_max_delta"] <= 1e-4
    assert sum(run["discrete_probs"]) == pytest.approx(1.0, abs=1e-12)


def test_run_checks_filtered():
    results = contattn.run_checks("epanechnikov")
    assert len(results) == 1
    assert results[0]["passed"]
