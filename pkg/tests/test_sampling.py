"""Random-sampling approximation: reproducibility, distribution, error decay."""

from __future__ import annotations

import numpy as np
import pytest

from sumsetlab.fourier import GroupFunction, convolve, spectral_l1_norm, transform
from sumsetlab.groups import cyclic
from sumsetlab.sampling import (
    Decomposition,
    SamplingTask,
    derive_seed,
    fourier_sample,
    measure_failure_rate,
    physical_sample,
    sample_approximant,
)

from conftest import random_support


def _random_convolution(rng, order, size_a=None, size_b=None):
    g = cyclic(order)
    a = random_support(rng, order, size_a or order // 2)
    b = random_support(rng, order, size_b or order // 2)
    return g, a, b, convolve(GroupFunction.indicator(g, a), GroupFunction.indicator(g, b))


def test_single_part_is_exact(rng):
    g = cyclic(16)
    part = GroupFunction(g, rng.standard_normal(16) + 1j * rng.standard_normal(16))
    part = GroupFunction(g, part.values / max(1e-9, part.lp_norm(2)))
    d = Decomposition.from_parts([2.5 - 1.0j], [part])
    report = sample_approximant(d, 2.0, 0.5, seed=1)
    assert report.lp_error < 1e-12


def test_identical_parts_positive_weights_exact(rng):
    g = cyclic(10)
    part = GroupFunction.constant(g, 0.7)
    d = Decomposition.from_parts([1.0, 2.0, 0.5], [part, part, part])
    report = sample_approximant(d, 2.0, 0.3, seed=7)
    assert report.lp_error < 1e-12


def test_invalid_parameters():
    g = cyclic(4)
    d = Decomposition.from_parts([1.0], [GroupFunction.constant(g, 1.0)])
    with pytest.raises(ValueError):
        sample_approximant(d, 1.5, 0.5, seed=0)
    with pytest.raises(ValueError):
        sample_approximant(d, 2.0, 1.5, seed=0)
    with pytest.raises(ValueError):
        sample_approximant(Decomposition.from_parts([0.0], [GroupFunction.constant(g, 1.0)]), 2.0, 0.5, 0)
    with pytest.raises(ValueError):
        sample_approximant(Decomposition.from_parts([1.0], [GroupFunction.constant(g, 2.0)]), 2.0, 0.5, 0)
    with pytest.raises(ValueError):
        fourier_sample(GroupFunction.constant(g, 0.0), 2.0, 0.5, seed=0)
    with pytest.raises(ValueError):
        physical_sample(g, [], [0], 2.0, 0.5, seed=0)


def test_seeded_reproducibility(rng):
    _, _, _, f = _random_convolution(rng, 64)
    r1 = fourier_sample(f, 2.0, 0.25, seed=123)
    r2 = fourier_sample(f, 2.0, 0.25, seed=123)
    assert r1.report.indices == r2.report.indices
    assert r1.report.lp_error == r2.report.lp_error
    assert np.array_equal(r1.report.approximant.values, r2.report.approximant.values)
    r3 = fourier_sample(f, 2.0, 0.25, seed=124)
    assert r3.report.indices != r1.report.indices


def test_sample_size_formula(rng):
    _, _, _, f = _random_convolution(rng, 64)
    assert fourier_sample(f, 2.0, 0.25, seed=0).report.k == 128  # ceil(4 * 2 / 0.0625)
    assert fourier_sample(f, 4.0, 0.4, seed=0, c_sample=1.0).report.k == 25


def test_approximant_recomputable_from_indices(rng):
    g, _, _, f = _random_convolution(rng, 32)
    res = fourier_sample(f, 2.0, 0.3, seed=5)
    spec = transform(f)
    dirs = np.zeros(g.order, dtype=complex)
    nz = spec.coeffs != 0
    dirs[nz] = spec.coeffs[nz] / np.abs(spec.coeffs[nz])
    rebuilt = np.zeros(g.order, dtype=complex)
    for idx in res.report.indices:
        rebuilt += dirs[idx] * g.character(g.coords_of(idx)).values_table()
    rebuilt /= res.report.k
    assert np.max(np.abs(rebuilt - res.report.approximant.values)) < 1e-12
    # error recomputable against f / ||fhat||_1
    l1 = spectral_l1_norm(spec)
    diff = GroupFunction(g, f.values / l1 - rebuilt)
    assert diff.lp_norm(2.0) == pytest.approx(res.report.lp_error, abs=1e-9)


def test_fourier_sample_unit_coefficients_and_l1(rng):
    _, _, _, f = _random_convolution(rng, 101)
    res = fourier_sample(f, 2.0, 0.3, seed=11)
    assert all(abs(abs(c) - 1.0) < 1e-12 for c in res.coefficients)
    assert spectral_l1_norm(transform(res.report.approximant)) <= 1.0 + 1e-9
    assert len(res.characters) == res.report.k


def test_fourier_sample_single_character_exact():
    g = cyclic(31)
    f = GroupFunction(g, g.character(4).values_table())
    res = fourier_sample(f, 2.0, 0.2, seed=3)
    assert res.report.lp_error < 1e-9
    assert all(c.frequency == 4 for c in res.characters)
    const = GroupFunction.constant(g, 1.0)
    res2 = fourier_sample(const, 2.0, 0.2, seed=3)
    assert res2.report.lp_error < 1e-9
    assert all(c.is_principal for c in res2.characters)


def test_fourier_sample_reference_instance(rng):
    # cyclic(101), random density-1/2 pair: error <= 0.3 in >= 95% of 200 trials
    _, _, _, f = _random_convolution(rng, 101)
    task = SamplingTask("fourier", 2.0, 0.3, function=f)
    report = measure_failure_rate(task, 200, seed=17)
    assert report.failure_rate <= 0.05


def test_explicit_character_decomposition_reference_instance(rng):
    # the same Monte Carlo through the generic dense-matrix sampler
    g, _, _, f = _random_convolution(rng, 64)
    spec = transform(f)
    parts = [GroupFunction(g, g.character(g.coords_of(r)).values_table()) for r in range(64)]
    d = Decomposition.from_parts(spec.coeffs, parts)
    task = SamplingTask("decomposition", 2.0, 0.25, decomposition=d)
    report = measure_failure_rate(task, 200, seed=19)
    assert report.failure_rate <= 0.05
    # identical seeds walk identical index streams in both front ends
    generic = sample_approximant(d, 2.0, 0.25, seed=77)
    specialized = fourier_sample(f, 2.0, 0.25, seed=77)
    assert generic.indices == specialized.report.indices
    assert generic.lp_error == pytest.approx(specialized.report.lp_error, abs=1e-9)


def test_physical_sample_trivial_cases(rng):
    g = cyclic(23)
    b = random_support(rng, 23, 7)
    singleton = physical_sample(g, [4], b, 2.0, 0.5, seed=2)
    assert singleton.lp_error < 1e-12
    whole = physical_sample(g, random_support(rng, 23, 5), range(23), 2.0, 0.5, seed=2)
    assert whole.lp_error < 1e-12


def test_physical_sample_target_is_scaled_measure_convolution(rng):
    g = cyclic(29)
    a = random_support(rng, 29, 6)
    b = random_support(rng, 29, 9)
    rep = physical_sample(g, a, b, 2.0, 0.4, seed=8)
    mu_b = (b.size / 29.0) ** 0.5
    assert rep.details["part_norm"] == pytest.approx(mu_b, abs=1e-12)
    f = convolve(GroupFunction.measure(g, a), GroupFunction.indicator(g, b))
    target = GroupFunction(g, f.values / mu_b)
    rebuilt_err = (target - rep.approximant).lp_norm(2.0)
    assert rebuilt_err == pytest.approx(rep.lp_error, abs=1e-9)


def test_physical_sample_reference_instance(rng):
    g = cyclic(97)
    a = random_support(rng, 97, 20)
    b = random_support(rng, 97, 20)
    task = SamplingTask("physical", 2.0, 0.3, group=g, a_support=tuple(a), b_support=tuple(b))
    report = measure_failure_rate(task, 200, seed=23)
    assert report.failure_rate <= 0.10


def test_failure_rate_trivial_tasks(rng):
    g = cyclic(12)
    part = GroupFunction.constant(g, 1.0)
    d = Decomposition.from_parts([1.0 + 0j], [part])
    task = SamplingTask("decomposition", 2.0, 0.4, decomposition=d)
    assert measure_failure_rate(task, 25, seed=1).failure_rate == 0.0
    d2 = Decomposition.from_parts([0.5, 1.5], [part, part])
    task2 = SamplingTask("decomposition", 2.0, 0.4, decomposition=d2)
    assert measure_failure_rate(task2, 25, seed=1).failure_rate == 0.0


def test_empirical_distribution_matches_weights(rng):
    g = cyclic(8)
    weights = rng.standard_normal(40) + 1j * rng.standard_normal(40)
    parts = [GroupFunction.constant(g, 1.0)] * 40
    d = Decomposition.from_parts(weights, parts)
    rep = sample_approximant(d, 2.0, 0.5, seed=31, k=100_000)
    counts = np.bincount(np.asarray(rep.indices), minlength=40)
    emp = counts / counts.sum()
    probs = np.abs(weights) / np.sum(np.abs(weights))
    assert 0.5 * np.sum(np.abs(emp - probs)) <= 0.02


def test_mean_error_nonincreasing_in_k(rng):
    _, _, _, f = _random_convolution(rng, 64)
    means = []
    for k in (4, 16, 64, 256):
        errs = [fourier_sample(f, 2.0, 0.5, derive_seed(55, k, s), k=k).report.lp_error for s in range(100)]
        means.append(float(np.mean(errs)))
    assert means[0] >= means[1] >= means[2] >= means[3]


def test_zero_weight_parts_never_sampled(rng):
    g = cyclic(6)
    good = GroupFunction.constant(g, 1.0)
    d = Decomposition.from_parts([0.0, 2.0], [good, good])
    rep = sample_approximant(d, 2.0, 0.5, seed=9, k=500)
    assert set(rep.indices) == {1}


def test_report_json_fields(rng):
    _, _, _, f = _random_convolution(rng, 32)
    rep = fourier_sample(f, 2.0, 0.3, seed=44).report
    payload = rep.to_json()
    assert set(payload) == {"k", "sigma", "epsilon", "p", "lp_error", "seed", "rng_id"}
    assert payload["rng_id"] == "numpy-pcg64"
    assert len(payload["sigma"]) == payload["k"]
