import math

import pytest

import roughmf as rm


def test_mittag_leffler_elementary_cases():
    assert rm.mittag_leffler(1.0, 1.0, 0.7) == pytest.approx(math.exp(0.7), rel=1e-14)
    # E_{1/2,1}(x) = exp(x^2) erfc(-x)
    x = -1.3
    assert rm.mittag_leffler(0.5, 1.0, x) == pytest.approx(math.exp(x * x) * math.erfc(-x), rel=1e-12)


def test_kernel_errors_shrink_with_factors():
    h, T = 0.1, 1.0
    errs = []
    for n in (5, 20):
        kernel, part = rm.build_kernel("uniform_optimal", n, h, T)
        assert len(kernel) == n and len(part) == n
        errs.append(rm.l2_error(kernel, h, T))
        assert errs[-1] <= rm.f2_bound(h, T, part)
    assert errs[1] < errs[0]


def test_optimized_partition_beats_uniform_bound():
    h, T, n = 0.1, 1.0, 10
    part, value = rm.optimize_partition(n, h, T, "f2")
    uniform = rm.uniform_partition(n, rm.optimal_step(n, T, h))
    assert value <= rm.f2_bound(h, T, uniform) * (1 + 1e-12)


def test_char_fn_trivial_points_and_bs_limit():
    params = rm.ModelParams(nu=0.0, lambda_=0.0, theta=0.0, v0=0.04)
    kernel, _ = rm.build_kernel("uniform_optimal", 20, params.hurst, params.horizon)
    for k in (rm.FractionalKernel(params.hurst), kernel):
        assert abs(rm.char_fn(params, k, 0.0) - 1.0) < 1e-12
        assert abs(rm.char_fn(params, k, 1.0) - 1.0) < 1e-12
    # ν = λ = θ = 0: constant variance, so the smile is flat at sqrt(v0).
    prices, vols = rm.smile(params, rm.FractionalKernel(params.hurst), [-0.1, 0.0, 0.1], 1.0)
    for p, v in zip(prices, vols):
        assert v == pytest.approx(0.2, abs=1e-6)


def test_implied_vol_roundtrip():
    price = rm.bs_call_price(1.0, 0.05, 0.25)
    assert rm.implied_vol(price, 1.0, 0.05, 1.0) == pytest.approx(0.25, abs=1e-9)


def test_simulation_martingale_and_determinism():
    params = rm.ModelParams(nu=0.1)
    kernel, _ = rm.build_kernel("f2_opt", 10, params.hurst, params.horizon)
    a = rm.simulate(params, kernel, n_paths=4000, steps=100, seed=7)
    b = rm.simulate(params, kernel, n_paths=4000, steps=100, seed=7, threads=3)
    assert a.terminal_spots == b.terminal_spots
    mean = sum(a.terminal_spots) / len(a.terminal_spots)
    var = sum((s - mean) ** 2 for s in a.terminal_spots) / (len(a.terminal_spots) - 1)
    assert abs(mean - 1.0) < 4 * math.sqrt(var / len(a.terminal_spots))
    price, se = rm.mc_call_price(a, 0.0)
    assert price > 0 and se > 0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        rm.mittag_leffler(1.5, 1.0, 0.1)
    with pytest.raises(ValueError):
        rm.ModelParams(hurst=0.7)
    with pytest.raises(ValueError):
        rm.char_fn(rm.ModelParams(), rm.FractionalKernel(0.1), 1.5 + 0j)
