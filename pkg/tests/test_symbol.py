import json

import numpy as np
import pytest

import toepasym as tp
from conftest import random_block_symbol, random_scalar_symbol


def test_constant_function_coefficients():
    grid = tp.SymbolGrid.from_function(lambda t: 1.0, 64)
    series, tail = tp.coefficients_from_samples(grid, 4)
    assert series.support() == [0]
    assert series.block(0)[0, 0] == pytest.approx(1.0)
    assert tail == pytest.approx(0.0, abs=1e-14)


def test_rational_fixture_coefficients(rational_symbol):
    series, tail = tp.coefficients_from_samples(rational_symbol.sample(16), 2)
    assert series.block(0)[0, 0] == pytest.approx(1.25, abs=1e-13)
    assert series.block(1)[0, 0] == pytest.approx(-0.5, abs=1e-13)
    assert series.block(-1)[0, 0] == pytest.approx(-0.5, abs=1e-13)
    assert series.block(2)[0, 0] == pytest.approx(0.0, abs=1e-13)
    assert tail < 1e-13


def test_support_outside_cutoff_goes_to_tail():
    t3 = tp.scalar_symbol({3: 1.0})
    series, tail = tp.coefficients_from_samples(t3.sample(16), 2)
    assert series.support() == []
    assert tail == pytest.approx(1.0, abs=1e-12)


def test_cutoff_too_large():
    grid = tp.SymbolGrid.from_function(lambda t: 1.0, 8)
    with pytest.raises(tp.CutoffTooLarge):
        tp.coefficients_from_samples(grid, 4)


def test_roundtrip_random_symbols():
    rng = np.random.default_rng(42)
    for _ in range(5):
        a = random_block_symbol(rng, block_size=2, max_offset=5)
        back, tail = tp.coefficients_from_samples(a.sample(), 5)
        assert tail < 1e-12
        for k in range(-5, 6):
            np.testing.assert_allclose(back.block(k), a.block(k), atol=1e-12)


def test_evaluate(rational_symbol):
    assert rational_symbol.eval(0.0)[0, 0] == pytest.approx(0.25)
    assert rational_symbol.eval(np.pi)[0, 0] == pytest.approx(2.25)
    eye = tp.identity_symbol(3)
    np.testing.assert_allclose(eye.eval(1.234), np.eye(3))


def test_reverse():
    a = tp.scalar_symbol({0: 1.0, 1: 0.3})
    r = tp.reverse(a)
    assert r.block(-1)[0, 0] == pytest.approx(0.3)
    assert r.block(0)[0, 0] == pytest.approx(1.0)
    sym = tp.scalar_symbol({0: 1.0, 1: 0.5, -1: 0.5})
    rs = tp.reverse(sym)
    for k in (-1, 0, 1):
        assert rs.block(k)[0, 0] == sym.block(k)[0, 0]
    rng = np.random.default_rng(3)
    a = random_scalar_symbol(rng)
    rr = tp.reverse(tp.reverse(a))
    for k in a.support():
        np.testing.assert_allclose(rr.block(k), a.block(k))


def test_pointwise_inverse_constant():
    inv, res = tp.pointwise_inverse(tp.scalar_symbol({0: 2.0}))
    assert inv.block(0)[0, 0] == pytest.approx(0.5, abs=1e-13)
    assert res < 1e-12


def test_pointwise_inverse_geometric(geometric_symbol):
    inv, res = tp.pointwise_inverse(geometric_symbol, cutoff=40)
    for k in range(0, 41):
        assert abs(inv.block(k)[0, 0] - 0.5**k) < 1e-10
    assert res < 1e-10


def test_pointwise_inverse_shift():
    inv, _ = tp.pointwise_inverse(tp.scalar_symbol({1: 1.0}), cutoff=4)
    assert inv.support() == [-1]
    assert inv.block(-1)[0, 0] == pytest.approx(1.0, abs=1e-13)


def test_pointwise_inverse_heuristic_residual(geometric_symbol):
    # documented heuristic cutoff must reach residual <= 1e-8
    _, res = tp.pointwise_inverse(geometric_symbol)
    assert res <= 1e-8
    _, res2 = tp.pointwise_inverse(tp.scalar_symbol({0: 2.0, 1: -0.3, -1: 0.1}))
    assert res2 <= 1e-8


def test_pointwise_inverse_singular():
    # 1 + t vanishes at theta = pi
    with pytest.raises(tp.SingularSymbol):
        tp.pointwise_inverse(tp.scalar_symbol({0: 1.0, 1: 1.0}))


def test_multiply_hand_expansion():
    left = tp.scalar_symbol({0: 1.0, 1: -0.5})
    right = tp.scalar_symbol({0: 1.0, -1: -0.5})
    prod = tp.multiply(left, right)
    assert prod.block(0)[0, 0] == pytest.approx(1.25)
    assert prod.block(1)[0, 0] == pytest.approx(-0.5)
    assert prod.block(-1)[0, 0] == pytest.approx(-0.5)


def test_multiply_identity_and_shift(rational_symbol):
    prod = tp.multiply(rational_symbol, tp.identity_symbol())
    for k in (-1, 0, 1):
        assert prod.block(k)[0, 0] == rational_symbol.block(k)[0, 0]
    one = tp.multiply(tp.scalar_symbol({1: 1.0}), tp.scalar_symbol({-1: 1.0}))
    assert one.support() == [0]
    assert one.block(0)[0, 0] == pytest.approx(1.0)


def test_multiply_associative():
    rng = np.random.default_rng(7)
    for _ in range(3):
        a = random_block_symbol(rng, 2, 2)
        b = random_block_symbol(rng, 2, 2)
        c = random_block_symbol(rng, 2, 2)
        left = tp.multiply(tp.multiply(a, b), c)
        right = tp.multiply(a, tp.multiply(b, c))
        for k in set(left.support()) | set(right.support()):
            np.testing.assert_allclose(left.block(k), right.block(k), atol=1e-13)


def test_multiply_block_mismatch():
    with pytest.raises(tp.BlockSizeMismatch):
        tp.multiply(tp.identity_symbol(1), tp.identity_symbol(2))


def test_zygmund_coefficients():
    z = tp.zygmund_symbol(1.0, 2)
    assert z.block(0)[0, 0] == pytest.approx(3.75)
    assert z.block(1)[0, 0] == pytest.approx(0.5)
    assert z.block(2)[0, 0] == pytest.approx(0.25)
    assert z.block(4)[0, 0] == pytest.approx(0.125)
    assert z.block(-4)[0, 0] == pytest.approx(0.125)
    assert z.smoothness_tag == pytest.approx(1.0)


def test_zygmund_lacunary_support():
    z = tp.zygmund_symbol(0.8, 5, seed=11)
    allowed = {0} | {1 << j for j in range(6)} | {-(1 << j) for j in range(6)}
    assert set(z.support()) <= allowed
    assert z.max_offset == 32


def test_zygmund_amplitude_scaling():
    z2 = tp.zygmund_symbol(2.0, 1)
    z1 = tp.zygmund_symbol(1.0, 1)
    assert abs(z2.block(2)[0, 0]) == pytest.approx(2.0**-2 / 2)
    assert abs(z1.block(2)[0, 0]) == pytest.approx(2.0**-1 / 2)


def test_zygmund_deterministic_seed():
    z1 = tp.zygmund_symbol(0.75, 4, seed=5)
    z2 = tp.zygmund_symbol(0.75, 4, seed=5)
    for k in z1.support():
        np.testing.assert_array_equal(z1.block(k), z2.block(k))


def test_krein_norm(rational_symbol):
    assert tp.krein_norm(tp.identity_symbol()) == pytest.approx(1.0)
    assert tp.krein_norm(rational_symbol) == pytest.approx(2.5625)
    assert tp.krein_norm(tp.LaurentMatrixSeries(1, {})) == pytest.approx(0.0)


def test_winding_number(rational_symbol):
    assert tp.winding_number(tp.scalar_symbol({1: 1.0})) == 1
    assert tp.winding_number(rational_symbol) == 0
    assert tp.winding_number(tp.scalar_symbol({-2: 1.0})) == -2


def test_winding_positive_scaling_invariance(rational_symbol):
    scaled = tp.multiply(tp.scalar_symbol({0: 7.5}), rational_symbol)
    assert tp.winding_number(scaled) == tp.winding_number(rational_symbol)


def test_winding_grid_too_coarse():
    spike = tp.scalar_symbol({100: 1.0}, grid_size=256)
    with pytest.raises(tp.GridTooCoarse):
        tp.winding_number(spike, grid_size=256)


def test_winding_singular():
    with pytest.raises(tp.SingularSymbol):
        tp.winding_number(tp.scalar_symbol({0: 1.0, 1: 1.0}))


def test_grid_size_validation():
    with pytest.raises(tp.GridTooCoarse):
        tp.LaurentMatrixSeries(1, {5: np.array([[1.0]])}, grid_size=8)
    with pytest.raises(tp.GridTooCoarse):
        tp.LaurentMatrixSeries(1, {0: np.array([[1.0]])}, grid_size=100)


def test_json_roundtrip_bit_exact():
    rng = np.random.default_rng(13)
    a = random_block_symbol(rng, 2, 3).with_tag(0.75)
    text = tp.symbol_to_json(a)
    back = tp.symbol_from_json(text)
    assert tp.symbol_to_json(back) == text
    for k in a.support():
        np.testing.assert_array_equal(back.block(k), a.block(k))
    assert back.smoothness_tag == a.smoothness_tag


def test_json_schema(tmp_path, rational_symbol):
    path = tmp_path / "s.json"
    tp.save_symbol(rational_symbol, path)
    data = json.loads(path.read_text())
    assert data["n"] == 1
    ks = [entry["k"] for entry in data["coeffs"]]
    assert ks == sorted(ks)
    assert data["coeffs"][0]["re"] == [[-0.5]]
    loaded = tp.load_symbol(path)
    assert loaded.block(0)[0, 0] == 1.25
