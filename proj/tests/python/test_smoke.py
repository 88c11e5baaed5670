"""End-to-end smoke test of the Python bindings.

Light touches of every exposed surface: geometry, potentials, the scalar
lattice integral, two-body calibration/dispersion/counting, the tiny-grid
three-body identity, and the model-operator asymptotics. Heavy sweeps stay
in the C++ acceptance gate.
"""

import math

import numpy as np
import pytest

import latspec

MU_STAR = 3.956776022694005143
WATSON = 0.50546201971732600605
LAMBDA0 = 1.0062378251027814891


def test_geometry_and_symbols():
    assert latspec.dispersion([0.0, 0.0, 0.0]) == 0.0
    assert latspec.dispersion([math.pi] * 3) == pytest.approx(6.0)
    k = np.array([0.7, -0.4, 1.1])
    q = np.array([0.2, 0.9, -1.3])
    split = latspec.dispersion(0.5 * k - q) + latspec.dispersion(0.5 * k + q)
    assert latspec.twobody_symbol(k, q) == pytest.approx(split, rel=1e-14)

    band = latspec.twobody_band(k)
    assert band.e_min == pytest.approx(latspec.twobody_symbol(k, [0, 0, 0]))
    assert band.e_min < band.e_max

    grid = latspec.TorusGrid.uniform(6)
    assert grid.size() == 216
    assert grid.nodes.shape == (216, 3)
    assert grid.weight == pytest.approx((2 * math.pi / 6) ** 3)
    assert grid.contains(grid.nodes[17])
    assert not grid.contains([0.3, 0.0, 0.0])


def test_potentials():
    pot = latspec.LatticePotential.nearest_neighbor(2.0, 0.5, 1.3)
    assert pot.mu == 1.3
    assert pot.max_support() == 1
    assert len(pot.support()) == 7
    p = [0.4, -0.8, 1.5]
    assert pot.momentum_kernel(p) == pytest.approx(pot.momentum_kernel([-x for x in p]))
    assert pot.with_mu(2.6).momentum_kernel(p) == pytest.approx(
        2.0 * pot.momentum_kernel(p)
    )
    with pytest.raises(ValueError):
        latspec.LatticePotential.table([[0, 0, 0, -1.0]], 1.0)


def test_scalar_lattice_integral_and_watson():
    assert latspec.watson_constant() == pytest.approx(WATSON, abs=1e-12)
    s = latspec.scalar_lattice_integral([0.0, 0.0, 0.0], 0.0)
    assert s == pytest.approx(WATSON / 2, abs=1e-12)
    with pytest.raises(ArithmeticError):
        latspec.scalar_lattice_integral([0.0, 0.0, 0.0], 1.0)  # above the band


def test_two_body_counting_and_eigen_interop():
    pot = latspec.LatticePotential.nearest_neighbor(1.0, 0.3, 3.0)
    grid = latspec.TorusGrid.uniform(6)
    k = [0.9, -0.4, 0.2]
    z = latspec.twobody_band(k).e_min - 0.8

    g = latspec.build_G(pot, k, z, grid)
    assert g.matrix.shape == (216, 216)
    assert np.max(np.abs(g.matrix - g.matrix.T)) <= 1e-13
    np_eigs = np.linalg.eigvalsh(g.matrix)
    assert g.top_eigenvalue() == pytest.approx(np_eigs[-1], abs=1e-10)

    count = latspec.count_two_body(pot, k, z, grid)  # exact identity inside
    h = latspec.build_h(pot, k, grid)
    assert count == int(np.sum(np.linalg.eigvalsh(h.matrix) < z))


def test_calibration_and_dispersion():
    grid = latspec.TorusGrid.uniform(8)
    cal = latspec.calibrate_resonance(latspec.LatticePotential.zero_range(1.0), grid)
    assert cal.mu_star == pytest.approx(MU_STAR, abs=1e-11)
    assert cal.phi0**2 == pytest.approx(MU_STAR, abs=1e-9)

    pot = latspec.LatticePotential.zero_range(cal.mu_star)
    z = latspec.bound_state_energy_fixed(pot, [math.pi / 2, 0, 0], grid)
    assert z == pytest.approx(0.494450609662765994, abs=1e-10)
    assert (
        latspec.bound_state_energy(
            latspec.LatticePotential.zero_range(0.8 * MU_STAR), [0, 0, 0], grid
        )
        is None
    )


def test_three_body_tiny_identity_and_tau():
    grid = latspec.TorusGrid.uniform(3)
    pot = latspec.LatticePotential.zero_range(1.5 * MU_STAR)
    z_chan = latspec.discrete_channel_threshold(pot, [0, 0, 0], grid)
    rep = latspec.count_three_body_tiny(pot, [0, 0, 0], z_chan - 0.5, grid)
    assert rep.n_direct == rep.n_bs
    assert rep.channel_top < 1.0

    x = np.linspace(-1.0, 1.0, grid.size() ** 2)
    dense = latspec.build_dense_H(pot, [0, 0, 0], grid)
    assert np.allclose(dense @ x, latspec.apply_H(pot, [0, 0, 0], grid, x), atol=1e-10)

    res = latspec.tau(
        latspec.LatticePotential.zero_range(MU_STAR),
        [0, 0, 0],
        latspec.TorusGrid.uniform(4),
        solve_n=8,
    )
    assert abs(res.tau) <= 1e-9
    assert res.branch == "two-body-branch"


def test_model_operator_asymptotics():
    assert latspec.lambda0() == pytest.approx(LAMBDA0, abs=1e-12)
    assert latspec.s0_closed_form(0.0) == pytest.approx(4 * math.pi / (3 * math.sqrt(3)))
    assert latspec.s_hat(0.0, 0.0) == pytest.approx(1 / (math.sqrt(3) * math.pi))
    assert latspec.channel_symbol(0, 1.5) == pytest.approx(
        latspec.s0_closed_form(1.5), abs=1e-9
    )

    op = latspec.build_T1(1e-6, 1.0, radial_per_decade=40)
    assert latspec.count_T1(op) == 2
    curve = latspec.count_N_model([1e-6, 1e-8, 1e-10], 1.0, radial_per_decade=40)
    assert curve.counts == [2, 3, 4]
    assert curve.abscissa[0] == pytest.approx(abs(math.log(1e-6)))


def test_config_round_trip():
    cfg = latspec.RunConfig.from_json_text('{"grid": {"n": 8}}')
    cfg.validate()
    assert cfg.hash().startswith("0x") and len(cfg.hash()) == 18
    assert latspec.RunConfig.from_json_text(cfg.canonical_json()).hash() == cfg.hash()
    with pytest.raises(ValueError):
        latspec.RunConfig.from_json_text('{"grid": {"unknown_knob": 1}}')
