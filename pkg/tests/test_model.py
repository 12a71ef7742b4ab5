import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterchain.errors import DegeneratePointError
from clusterchain.model import (
    ModelParams,
    bdg_solve,
    bogoliubov_phase,
    dispersion,
    edge_splitting,
    free_fermion_solution,
    ground_energy_density,
    ground_energy_periodic,
)

fields = st.floats(-5, 5, allow_nan=False)
momenta = st.floats(-np.pi / 2, np.pi / 2, allow_nan=False)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(J=0.0)
    with pytest.raises(ValueError):
        ModelParams(N=3)
    with pytest.raises(ValueError):
        ModelParams(N=8, boundary="twisted")
    assert ModelParams(B=0.5).thermodynamic


@pytest.mark.parametrize("B,k,expected", [(0, 0.37, 1.0), (1, 0.0, 0.0), (2, np.pi / 2, 3.0)])
def test_dispersion_values(B, k, expected):
    assert dispersion(B, k) == pytest.approx(expected, abs=1e-12)


@given(fields, momenta)
def test_dispersion_symmetric(B, k):
    assert dispersion(B, k) == dispersion(B, -k)


def test_bogoliubov_phase_values():
    k = 0.37
    assert bogoliubov_phase(0.0, k) == pytest.approx(-np.exp(-2j * k), abs=1e-14)
    assert bogoliubov_phase(2.0, 0.0) == pytest.approx(1.0, abs=1e-14)


@given(fields, momenta)
def test_bogoliubov_phase_unit_modulus(B, k):
    if dispersion(B, k) > 1e-10:
        assert abs(abs(bogoliubov_phase(B, k)) - 1.0) < 1e-12


def test_bogoliubov_phase_degenerate_point():
    with pytest.raises(DegeneratePointError):
        bogoliubov_phase(1.0, 0.0)


def test_free_fermion_solution_invariants():
    sol = free_fermion_solution(0.6, 32)
    assert np.allclose(sol.energies, np.sqrt(1 + 0.36 - 1.2 * np.cos(2 * sol.momenta)), atol=1e-15)
    assert np.all(np.abs(np.abs(sol.phases) - 1) < 1e-12)


def test_bdg_cluster_point():
    sol = bdg_solve(ModelParams(B=0.0, N=8))
    # four Majorana zero modes = two zero-energy fermion modes
    assert sol.zero_mode_count() == 4
    assert np.sum(np.abs(sol.bdg_spectrum) < 1e-12) == 4
    assert np.allclose(sol.quasiparticle_energies[:2], 0.0, atol=1e-12)
    assert np.allclose(sol.quasiparticle_energies[2:], 2.0, atol=1e-10)
    assert np.all(np.diff(sol.quasiparticle_energies) >= 0)


def test_bdg_polarized_phase_gapped():
    sol = bdg_solve(ModelParams(B=3.0, N=12))
    assert sol.quasiparticle_energies[0] > 0.5
    assert sol.zero_mode_count() == 0
    assert np.all(np.abs(sol.contraction_table) <= 1 + 1e-12)


@pytest.mark.parametrize("N", [8, 10, 12, 20])
def test_zero_mode_count_by_phase(N):
    assert bdg_solve(ModelParams(B=0.0, N=N)).zero_mode_count() == 4
    assert bdg_solve(ModelParams(B=1.5, N=N)).zero_mode_count() == 0


def test_bdg_contractions_match_cluster_state():
    sol = bdg_solve(ModelParams(B=0.0, N=10))
    t = sol.contraction_table
    for i in range(10 - 2):
        assert t[i, i + 2] == pytest.approx(1.0, abs=1e-12)


def test_bdg_requires_open_finite_chain():
    with pytest.raises(ValueError):
        bdg_solve(ModelParams(B=0.5, N=8, boundary="periodic"))
    with pytest.raises(ValueError):
        bdg_solve(ModelParams(B=0.5))


def test_edge_splitting():
    assert edge_splitting(0.0, 10) == pytest.approx(0.0, abs=1e-12)
    seq = [edge_splitting(0.5, n) for n in (8, 12, 16, 20)]
    assert all(a > b for a, b in zip(seq, seq[1:]))
    with pytest.raises(ValueError):
        edge_splitting(1.5, 10)


def test_edge_splitting_exponential_in_length():
    N = np.arange(8, 41, 4)
    y = np.log([edge_splitting(0.5, int(n)) for n in N])
    slope, icpt = np.polyfit(N, y, 1)
    r2 = 1 - np.sum((y - (slope * N + icpt)) ** 2) / np.sum((y - y.mean()) ** 2)
    assert slope < 0 and r2 > 0.99


def test_periodic_ground_energy_converges():
    exact = ground_energy_density(0.7)
    errs = [abs(ground_energy_periodic(ModelParams(B=0.7, N=n)) / n - exact) for n in (8, 16, 32)]
    assert all(e < 1.0 / n for e, n in zip(errs, (8, 16, 32)))
