import numpy as np
import pytest

from clusterchain.correlators import correlator_set
from clusterchain.ed_oracle import (
    build_hamiltonian,
    degeneracy,
    pauli_string,
    single_site_rdm_ed,
    splitting_curve,
    stabilizer_expectations,
    two_site_rdm_ed,
)
from clusterchain.errors import SizeGuardError
from clusterchain.model import ModelParams, bdg_solve, edge_splitting, ground_energy_density
from clusterchain.rdm import marginals, validate_rdm

from .conftest import ed_correlators, ed_pair, ed_solution


def test_cluster_spectrum_periodic():
    H = build_hamiltonian(ModelParams(B=0.0, N=6, boundary="periodic")).toarray()
    e = np.linalg.eigvalsh(H)
    m = (e + 6.0) / 2.0
    assert np.allclose(m, np.round(m), atol=1e-12)
    assert e[0] == pytest.approx(-6.0)


def test_hermitian_and_z2_symmetric():
    for bc in ("open", "periodic"):
        H = build_hamiltonian(ModelParams(B=0.7, N=8, boundary=bc))
        assert abs(H - H.T).max() == 0
        P = pauli_string(8, {i: "z" for i in range(8)})
        assert abs(H @ P - P @ H).max() < 1e-12


def test_size_guard():
    with pytest.raises(SizeGuardError):
        build_hamiltonian(ModelParams(B=0.0, N=13))
    with pytest.raises(SizeGuardError):
        build_hamiltonian(ModelParams(B=0.0, N=16), allow_large=True)


@pytest.mark.parametrize(
    "B,boundary,expected", [(0.0, "open", 4), (0.0, "periodic", 1), (2.0, "open", 1)]
)
def test_degeneracy(B, boundary, expected):
    assert degeneracy(ModelParams(B=B, N=8, boundary=boundary)).degeneracy == expected


def test_cluster_pair_maximally_mixed():
    params, sol = ed_solution(0.0, 10)
    rho = np.asarray(two_site_rdm_ed(params, 4, 6, sol=sol))
    assert np.max(np.abs(rho - np.eye(4) / 4)) < 1e-10


def test_polarized_pair():
    params, sol = ed_solution(100.0, 8)
    rho = np.asarray(two_site_rdm_ed(params, 1, 5, sol=sol))
    target = np.zeros((4, 4))
    target[0, 0] = 1
    assert np.max(np.abs(rho - target)) < 1e-3


def test_marginals_consistent():
    params, sol = ed_solution(0.7, 10)
    rho = np.asarray(two_site_rdm_ed(params, 3, 7, sol=sol))
    a, b = marginals(rho)
    assert np.max(np.abs(a - single_site_rdm_ed(params, 3, sol=sol))) < 1e-12
    assert np.max(np.abs(b - single_site_rdm_ed(params, 7, sol=sol))) < 1e-12
    assert validate_rdm(rho).ok


@pytest.mark.parametrize("boundary", ["open", "periodic"])
def test_stabilizers_at_cluster_point(boundary):
    s = stabilizer_expectations(ModelParams(B=0.0, N=10, boundary=boundary))
    assert np.allclose(s, 1.0, atol=1e-12)


def test_stabilizers_below_one_in_field():
    s = stabilizer_expectations(ModelParams(B=2.0, N=10))
    assert np.all(s < 1.0)


def test_splitting_curve():
    assert all(dE < 1e-12 for _, dE in splitting_curve(0.0, [6, 8, 10]))
    curve = splitting_curve(0.3, [6, 8, 10, 12])
    vals = [dE for _, dE in curve]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(edge_splitting(0.3, 12), abs=1e-8)


def test_splitting_curve_delegates_long_chains():
    curve = dict(splitting_curve(0.3, [12, 20]))
    assert curve[20] == edge_splitting(0.3, 20)


@pytest.mark.parametrize("B", [0.0, 0.3, 0.7, 2.0])
@pytest.mark.parametrize("N", [6, 8, 10, 12])
def test_ed_matches_bdg_levels(B, N):
    _, sol = ed_solution(B, N)
    bdg = bdg_solve(ModelParams(B=B, N=N))
    assert np.max(np.abs(sol.energies[:8] - bdg.low_levels(8))) < 1e-8


def test_periodic_energy_density():
    _, sol = ed_solution(2.0, 12, "periodic")
    assert sol.energies[0] / 12 == pytest.approx(ground_energy_density(2.0), abs=1e-2)


@pytest.mark.parametrize("B", [2.0, 5.0])
def test_ed_vs_thermodynamic_limit(B):
    for R in (2, 4):
        analytic = correlator_set(B, R)
        dev = [max(abs(ed_correlators(B, N, R)[k] - getattr(analytic, k)) for k in ("xx", "yy", "zz")) for N in (8, 12)]
        assert dev[1] < 2e-2 and dev[1] < dev[0]


def test_odd_separation_pair_is_uncorrelated():
    c = ed_correlators(2.0, 12, 3)
    assert abs(c["xx"]) < 1e-10 and abs(c["yy"]) < 1e-10
