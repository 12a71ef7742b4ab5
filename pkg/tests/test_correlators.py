import numpy as np
import pytest

from clusterchain.correlators import (
    SIGN,
    correlator_set,
    magnetization,
    string_correlator,
    xx_correlator,
    yy_correlator,
    zz_correlator,
)
from clusterchain.ed_oracle import string_expectation_ed
from clusterchain.errors import WindowError
from clusterchain.gfunction import g_vector

from .conftest import ed_correlators, ed_solution


def test_magnetization_limits():
    assert magnetization(g_vector(0.0, 2)) == pytest.approx(0.0, abs=1e-12)
    assert magnetization(g_vector(100.0, 2)) == pytest.approx(1.0, abs=5e-3)
    assert magnetization(g_vector(-100.0, 2)) == pytest.approx(-1.0, abs=5e-3)


def test_sign_convention_resolved_by_ed():
    # (0,0) entry of the B=3 pair state fixes the sign of <sigma^z>
    ed = ed_correlators(3.0, 12, 2)
    analytic = correlator_set(3.0, 2)
    assert SIGN == -1
    assert np.sign(ed["z"]) == np.sign(analytic.z)
    flipped = (1 - 2 * analytic.z + analytic.zz) / 4
    assert abs((1 + 2 * ed["z"] + ed["zz"]) / 4 - (1 + 2 * analytic.z + analytic.zz) / 4) < 1e-2
    assert abs((1 + 2 * ed["z"] + ed["zz"]) / 4 - flipped) > 0.5


def test_magnetization_matches_ed_in_polarized_limit():
    assert ed_correlators(100.0, 8, 2)["z"] == pytest.approx(magnetization(g_vector(100.0, 2)), abs=1e-4)
    assert ed_correlators(-100.0, 8, 2)["z"] == pytest.approx(-1.0, abs=5e-3)


@pytest.mark.parametrize("R", [2, 4, 6, 8])
def test_cluster_point_nullity(R):
    c = correlator_set(0.0, R)
    for v in (c.z, c.zz, c.xx, c.yy):
        assert abs(v) < 1e-10


def test_polarized_limit():
    c = correlator_set(100.0, 2)
    assert c.z == pytest.approx(1.0, abs=5e-3)
    assert c.zz == pytest.approx(1.0, abs=5e-3)
    assert abs(c.xx) < 5e-3 and abs(c.yy) < 5e-3


def test_odd_and_small_windows_rejected():
    G = g_vector(0.5, 4)
    with pytest.raises(ValueError):
        xx_correlator(G, 3)
    with pytest.raises(ValueError):
        zz_correlator(G, 0)
    with pytest.raises(WindowError):
        xx_correlator(G, 6)


@pytest.mark.parametrize("B", [0.3, 0.7, 1.0, 2.0, -1.5])
@pytest.mark.parametrize("R", [2, 4, 10])
def test_yy_is_xx_of_reflected_window(B, R):
    G = g_vector(B, R + 1)
    assert yy_correlator(G, R) == pytest.approx(xx_correlator(G.reflected(), R), abs=1e-14)


@pytest.mark.parametrize("B", [0.4, 1.0, 2.5])
def test_global_sign_invariance(B):
    G = g_vector(B, 12)
    Gn = G.negated()
    for R in (2, 6, 10):
        assert zz_correlator(Gn, R) == pytest.approx(zz_correlator(G, R), abs=1e-14)
        assert xx_correlator(Gn, R) == pytest.approx(xx_correlator(G, R), abs=1e-14)
        assert yy_correlator(Gn, R) == pytest.approx(yy_correlator(G, R), abs=1e-14)
    assert magnetization(Gn) == pytest.approx(-magnetization(G))
    assert string_correlator(Gn, 3) == pytest.approx(-string_correlator(G, 3), abs=1e-14)
    assert string_correlator(Gn, 4) == pytest.approx(string_correlator(G, 4), abs=1e-14)


@pytest.mark.parametrize("B", [0.3, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("R", [2, 8, 20])
def test_bounded(B, R):
    c = correlator_set(B, R)
    for v in (c.z, c.zz, c.xx, c.yy, c.zz_connected):
        assert -1 - 1e-12 <= v <= 1 + 1e-12


@pytest.mark.parametrize("B", [2.0, 5.0])
@pytest.mark.parametrize("R", [2, 4])
def test_ed_equivalence_gapped(B, R):
    analytic = correlator_set(B, R)
    devs = {}
    for N in (8, 12):
        ed = ed_correlators(B, N, R)
        devs[N] = max(abs(ed[k] - getattr(analytic, k)) for k in ("xx", "yy", "zz"))
    assert devs[12] < 2e-2
    assert devs[12] < devs[8]


def test_ed_equivalence_topological_small_field():
    for R in (2, 4):
        analytic = correlator_set(0.3, R)
        devs = [max(abs(ed_correlators(0.3, N, R)[k] - getattr(analytic, k)) for k in ("xx", "yy", "zz")) for N in (8, 10, 12)]
        assert devs[-1] < 2e-2
        assert devs[0] > devs[1] > devs[2]


@pytest.mark.xfail(strict=True, reason="correlation length at B=0.7 exceeds what N=12 resolves; deviation ~0.18")
def test_ed_equivalence_b07_at_n12():
    for R in (2, 4):
        analytic = correlator_set(0.7, R)
        ed = ed_correlators(0.7, 12, R)
        assert max(abs(ed[k] - getattr(analytic, k)) for k in ("xx", "yy", "zz")) < 2e-2


def test_ed_agreement_improves_with_length_b07():
    for R in (2, 4):
        analytic = correlator_set(0.7, R)
        devs = [max(abs(ed_correlators(0.7, N, R)[k] - getattr(analytic, k)) for k in ("xx", "yy", "zz")) for N in (8, 10, 12)]
        assert devs[0] > devs[1] > devs[2]


def test_string_cluster_point():
    G = g_vector(0.0, 20)
    for n in (2, 5, 10):
        assert string_correlator(G, n) == pytest.approx(0.0, abs=1e-12)


def test_string_asymptote_and_polarized_limit():
    assert string_correlator(g_vector(2.0, 98), 50) == pytest.approx(0.75**0.25, abs=1e-3)
    assert string_correlator(g_vector(1e4, 10), 6) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("B", [0.0, 2.0, 5.0])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_string_matches_ed(B, n):
    params, sol = ed_solution(B, 12)
    start = (12 - 2 * (n - 1)) // 2 - 1
    ed = string_expectation_ed(params, start, n, sol=sol)
    assert string_correlator(g_vector(B, 8), n) == pytest.approx(ed, abs=2e-2)


def test_string_phase_discrimination():
    for B in (0.2, 0.5, 0.8):
        assert string_correlator(g_vector(B, 198), 100) < 1e-3
    for B in (1.5, 2.0, 5.0):
        assert string_correlator(g_vector(B, 198), 100) > 0.5
