import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdirac import fourier as F
from ncdirac.fock import build_fock, s_q
from ncdirac.linalg import adjoint, rel_residual

from conftest import Q_GRID


def delta(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def crand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# -- groups -----------------------------------------------------------------


def test_group_validation():
    with pytest.raises(ValueError):
        F.make_group([[0, 1], [0, 1]])
    # Latin square without associativity (a loop of order 5)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(ValueError):
        F.make_group(loop)


def test_abelian_group_labels():
    g, elems = F.abelian_group((2, 3))
    assert g.order == 6
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            assert elems[g.mul(i, j)] == ((a[0] + b[0]) % 2, (a[1] + b[1]) % 3)


def test_left_regular_is_homomorphism():
    g, _ = F.abelian_group((2, 2))
    for s in range(4):
        for t in range(4):
            np.testing.assert_array_equal(g.left_regular(s) @ g.left_regular(t), g.left_regular(g.mul(s, t)))


# -- cocycle constructions ----------------------------------------------------


def test_regular_cocycle_examples():
    z2 = F.build_cocycle_regular(F.cyclic_group(2), delta(2, 0))
    np.testing.assert_allclose(z2.psi, [0, 2])
    z4 = F.build_cocycle_regular(F.cyclic_group(4), delta(4, 0))
    np.testing.assert_allclose(z4.psi, [0, 2, 2, 2])
    with pytest.raises(ValueError, match="fixed"):
        F.build_cocycle_regular(F.cyclic_group(3), np.zeros(3))
    with pytest.raises(ValueError):
        F.build_cocycle_regular(F.cyclic_group(3), np.ones(2))


def test_donut_examples():
    sys = F.build_cocycle_donut(8, 1, 1)
    assert sys.psi[1] == pytest.approx(4 - 2 * np.sqrt(2), abs=1e-14)
    np.testing.assert_array_equal(sys.b[0], 0)
    rep = sys.check(1e-12)
    assert rep.passed
    with pytest.raises(ValueError):
        F.build_cocycle_donut(1, 1, 1)


def test_levy_examples():
    n = 7
    sys = F.build_cocycle_levy((n,), F.cyclic_cosine_weights(n))
    k = np.arange(n)
    np.testing.assert_allclose(sys.psi, n**2 / (2 * np.pi**2) * (1 - np.cos(2 * np.pi * k / n)), atol=1e-12)
    zero = F.build_cocycle_levy((4,), np.zeros(4))
    np.testing.assert_array_equal(zero.psi, 0)
    np.testing.assert_array_equal(zero.b, 0)
    np.testing.assert_allclose(F.build_cocycle_levy((2,), [0.0, 1.0]).psi, [0, 2])
    with pytest.raises(ValueError, match="symmetric"):
        F.build_cocycle_levy((4,), [0.0, 1.0, 0.0, 2.0])
    with pytest.raises(ValueError):
        F.build_cocycle_levy((3,), [1.0, 1.0, 1.0])


@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_levy_random_measures(n, seed):
    rng = np.random.default_rng(seed)
    w = rng.random(n)
    w = w + w[(-np.arange(n)) % n]
    w[0] = 0.0
    sys = F.build_cocycle_levy((n,), w)
    np.testing.assert_allclose(sys.psi, F.levy_length((n,), w), atol=1e-12)
    assert sys.check(1e-12).passed


def test_levy_product_group():
    w = np.zeros((2, 3))
    w[1, 0] = 1.0
    w[0, 1] = w[0, 2] = 0.5
    sys = F.build_cocycle_levy((2, 3), w)
    np.testing.assert_allclose(sys.psi, F.levy_length((2, 3), w), atol=1e-12)


@pytest.mark.parametrize("n", range(2, 13))
def test_word_length_cnd(n):
    psi = [min(k, n - k) for k in range(n)]
    assert F.cnd_check(F.cyclic_group(n), psi, 1e-9).passed
    sys = F.word_length_cocycle(n)
    np.testing.assert_allclose(sys.psi, psi, atol=1e-9)


def test_cnd_detects_violation():
    # psi = 1 - delta on Z_4 is fine; a negative bump at 2 is not
    assert not F.cnd_check(F.cyclic_group(4), [0, 1, 5, 1], 1e-9).passed


@pytest.mark.parametrize("n", [2, 3, 8, 12])
def test_levy_check(n):
    assert F.levy_check(n).passed


def test_cocycle_json_round_trip(tmp_path):
    sys = F.build_cocycle_donut(6, 1, 2)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(F.cocycle_to_json(sys)))
    back = F.parse_cocycle(str(path))
    np.testing.assert_allclose(back.psi, sys.psi)
    bad = F.cocycle_to_json(sys)
    bad["b"][1][0] += 0.3
    with pytest.raises(ValueError):
        F.cocycle_from_json(bad)


def test_parse_cocycle():
    assert F.parse_cocycle("levy:Z3:1,1").group.order == 3
    assert F.parse_cocycle("regular:3").h_dim == 3
    with pytest.raises(ValueError):
        F.parse_cocycle("levy:Z4:1")
    with pytest.raises(ValueError):
        F.parse_cocycle("free:2")


# -- group algebra --------------------------------------------------------------


def test_semigroup_examples(rng):
    sys = F.word_length_cocycle(5)
    x = crand(rng, 5)
    np.testing.assert_allclose(F.apply_group_semigroup(sys, 0.0, x), x)
    e = F.unit(sys.group, 0)
    for t in (0.1, 3.0):
        np.testing.assert_allclose(F.apply_group_semigroup(sys, t, e), e)
    assert F.herz_schur_check(sys).passed
    with pytest.raises(ValueError):
        F.apply_group_semigroup(sys, -1.0, x)


def test_gamma_examples():
    sys = F.word_length_cocycle(4)
    g = sys.group
    np.testing.assert_allclose(F.group_carre_du_champ(sys, F.unit(g, 1), F.unit(g, 1)), F.unit(g, 0), atol=1e-12)
    np.testing.assert_allclose(F.group_carre_du_champ(sys, F.unit(g, 0), F.unit(g, 0)), 0, atol=1e-12)


@pytest.mark.parametrize("spec", ["Zn:5", "donut:8:1:1", "regular:4", "levy:Z5:1,2,2,1"])
def test_gamma_on_group_units(spec):
    sys = F.parse_cocycle(spec)
    g, psi = sys.group, sys.psi
    for s in range(g.order):
        si = g.inverse[s]
        for t in range(g.order):
            r = g.mul(si, t)
            want = 0.5 * (psi[si] + psi[t] - psi[r]) * F.unit(g, r)
            np.testing.assert_allclose(F.group_carre_du_champ(sys, F.unit(g, s), F.unit(g, t)), want, atol=1e-12)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("spec", ["Zn:4", "donut:8:1:1"])
def test_gamma_three_way(spec, q):
    sys = F.parse_cocycle(spec)
    assert F.group_gamma_check(sys, build_fock(q, sys.h_dim, 2), samples=2).passed


# -- crossed product ----------------------------------------------------------


@pytest.fixture(params=[0.0, 0.5, -1.0])
def crossed(request):
    sys = F.parse_cocycle("donut:4:1:1")
    return F.CrossedProduct(sys, build_fock(request.param, sys.h_dim, 2))


def _fock_elem(cp, rng):
    return rng.standard_normal() * cp.fock.identity() + s_q(cp.fock, rng.standard_normal(cp.sys.h_dim))


def test_embed_identity(crossed):
    np.testing.assert_allclose(crossed.embed(crossed.fock.identity(), crossed.group.identity), np.eye(crossed.dim), atol=1e-12)


def test_product_and_adjoint_rules(crossed, rng):
    g = crossed.group
    for s in range(g.order):
        for t in range(g.order):
            x, y = _fock_elem(crossed, rng), _fock_elem(crossed, rng)
            lhs = crossed.embed(x, s) @ crossed.embed(y, t)
            rhs = crossed.embed(x @ crossed.action(s, y), g.mul(s, t))
            assert rel_residual(lhs, rhs) < 1e-10
        x = _fock_elem(crossed, rng)
        si = g.inverse[s]
        lhs = adjoint(crossed.embed(x, s))
        rhs = crossed.embed(crossed.action(si, adjoint(x)), si)
        assert rel_residual(lhs, rhs) < 1e-10


def test_commutation_relation(crossed, rng):
    for s in range(crossed.group.order):
        x = _fock_elem(crossed, rng)
        lam = crossed.lam(s)
        lhs = lam @ crossed.pi(x) @ adjoint(lam)
        assert rel_residual(lhs, crossed.pi(crossed.action(s, x))) < 1e-9


def test_trace_examples(crossed, rng):
    assert crossed.trace(np.eye(crossed.dim)) == pytest.approx(1.0)
    for s in range(crossed.group.order):
        assert abs(crossed.trace(crossed.embed(s_q(crossed.fock, rng.standard_normal(crossed.sys.h_dim)), s))) < 1e-12
        z = crossed.embed(_fock_elem(crossed, rng), s)
        assert crossed.trace(z @ adjoint(z)).real >= -1e-12


def _random_crossed(cp, rng):
    z = np.zeros((cp.dim, cp.dim), dtype=complex)
    for s in range(cp.group.order):
        z += complex(*rng.standard_normal(2)) * cp.embed(_fock_elem(cp, rng), s)
    return z


def test_trace_is_tracial(crossed, rng):
    for _ in range(5):
        u, v = _random_crossed(crossed, rng), _random_crossed(crossed, rng)
        assert abs(crossed.trace(u @ v) - crossed.trace(v @ u)) < 1e-9


def test_embed_dimension_mismatch():
    sys = F.parse_cocycle("Zn:3")
    with pytest.raises(ValueError):
        F.CrossedProduct(sys, build_fock(0.0, sys.h_dim + 1, 2))


# -- gradient -------------------------------------------------------------------


@pytest.mark.parametrize("q", Q_GRID)
def test_gradient_examples_and_leibniz(q):
    sys = F.parse_cocycle("Zn:4")
    fock = build_fock(q, sys.h_dim, 2)
    cp = F.CrossedProduct(sys, fock)
    g = sys.group
    np.testing.assert_allclose(F.group_gradient(sys, fock, F.unit(g, g.identity), cp), 0)
    rng = np.random.default_rng(3)
    x, y = crand(rng, 4), crand(rng, 4)
    lhs = F.group_gradient(sys, fock, F.convolve(g, x, y), cp)
    rhs = cp.group_element(x) @ F.group_gradient(sys, fock, y, cp) + F.group_gradient(sys, fock, x, cp) @ cp.group_element(y)
    assert rel_residual(lhs, rhs) < 1e-10


@pytest.mark.parametrize("q", Q_GRID)
def test_group_trace_identity(q, rng):
    sys = F.parse_cocycle("donut:6:1:2")
    fock = build_fock(q, sys.h_dim, 2)
    cp = F.CrossedProduct(sys, fock)
    g = sys.group
    for _ in range(3):
        x, y = crand(rng, 6), crand(rng, 6)
        dx, dy = F.group_gradient(sys, fock, x, cp), F.group_gradient(sys, fock, y, cp)
        lhs = cp.trace(dx @ adjoint(dy))
        ax, ay = np.sqrt(sys.psi) * x, np.sqrt(sys.psi) * y
        rhs = F.group_trace(g, F.convolve(g, ax, F.group_adjoint(g, ay)))
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))
        norm_dx = np.sqrt(cp.trace(adjoint(dx) @ dx).real)
        assert norm_dx == pytest.approx(np.linalg.norm(ax), rel=1e-10)


def test_gradient_system_adjointness():
    sys = F.parse_cocycle("regular:3")
    gs = F.gradient_system(sys, build_fock(0.3, sys.h_dim, 2))
    assert gs.adjointness_residual() < 1e-9


# -- gaps -----------------------------------------------------------------------


def test_gap_examples():
    donut = F.build_cocycle_donut(8, 1, 1)
    assert F.gap_psi(donut) == pytest.approx(4 * (1 - 1 / np.sqrt(2)), abs=1e-12)
    g_alpha, g_psi, rep = F.gap_comparison(donut)
    assert rep.passed and g_alpha < g_psi
    assert g_alpha <= 8 * (1 - 1 / np.sqrt(2)) ** 2 + 1e-12
    assert F.gap_psi(F.build_cocycle_regular(F.cyclic_group(2), delta(2, 0))) == pytest.approx(2.0)
    trivial = F.GroupCocycleSystem(F.cyclic_group(1), np.ones((1, 1, 1)), np.zeros((1, 1)), "trivial")
    assert F.gap_psi(trivial) == np.inf
    a, p, rep = F.gap_comparison(trivial)
    assert a == p == np.inf and rep.passed


@pytest.mark.parametrize("spec", ["Zn:6", "regular:5", "levy:Z5:1,2,2,1", "donut:12:1:5"])
def test_gap_inequality(spec):
    assert F.gap_comparison(F.parse_cocycle(spec))[2].passed
