import numpy as np
import pytest

from test_character_table import induced_character, torus_data
from torus_harmonics.character_table import build_character_table
from torus_harmonics.errors import NotAConstituent, SingularParameter, UnsupportedInterpretation
from torus_harmonics.field_tower import ExtElem, build_field_context
from torus_harmonics.twisted_harmonics import (KatzReading, all_sphericals, center_epimorphism_check,
                                               compare_explicit, decompose, degenerate_multiplicities,
                                               functional_equation_residual, gamma_set, katz_candidate,
                                               multiplicity, scan_katz, spherical_by_direct_average,
                                               spherical_explicit, spherical_via_averaging,
                                               table1_predicted, verify_table1)


def inner_product_on_g(table, f):
    """<f, chi_pi>_G for every label, summed over all of G."""
    return table.full.conj() @ f / table.group.order


@pytest.mark.parametrize("q, phis", [(3, range(8)), (5, (0, 1, 6, 7, 12))])
def test_multiplicities_match_induced_character(q, phis):
    table = build_character_table(q)
    for j in phis:
        ind = induced_character(table.group, *torus_data(table.group, j))
        want = inner_product_on_g(table, ind)
        got = np.array([m for _, m in decompose(table, table.ctx.phi(j)).entries])
        assert np.abs(got - want).max() < 1e-9


def test_q3_trivial_twist(t3):
    dec = decompose(t3, t3.ctx.phi(0))
    assert set(dec.constituents()) == {t3.onedim(0), t3.steinberg(1), t3.cuspidal(2)}
    assert dec.degree_sum() == 6
    assert multiplicity(t3, t3.onedim(0), t3.ctx.phi(0)) == 1
    assert multiplicity(t3, t3.onedim(1), t3.ctx.phi(0)) == 0   # eps o det


@pytest.mark.parametrize("q", [3, 5, 7])
def test_multiplicity_one_and_degree_sum(q):
    table = build_character_table(q)
    for j in range(q * q - 1):
        dec = decompose(table, table.ctx.phi(j))
        assert {m for _, m in dec.entries} <= {0, 1}
        assert dec.residual < 1e-6
        assert dec.degree_sum() == q * q - q


def test_table1_examples(t5):
    ctx = t5.ctx
    # principal {alpha, beta} with phi = alpha beta
    assert table1_predicted(ctx, t5.principal(1, 2), ctx.phi(3)) == 1
    # cuspidal with Phi = Lambda: delta(lambda, lambda) - 1 - 0
    lab = t5.cuspidal(1)
    assert table1_predicted(ctx, lab, ctx.phi(1)) == 0
    # Steinberg(alpha), Phi = alpha o N: delta(alpha^2, phi) - 1
    for i in range(4):
        assert table1_predicted(ctx, t5.steinberg(i), ctx.norm_pullback(ctx.alpha(i))) == 0


@pytest.mark.parametrize("q", [3, 5, 7])
def test_table1_nondegenerate_rows(q):
    rep = verify_table1(build_character_table(q))
    for fam in ("principal", "cuspidal"):
        ok, total = rep.counts[fam]
        assert ok == total > 0
    assert sum(t for _, t in rep.counts.values()) == (q * q - 1) ** 2


def test_table1_onedim_mismatch_is_the_norm_condition(t5):
    ctx = t5.ctx
    rep = verify_table1(t5)
    assert rep.counts["onedim"] == [76, 96]
    for j, lab, oracle, _ in rep.mismatches:
        if lab.family == "onedim":
            assert oracle == int(ctx.norm_pullback(ctx.alpha(lab.params[0])) == ctx.phi(j))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_degenerate_multiplicities(q):
    """What the oracle gives: delta(alpha^2, 1) and delta(alpha^2, 1) - 2 delta(alpha, 1)."""
    table = build_character_table(q)
    ind = induced_character(table.group, *torus_data(table.group, 0))
    direct = inner_product_on_g(table, ind).real
    for a, s, d in degenerate_multiplicities(table):
        st, od = direct[table.index(table.steinberg(a))], direct[table.index(table.onedim(a))]
        assert s == pytest.approx(st + od) and d == pytest.approx(st - od)
        sq = int((2 * a) % (q - 1) == 0)
        assert round(s) == sq
        assert round(d) == sq - 2 * int(a == 0)


@pytest.mark.parametrize("q", [3, 5])
def test_sphericals(q, rng):
    table = build_character_table(q)
    G = table.group
    for j in range(q * q - 1):
        phi = table.ctx.phi(j)
        for sph in all_sphericals(table, phi):
            assert sph(G.identity) == pytest.approx(1)
            assert functional_equation_residual(G, phi, sph.full) < 1e-8
            direct = spherical_by_direct_average(table, phi, sph.label)
            assert np.abs(direct / direct[G.identity] - sph.full).max() < 1e-12
            # functional equation on arbitrary pairs, not only representatives
            xs, ys = rng.integers(0, G.order, 200), rng.integers(0, G.order, 200)
            assert functional_equation_residual(G, phi, sph.full, xs, ys) < 1e-8


def test_spherical_examples(t3):
    G = t3.group
    triv = spherical_via_averaging(t3, t3.ctx.phi(0), t3.onedim(0))
    assert np.allclose(triv.full, 1)
    cusp = spherical_via_averaging(t3, t3.ctx.phi(0), t3.cuspidal(2))
    assert len(cusp.values) == 3
    # value at d(-1, 1) equals the direct |K|-average of chi at that point
    g = G.diag(2)
    K = G.torus
    direct = t3.on_group(t3.cuspidal(2))[G.mul(K, g)].mean()   # P_Phi chi(e) = multiplicity = 1
    assert cusp(g) == pytest.approx(direct)
    with pytest.raises(NotAConstituent):
        spherical_via_averaging(t3, t3.ctx.phi(0), t3.onedim(1))


def test_functional_equation_negative_control(t3):
    phi = t3.ctx.phi(0)
    h = sum(s.full for s in all_sphericals(t3, phi)[:2])
    assert functional_equation_residual(t3.group, phi, h) > 0.01


def test_center_epimorphism(t3):
    res = center_epimorphism_check(t3, t3.ctx.phi(0), trials=20)
    assert res["residual"] < 1e-9
    assert res["image_dim"] == res["constituents"] == res["compatible_cosets"] == 3
    bad = center_epimorphism_check(t3, t3.ctx.phi(0), trials=5, central_first=False)
    assert bad["residual"] > 1e-3


@pytest.mark.parametrize("q", [3, 5])
def test_gamma_set_brute_force(q):
    ctx = build_field_context(q)
    units = [ExtElem.from_code(int(c), q) for c in ctx.exp_e]
    for a in range(1, q - 1):
        c = 2 * pow(a + 1, q - 2, q) % q
        want = {(z, w) for z in units for w in units
                if ctx.norm(w) == a * ctx.norm(z) % q and ctx.trace(w) == c * ctx.trace(z) % q}
        assert set(gamma_set(ctx, a)) == want
    got = set(gamma_set(ctx, 1))
    for z in units:
        assert (z, z) in got and (z, ctx.conj(z)) in got
    with pytest.raises(SingularParameter):
        gamma_set(ctx, q - 1)


@pytest.mark.parametrize("q", [5, 7])
def test_gamma_set_frobenius_closed(q):
    ctx = build_field_context(q)
    for a in range(1, q - 1):
        got = set(gamma_set(ctx, a))
        assert all((ctx.conj(z), ctx.conj(w)) in got for z, w in got)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_explicit_formula_at_origin(q):
    table = build_character_table(q)
    ctx = table.ctx
    for j in range(q * q - 1):
        phi = ctx.phi(j)
        for lab in decompose(table, phi).constituents():
            if lab.family == "cuspidal":
                assert spherical_explicit(ctx, phi, ctx.phi(lab.params[0]), 1) == pytest.approx(1)


def test_explicit_comparison_q3(t3):
    rows = compare_explicit(t3)
    assert len(rows) == 6 and all(r["match"] for r in rows)


def test_katz_candidate_properties():
    ctx = build_field_context(7)
    lam = ctx.phi(6)
    for r in KatzReading:
        for a in (2, 3):
            b = pow(a, 5, 7)
            assert katz_candidate(ctx, lam, a, r) == pytest.approx(katz_candidate(ctx, lam, b, r))
    assert len(ctx.circle) == 8
    assert katz_candidate(ctx, lam, 2, 1) == katz_candidate(ctx, lam, 2, KatzReading.OMEGA)
    with pytest.raises(UnsupportedInterpretation):
        katz_candidate(ctx, lam, 2, 9)
    with pytest.raises(SingularParameter):
        katz_candidate(ctx, lam, 1, KatzReading.OMEGA)


def test_scan_katz_is_complete():
    table = build_character_table(5)
    scan = scan_katz(table)
    assert all(t == 4 for _, t in scan.values())
