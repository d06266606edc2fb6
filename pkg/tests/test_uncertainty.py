import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_harmonics.character_table import build_character_table
from torus_harmonics.errors import ZeroFunction
from torus_harmonics.hecke_algebra import (HeckeFunction, bi_equivariance_residual, epsilon_idempotent,
                                           hecke_basis, isotypic_project)
from torus_harmonics.twisted_harmonics import all_sphericals, decompose
from torus_harmonics.uncertainty import (extremal_scan, fourier_support, proof_chain, random_hecke_batch,
                                         random_hecke_function, uncertainty_batch, uncertainty_check)


def test_epsilon_support_is_whole_dual(t3):
    for j in range(8):
        phi = t3.ctx.phi(j)
        eps = epsilon_idempotent(t3.group, phi)
        assert set(fourier_support(t3, eps)) == set(decompose(t3, phi).constituents())


def test_spherical_supports(t5):
    phi = t5.ctx.phi(3)
    sph = all_sphericals(t5, phi)
    for s in sph:
        assert fourier_support(t5, HeckeFunction(s.full, phi)) == [s.label]
    pair = HeckeFunction(sph[0].full + sph[1].full, phi)
    assert set(fourier_support(t5, pair)) == {sph[0].label, sph[1].label}


def test_zero_function_rejected(t3):
    with pytest.raises(ZeroFunction):
        fourier_support(t3, HeckeFunction(np.zeros(48), t3.ctx.phi(0)))
    with pytest.raises(ZeroFunction):
        uncertainty_batch(t3, t3.ctx.phi(0), np.zeros((2, 48)))


@pytest.mark.parametrize("q", [3, 5])
def test_epsilon_is_extremal(q):
    table = build_character_table(q)
    G = table.group
    for j in range(q * q - 1):
        rec = uncertainty_check(table, epsilon_idempotent(G, table.ctx.phi(j)))
        assert rec.support_size == q * q - 1
        assert rec.fourier_degree_sum == q * q - q
        assert rec.product == G.order and rec.margin == 0 and rec.extremal


def test_trivial_spherical_is_extremal(t3):
    phi = t3.ctx.phi(0)
    h = [s for s in all_sphericals(t3, phi) if s.label == t3.onedim(0)][0]
    rec = uncertainty_check(t3, HeckeFunction(h.full, phi))
    assert (rec.support_size, rec.fourier_degree_sum, rec.extremal) == (48, 1, True)


def test_extremal_scan_q3(t3):
    for j in range(8):
        scan = extremal_scan(t3, t3.ctx.phi(j))
        assert "coset0" in scan["extremal"]
        assert all(r.margin >= 0 for _, r in scan["basis"] + scan["spherical"])
    scan = extremal_scan(t3, t3.ctx.phi(0))
    assert "spherical:onedim(0)" in scan["extremal"]
    assert any(r.margin > 0 for _, r in scan["basis"])


def test_random_hecke_function(t3):
    G = t3.group
    phi = t3.ctx.phi(1)
    f = random_hecke_function(G, phi, 42)
    g = random_hecke_function(G, phi, 42)
    assert np.array_equal(f.values, g.values)
    assert np.abs(f.values).max() > 0
    assert bi_equivariance_residual(G, phi, f.values) < 1e-8


@pytest.mark.parametrize("q", [3, 5])
def test_random_margins_and_proof_chain(q):
    table = build_character_table(q)
    rng = np.random.default_rng(q)
    for j in range(q * q - 1):
        phi = table.ctx.phi(j)
        F = random_hecke_batch(table.group, phi, 200, rng)
        assert min(r.margin for r in uncertainty_batch(table, phi, F)) >= 0
        chain = proof_chain(table, phi, F)
        assert chain["sup_norm"] <= 1e-8 and chain["support"] <= 1e-8 and chain["parseval"] < 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 23), st.data())
def test_sparse_hecke_functions(seed, j, data):
    """Random sparse combinations of the coset basis: margin is never negative."""
    table = build_character_table(5)
    phi = table.ctx.phi(j)
    B = hecke_basis(table.group, phi)
    keep = data.draw(st.lists(st.booleans(), min_size=len(B), max_size=len(B)).filter(any))
    r = np.random.default_rng(seed)
    c = (r.standard_normal(len(B)) + 1j * r.standard_normal(len(B))) * np.array(keep)
    rec = uncertainty_check(table, HeckeFunction(B.expand(c), phi))
    assert rec.margin >= 0


def test_zeroing_a_component_never_grows_degree_sum(t5):
    phi = t5.ctx.phi(0)
    f = random_hecke_function(t5.group, phi, 7)
    before = uncertainty_check(t5, f).fourier_degree_sum
    for lab in decompose(t5, phi).constituents():
        g = HeckeFunction(f.values - isotypic_project(t5, lab, f.values), phi)
        assert uncertainty_check(t5, g).fourier_degree_sum <= before
