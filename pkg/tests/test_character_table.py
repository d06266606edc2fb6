import numpy as np
import pytest

from torus_harmonics.character_table import (IrrepLabel, build_character_table, irrep_labels,
                                             twisting_identity_residual)
from torus_harmonics.field_tower import root_of_unity
from torus_harmonics.gl2_geometry import ClassLabel, gl2


def induced_character(G, in_h, theta):
    """Ind_H^G theta at every element: |H|^-1 sum_x theta(x g x^-1), theta = 0 off H."""
    n = G.order
    x = np.arange(n)
    vals = np.zeros(n, dtype=complex)
    h = in_h.sum()
    for g in range(n):
        c = G.mul(G.mul(x, g), G.inverse)
        vals[g] = theta[c][in_h[c]].sum() / h
    return vals


def borel_data(G, i, j):
    ctx = G.ctx
    e = G.entries
    in_b = e[:, 2] == 0
    theta = np.zeros(G.order, dtype=complex)
    a, d = e[in_b, 0], e[in_b, 3]
    theta[in_b] = root_of_unity(G.q - 1, i * ctx.dlog_f[a] + j * ctx.dlog_f[d])
    return in_b, theta


def torus_data(G, j):
    in_k = np.zeros(G.order, dtype=bool)
    in_k[G.torus] = True
    theta = np.zeros(G.order, dtype=complex)
    theta[G.torus] = root_of_unity(G.q * G.q - 1, j * np.arange(len(G.torus)))
    return in_k, theta


def mirabolic_data(G, j):
    """Z U with the character z (1 b; 0 1) -> Lambda_j(z) exp(2 pi i b / q)."""
    ctx, q = G.ctx, G.q
    e = G.entries
    inside = (e[:, 2] == 0) & (e[:, 0] == e[:, 3])
    theta = np.zeros(G.order, dtype=complex)
    z, zb = e[inside, 0], e[inside, 1]
    b = zb * np.array([pow(int(v), q - 2, q) for v in z]) % q
    theta[inside] = root_of_unity(q - 1, j * ctx.dlog_f[z]) * root_of_unity(q, b)
    return inside, theta


@pytest.mark.parametrize("q", [3, 5])
def test_table_matches_induced_characters(q):
    table = build_character_table(q)
    G = table.group
    det_log = G.ctx.dlog_f[(G.entries[:, 0] * G.entries[:, 3] - G.entries[:, 1] * G.entries[:, 2]) % q]
    for lab in table.labels:
        got = table.on_group(lab)
        if lab.family == "onedim":
            want = root_of_unity(q - 1, lab.params[0] * det_log)
        elif lab.family == "steinberg":
            i = lab.params[0]
            want = induced_character(G, *borel_data(G, i, i)) - root_of_unity(q - 1, i * det_log)
        elif lab.family == "principal":
            want = induced_character(G, *borel_data(G, *lab.params))
        else:
            j = lab.params[0]
            want = induced_character(G, *mirabolic_data(G, j)) - induced_character(G, *torus_data(G, j))
        assert np.abs(got - want).max() < 1e-9, lab


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_orthogonality_and_counts(q):
    table = build_character_table(q)
    rows, cols = table.orthogonality_residuals()
    assert max(rows, cols) < 1e-8
    assert len(table.labels) == len(table.classes) == q * q - 1
    assert (table.dims ** 2).sum() == table.group.order
    assert table.class_sizes.sum() == table.group.order


def test_q3_orthogonality_tight(t3):
    assert max(t3.orthogonality_residuals()) < 1e-12


def test_label_count_formula():
    for q in (3, 5, 7, 11, 13):
        labs = irrep_labels(q)
        fams = [lab.family for lab in labs]
        assert fams.count("onedim") == q - 1
        assert fams.count("steinberg") == q - 1
        assert fams.count("principal") == (q - 1) * (q - 2) // 2
        assert fams.count("cuspidal") == (q * q - q) // 2


def test_value_examples(t5):
    ctx = t5.ctx
    for i in range(4):
        for a in range(1, 5):
            row = t5.row(t5.onedim(i))
            v = row[t5.classes.index(ClassLabel("central", (a,)))]
            assert v == pytest.approx(ctx.char_eval(ctx.alpha(i), a * a % 5))
    e = t5.classes.index(ClassLabel("central", (1,)))
    for lab in t5.labels:
        assert t5.row(lab)[e] == pytest.approx(lab.dim)


def test_restriction_to_torus(t5):
    ctx = t5.ctx
    k = np.arange(ctx.order_e)
    kq = (k * 5) % ctx.order_e
    for lab in t5.labels:
        r = t5.restrict_to_torus(lab)
        assert np.abs(r - r[kq]).max() < 1e-12   # Frobenius invariance
    for i in range(4):
        r = t5.restrict_to_torus(t5.onedim(i))
        want = ctx.char_values_f(ctx.alpha(i), ctx.code_norm(ctx.exp_e))
        assert np.abs(r - want).max() < 1e-12


def test_q3_cuspidal_at_generator(t3):
    assert t3.restrict_to_torus(t3.cuspidal(2))[1] == pytest.approx(0)
    # standard elliptic value -(Lambda(z) + Lambda(z^q)) at z = gE
    lam = t3.ctx.phi(2)
    z = t3.ctx.gE
    assert t3.restrict_to_torus(t3.cuspidal(2))[1] == pytest.approx(
        -(t3.ctx.char_eval(lam, z) + t3.ctx.char_eval(lam, t3.ctx.conj(z))))


def test_label_constructors(t5):
    assert t5.cuspidal(5) == t5.cuspidal(25) == IrrepLabel("cuspidal", (1,), 4)
    assert t5.principal(3, 1) == t5.principal(1, 3)
    with pytest.raises(ValueError):
        t5.principal(2, 2)
    with pytest.raises(ValueError):
        t5.cuspidal(6)
    assert t5.principal_character(2, 2) == {t5.steinberg(2): 1, t5.onedim(2): 1}
    assert t5.cuspidal_character(12) == {t5.steinberg(2): 1, t5.onedim(2): -1}


def test_dual_is_complex_conjugate(t5):
    for lab in t5.labels:
        assert np.abs(t5.row(t5.dual(lab)) - t5.row(lab).conj()).max() < 1e-12


@pytest.mark.parametrize("q", [3, 5])
def test_twisting_identities(q):
    table = build_character_table(q)
    assert twisting_identity_residual(table, table.ctx.phi(0)) < 1e-12
    for j in range(q * q - 1):
        assert twisting_identity_residual(table, table.ctx.phi(j)) < 1e-9


def test_table_is_cached_and_read_only(t3):
    assert build_character_table(3) is t3
    with pytest.raises(ValueError):
        t3.values[0, 0] = 0
