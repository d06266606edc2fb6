"""Group algebra of GL(2, q), the idempotent eps^Phi_K and the Hecke algebra L1_Phi(G, K).

Functions on G are dense complex numpy arrays over the canonical enumeration
of :class:`~torus_harmonics.gl2_geometry.GL2`; leading axes are batch axes.

Conventions (fixed here, used everywhere)
-----------------------------------------
* Convolution uses counting measure: ``(f * h)(x) = sum_y f(y) h(y^-1 x)``.
  Then ``eps^Phi_K = |K|^-1 Phi`` on K is idempotent.
* Fourier transform: ``pi(f) = sum_g f(g) pi(g^-1)``, so that
  ``f(x) = |G|^-1 sum_pi d_pi tr(pi(f) pi(x))`` and the Fourier support of any
  ``f`` in L1_Phi(G, K) lies in the constituents of Ind_K^G Phi.
* Isotypic projection onto ``pi`` is convolution with ``e_pi = (d_pi/|G|) chi_pi``.
* Parseval: ``sum |f|^2 = |G|^-1 sum_pi d_pi ||pi(f)||_HS^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .character_table import CharacterTable, IrrepLabel
from .errors import ContextMismatch, NegativeResidual, NotBiEquivariant
from .field_tower import CharLabel, root_of_unity
from .gl2_geometry import GL2, gl2

TOL = 1e-8


@dataclass(eq=False)
class HeckeFunction:
    """A function on G together with the torus character it is twisted by."""
    values: np.ndarray
    phi: CharLabel

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)


def _group_for(f) -> GL2:
    n = np.shape(f)[-1]
    for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if (q * q - 1) * (q * q - q) == n:
            return gl2(q)
    raise ContextMismatch(f"no GL(2, q) of order {n}")


def torus_character(group: GL2, phi: CharLabel) -> np.ndarray:
    """``Phi(m_{gE^k})`` for k in generator order."""
    group.ctx._check_e(phi)
    return root_of_unity(phi.modulus, phi.index * np.arange(len(group.torus)))


def left_torus_table(group: GL2) -> np.ndarray:
    """``L[k, x] = index(m_k g_x)``."""
    if "left_torus" not in group._cache:
        group._cache["left_torus"] = group.mul(group.torus[:, None], np.arange(group.order)[None, :])
    return group._cache["left_torus"]


def right_torus_table(group: GL2) -> np.ndarray:
    """``R[k, x] = index(g_x m_k)``."""
    if "right_torus" not in group._cache:
        group._cache["right_torus"] = group.mul(np.arange(group.order)[None, :], group.torus[:, None])
    return group._cache["right_torus"]


# ---- convolution ---------------------------------------------------------------

def point_mass(group: GL2, i: int) -> np.ndarray:
    out = np.zeros(group.order, dtype=complex)
    out[i] = 1.0
    return out


def convolve(f: np.ndarray, h: np.ndarray, group: GL2 | None = None, chunk: int = 1 << 22) -> np.ndarray:
    """``(f * h)(x) = sum_y f(y) h(y^-1 x)``.  ``f`` may carry leading batch axes."""
    f = np.asarray(f, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if f.shape[-1] != h.shape[-1]:
        raise ContextMismatch("functions live on groups of different order")
    group = group or _group_for(h)
    if h.ndim != 1:
        raise ValueError("second argument must be a single function")
    n = group.order
    table = group.quotient_table()
    if table is not None:
        return f @ h[table]
    support = np.flatnonzero(np.abs(f.reshape(-1, n)).max(axis=0) > 0)
    out = np.zeros(f.shape, dtype=complex)
    step = max(1, chunk // n)
    for s in range(0, len(support), step):
        ys = support[s:s + step]
        out += f[..., ys] @ h[group.quotient_rows(ys)]
    return out


def involution(f: np.ndarray, group: GL2 | None = None) -> np.ndarray:
    """``f~(g) = conj(f(g^-1))``."""
    group = group or _group_for(f)
    return np.conj(np.asarray(f)[..., group.inverse])


# ---- eps^Phi_K and P_Phi ---------------------------------------------------------

def epsilon_idempotent(group: GL2, phi: CharLabel) -> HeckeFunction:
    """``|K|^-1 Phi`` on K, zero elsewhere."""
    out = np.zeros(group.order, dtype=complex)
    out[group.torus] = torus_character(group, phi) / len(group.torus)
    return HeckeFunction(out, phi)


def project_P_phi(group: GL2, phi: CharLabel, f: np.ndarray) -> np.ndarray:
    """``(P_Phi f)(g) = |K|^-1 sum_k Phi^-1(k) f(k g)``, i.e. ``eps^Phi_K * f``."""
    w = np.conj(torus_character(group, phi))
    f = np.asarray(f, dtype=complex)
    return np.tensordot(f[..., left_torus_table(group)], w, axes=([-2], [0])) / len(w)


def project_right(group: GL2, phi: CharLabel, f: np.ndarray) -> np.ndarray:
    """``f * eps^Phi_K``, i.e. ``|K|^-1 sum_k Phi^-1(k) f(g k)``."""
    w = np.conj(torus_character(group, phi))
    f = np.asarray(f, dtype=complex)
    return np.tensordot(f[..., right_torus_table(group)], w, axes=([-2], [0])) / len(w)


def project_two_sided(group: GL2, phi: CharLabel, f: np.ndarray) -> np.ndarray:
    return project_right(group, phi, project_P_phi(group, phi, f))


def bi_equivariance_residual(group: GL2, phi: CharLabel, f: np.ndarray) -> float:
    """``max |f(k g k') - Phi(k) f(g) Phi(k')|`` over all k, k', g."""
    f = np.asarray(f, dtype=complex)
    chi = torus_character(group, phi)
    left = f[left_torus_table(group)] - chi[:, None] * f[None, :]
    right = f[right_torus_table(group)] - chi[:, None] * f[None, :]
    return float(max(np.abs(left).max(), np.abs(right).max()))


# ---- coset basis of L1_Phi(G, K) ----------------------------------------------------

@dataclass(eq=False)
class HeckeBasis:
    """Orthogonal basis of L1_Phi(G, K) indexed by Phi-compatible double cosets.

    ``functions[r]`` is supported on coset ``cosets[r]``, equals 1 at that
    coset's representative and has unit modulus on its support.
    """
    group: GL2
    phi: CharLabel
    cosets: np.ndarray            # double-coset ids of the compatible cosets
    representatives: np.ndarray   # element indices
    sizes: np.ndarray
    functions: np.ndarray = field(repr=False)  # (len(cosets), |G|)

    def __len__(self):
        return len(self.cosets)

    def coefficients(self, f: np.ndarray) -> np.ndarray:
        """Coordinates of the orthogonal projection of ``f`` onto L1_Phi(G, K)."""
        return np.asarray(f, dtype=complex) @ self.functions.conj().T / self.sizes

    def expand(self, c: np.ndarray) -> np.ndarray:
        return np.asarray(c) @ self.functions

    def project(self, f: np.ndarray) -> np.ndarray:
        """Two-sided projection ``eps * f * eps`` computed in coset coordinates."""
        return self.expand(self.coefficients(f))


@lru_cache(maxsize=None)
def _coset_pairs(q: int, cid: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    group = gl2(q)
    K = group.torus
    x = int(group.double_cosets.representatives[cid])
    right = group.mul(x, K)                       # x k'
    g = group.mul(K[:, None], right[None, :])     # k x k'
    kk = np.broadcast_to(np.arange(len(K))[:, None], g.shape)
    kr = np.broadcast_to(np.arange(len(K))[None, :], g.shape)
    return g.ravel(), kk.ravel(), kr.ravel()


def hecke_basis(group: GL2, phi: CharLabel, tol: float = TOL) -> HeckeBasis:
    key = ("hecke_basis", phi.index)
    if key in group._cache:
        return group._cache[key]
    chi = torus_character(group, phi)
    dc = group.double_cosets
    keep, funcs = [], []
    for cid in range(len(dc)):
        g, kk, kr = _coset_pairs(group.q, cid)
        vals = chi[kk] * chi[kr]
        total = np.zeros(group.order, dtype=complex)
        np.add.at(total, g, vals)
        count = np.bincount(g, minlength=group.order)
        on = count > 0
        if np.all(np.abs(np.abs(total[on]) - count[on]) < tol * count[on]):
            func = np.zeros(group.order, dtype=complex)
            func[on] = total[on] / count[on]
            keep.append(cid)
            funcs.append(func)
    keep = np.array(keep, dtype=np.int64)
    basis = HeckeBasis(group, phi, keep, dc.representatives[keep], dc.sizes[keep],
                       np.array(funcs).reshape(len(keep), group.order))
    group._cache[key] = basis
    return basis


# ---- isotypic decomposition and Fourier side --------------------------------------------

def frobenius_sums(table: CharacterTable, phi: CharLabel) -> np.ndarray:
    """``|K|^-1 sum_k conj(Phi(k)) chi_pi(k)`` for every label (complex, unrounded)."""
    w = np.conj(torus_character(table.group, phi))
    return table.torus_values @ w / len(w)


def constituents(table: CharacterTable, phi: CharLabel) -> list[IrrepLabel]:
    """Labels occurring in Ind_K^G Phi."""
    m = frobenius_sums(table, phi)
    return [lab for lab, v in zip(table.labels, m) if abs(v) > 0.5]


def isotypic_idempotent(table: CharacterTable, label: IrrepLabel) -> np.ndarray:
    return label.dim / table.group.order * table.on_group(label)


def isotypic_project(table: CharacterTable, label: IrrepLabel, f: np.ndarray) -> np.ndarray:
    """``e_pi * f`` (equal to ``f * e_pi``; e_pi is central)."""
    return convolve(f, isotypic_idempotent(table, label), table.group)


def fourier_coefficients(table: CharacterTable, f: np.ndarray) -> np.ndarray:
    """``tr pi(f) = sum_g f(g) conj(chi_pi(g))`` for all labels (last axis)."""
    return np.asarray(f, dtype=complex) @ table.full.conj().T


def fourier_hs_norm_sq(table: CharacterTable, label: IrrepLabel, f: np.ndarray,
                       tol: float = TOL) -> float:
    """``||pi(f)||_HS^2 = sum_g (f * f~)(g) conj(chi_pi(g))``, from characters only."""
    group = table.group
    f = np.asarray(f, dtype=complex)
    auto = convolve(f, involution(f, group), group)
    val = complex(auto @ np.conj(table.on_group(label)))
    if val.real < -tol * max(1.0, float(np.vdot(f, f).real)):
        raise NegativeResidual(f"HS norm came out negative: {val}")
    return max(val.real, 0.0)


def hecke_hs_norms_sq(table: CharacterTable, f: np.ndarray) -> np.ndarray:
    """HS norms for Hecke functions: ``pi(f)`` has rank <= 1, so ``||pi(f)||^2 = |tr pi(f)|^2``."""
    return np.abs(fourier_coefficients(table, f)) ** 2


def spherical_functions(table: CharacterTable, phi: CharLabel, labels=None) -> np.ndarray:
    """``P_Phi(chi_pi)`` for the given labels (default: all), shape ``(len, |G|)``."""
    group = table.group
    labels = table.labels if labels is None else labels
    rows = np.array([table.index(lab) for lab in labels], dtype=np.int64)
    basis = hecke_basis(group, phi)
    w = np.conj(torus_character(group, phi))
    # values at coset representatives, then bi-equivariant extension
    at_reps = group.mul(group.torus[:, None], basis.representatives[None, :])  # (K, r)
    chi = table.full[rows]
    coeff = np.tensordot(chi[:, at_reps], w, axes=([1], [0])) / len(w)
    return coeff @ basis.functions


def plancherel_reconstruct(table: CharacterTable, f: HeckeFunction, tol: float = TOL,
                           check: bool = True) -> np.ndarray:
    """Sum of the isotypic components of ``f`` over the constituents of Ind Phi only.

    For ``f`` in L1_Phi(G, K) and a constituent ``pi`` the component
    ``e_pi * f`` is the multiple ``(d_pi/|G|) tr pi(f)`` of the spherical
    function ``P_Phi(chi_pi)``; this is used instead of a full convolution.
    """
    group = table.group
    values = np.asarray(f.values, dtype=complex)
    if check:
        scale = max(1.0, float(np.abs(values).max()))
        if bi_equivariance_residual(group, f.phi, values) > tol * scale:
            raise NotBiEquivariant("function is not (K, Phi)-bi-equivariant")
    labels = constituents(table, f.phi)
    rows = [table.index(lab) for lab in labels]
    coef = fourier_coefficients(table, values)[..., rows]
    dims = np.array([lab.dim for lab in labels]) / group.order
    return (coef * dims) @ spherical_functions(table, f.phi, labels)


def plancherel_reconstruct_by_convolution(table: CharacterTable, f: HeckeFunction) -> np.ndarray:
    """Same sum as :func:`plancherel_reconstruct`, via explicit convolutions with ``e_pi``."""
    out = np.zeros(np.shape(f.values), dtype=complex)
    for lab in constituents(table, f.phi):
        out += isotypic_project(table, lab, f.values)
    return out


def support_size(f: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Number of entries with modulus above ``tol`` (per batch row)."""
    return (np.abs(np.asarray(f)) > tol).sum(axis=-1)


def clean(f: np.ndarray, tol: float = TOL) -> np.ndarray:
    f = np.array(f, dtype=complex)
    f[np.abs(f) <= tol] = 0
    return f
