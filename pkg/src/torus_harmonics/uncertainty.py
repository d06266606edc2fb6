"""Support uncertainty for functions in L1_Phi(G, K).

For nonzero ``f`` in the Hecke algebra,
``|supp f| * sum_{pi in supp F(f)} d_pi >= |G|``.  Supports are counted
after zeroing entries below :data:`~torus_harmonics.hecke_algebra.TOL`,
so margins are exact integers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .character_table import CharacterTable, IrrepLabel
from .errors import DegenerateChannel, ZeroFunction
from .field_tower import CharLabel
from .gl2_geometry import GL2
from .hecke_algebra import (TOL, HeckeFunction, constituents, hecke_basis, hecke_hs_norms_sq,
                            spherical_functions, support_size)

FOURIER_TOL = 1e-12


@dataclass(frozen=True)
class UncertaintyRecord:
    phi: CharLabel
    support_size: int
    fourier_degree_sum: int
    product: int
    bound: int
    margin: int
    extremal: bool


def fourier_support(table: CharacterTable, f: HeckeFunction) -> list[IrrepLabel]:
    """Labels where ``||pi(f)||_HS^2 > FOURIER_TOL``."""
    values = np.asarray(f.values)
    if not np.any(np.abs(values) > TOL):
        raise ZeroFunction("the zero function has empty support")
    norms = hecke_hs_norms_sq(table, values)
    return [lab for lab, v in zip(table.labels, norms) if v > FOURIER_TOL]


def _record(phi, supp, degree, order) -> UncertaintyRecord:
    product = int(supp) * int(degree)
    return UncertaintyRecord(phi, int(supp), int(degree), product, order,
                             product - order, product == order)


def uncertainty_check(table: CharacterTable, f: HeckeFunction) -> UncertaintyRecord:
    labels = fourier_support(table, f)
    return _record(f.phi, support_size(f.values), sum(lab.dim for lab in labels), table.group.order)


def uncertainty_batch(table: CharacterTable, phi: CharLabel, F: np.ndarray) -> list[UncertaintyRecord]:
    """Vectorised :func:`uncertainty_check` over the rows of ``F``."""
    F = np.atleast_2d(F)
    supp = support_size(F)
    if np.any(supp == 0):
        raise ZeroFunction("batch contains the zero function")
    degrees = (hecke_hs_norms_sq(table, F) > FOURIER_TOL) @ table.dims
    return [_record(phi, s, d, table.group.order) for s, d in zip(supp, degrees)]


def random_hecke_batch(group: GL2, phi: CharLabel, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` draws of ``eps * r * eps`` with ``r`` standard complex Gaussian on G."""
    basis = hecke_basis(group, phi)
    if len(basis) == 0:
        raise DegenerateChannel(f"L1_Phi(G, K) is zero for Phi_{phi.index}")
    r = (rng.standard_normal((n, group.order)) + 1j * rng.standard_normal((n, group.order))) / np.sqrt(2)
    out = basis.project(r)
    for attempt in range(100):
        dead = support_size(out) == 0
        if not dead.any():
            return out
        k = int(dead.sum())
        r = (rng.standard_normal((k, group.order)) + 1j * rng.standard_normal((k, group.order))) / np.sqrt(2)
        out[dead] = basis.project(r)
    raise DegenerateChannel("could not draw a nonzero Hecke function")


def random_hecke_function(group: GL2, phi: CharLabel, seed: int) -> HeckeFunction:
    rng = np.random.default_rng(seed)
    return HeckeFunction(random_hecke_batch(group, phi, 1, rng)[0], phi)


def extremal_scan(table: CharacterTable, phi: CharLabel) -> dict:
    """Margins of the coset basis and of the spherical functions for ``phi``.

    Returns ``{"basis": [...], "spherical": [...], "extremal": [...]}`` where
    the first two hold ``(name, record)`` pairs and ``extremal`` lists the
    names with zero margin.
    """
    group = table.group
    basis = hecke_basis(group, phi)
    labels = constituents(table, phi)
    sph = spherical_functions(table, phi, labels)
    basis_recs = [(f"coset{int(c)}", r) for c, r in zip(basis.cosets, uncertainty_batch(table, phi, basis.functions))]
    sph_recs = [(f"spherical:{lab}", r) for lab, r in zip(labels, uncertainty_batch(table, phi, sph))]
    extremal = [name for name, r in basis_recs + sph_recs if r.extremal]
    return {"basis": basis_recs, "spherical": sph_recs, "extremal": extremal}


def proof_chain(table: CharacterTable, phi: CharLabel, F: np.ndarray) -> dict:
    """Worst slack of the intermediate inequalities, rows of ``F`` in L1_Phi(G, K).

    ``sup_norm``: ``||f||_inf - |G|^-1 sum_pi d_pi ||pi(f)||_HS`` (should be <= 0);
    ``support``: ``||f||_2^2 - ||f||_inf^2 |supp f|`` (should be <= 0);
    ``parseval``: ``| ||f||_2^2 - |G|^-1 sum_pi d_pi ||pi(f)||^2 |``.
    """
    F = np.atleast_2d(F)
    n = table.group.order
    hs = hecke_hs_norms_sq(table, F)
    dims = table.dims
    sup = np.abs(F).max(axis=1)
    l2 = (np.abs(F) ** 2).sum(axis=1)
    bound = (np.sqrt(hs) @ dims) / n
    return {
        "sup_norm": float((sup - bound).max()),
        "support": float((l2 - sup ** 2 * support_size(F)).max()),
        "parseval": float(np.abs(l2 - hs @ dims / n).max()),
    }
