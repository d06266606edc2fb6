"""Decomposition of Ind_K^G Phi and its twisted spherical functions.

The ground truth is always computed directly (Frobenius reciprocity on K,
averaging of characters); the closed formulas for multiplicities and
spherical values are evaluated verbatim and compared against it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .character_table import CharacterTable, IrrepLabel
from .errors import (NonIntegralMultiplicity, NotAConstituent, SingularParameter,
                     UnsupportedInterpretation, ValidationFailed)
from .field_tower import CharLabel, ExtElem, FieldCtx, root_of_unity
from .gl2_geometry import GL2
from .hecke_algebra import (convolve, frobenius_sums, hecke_basis, project_P_phi,
                            spherical_functions, torus_character)

ROUNDING_TOL = 1e-6
SYMMETRY_TOL = 1e-9


# ---- multiplicities -------------------------------------------------------------

@dataclass
class Decomposition:
    phi: CharLabel
    entries: list  # (IrrepLabel, multiplicity)
    residual: float

    def constituents(self) -> list[IrrepLabel]:
        return [lab for lab, m in self.entries if m]

    def degree_sum(self) -> int:
        return sum(lab.dim * m for lab, m in self.entries)


def symmetrized_sums(table: CharacterTable, phi: CharLabel) -> np.ndarray:
    """``(1/2) |K|^-1 sum_k (conj Phi + conj Phi^q)(k) chi(k)`` for every label."""
    twisted = table.ctx.frobenius_twist(phi)
    return 0.5 * (frobenius_sums(table, phi) + frobenius_sums(table, twisted))


def decompose(table: CharacterTable, phi: CharLabel) -> Decomposition:
    """Multiplicity of every irreducible in Ind_K^G Phi.

    Raises
    ------
    ValidationFailed
        if the plain and Frobenius-symmetrized sums disagree.
    NonIntegralMultiplicity
        if a sum is not within ``ROUNDING_TOL`` of an integer.
    """
    raw = frobenius_sums(table, phi)
    sym = symmetrized_sums(table, phi)
    if np.abs(raw - sym).max() > SYMMETRY_TOL:
        raise ValidationFailed("Frobenius symmetrization changed a multiplicity")
    rounded = np.rint(raw.real).astype(int)
    residual = float(np.abs(raw - rounded).max())
    if residual >= ROUNDING_TOL:
        raise NonIntegralMultiplicity(f"residual {residual:.3g} for Phi={phi.index}")
    return Decomposition(phi, list(zip(table.labels, rounded.tolist())), residual)


def multiplicity(table: CharacterTable, label: IrrepLabel, phi: CharLabel) -> int:
    return dict(decompose(table, phi).entries)[label]


def table1_predicted(ctx: FieldCtx, label: IrrepLabel, phi: CharLabel) -> int:
    """The published closed-form multiplicity table, evaluated literally."""
    q = ctx.q
    mf, me = q - 1, q * q - 1
    j = phi.index
    f = j % mf

    def d(cond):
        return int(bool(cond))

    if label.family == "onedim":
        (i,) = label.params
        return d((2 * i - f) % mf == 0)
    if label.family == "steinberg":
        (i,) = label.params
        return d((2 * i - f) % mf == 0) - d((i * (q + 1) - j) % me == 0)
    if label.family == "principal":
        i, k = label.params
        return d((i + k - f) % mf == 0)
    (lam,) = label.params
    return d((lam - f) % mf == 0) - d((lam - j) % me == 0) - d((lam * q - j) % me == 0)


@dataclass
class Table1Report:
    q: int
    counts: dict = field(default_factory=dict)       # family -> [matches, total]
    mismatches: list = field(default_factory=list)   # (phi index, label, oracle, predicted)

    def match_rate(self, family: str) -> float:
        ok, total = self.counts.get(family, (0, 0))
        return ok / total if total else float("nan")


def verify_table1(table: CharacterTable) -> Table1Report:
    """Compare the closed-form table against the oracle for every (pi, Phi)."""
    ctx = table.ctx
    report = Table1Report(table.q)
    for j in range(ctx.order_e):
        phi = ctx.phi(j)
        for lab, m in decompose(table, phi).entries:
            pred = table1_predicted(ctx, lab, phi)
            c = report.counts.setdefault(lab.family, [0, 0])
            c[1] += 1
            if pred == m:
                c[0] += 1
            else:
                report.mismatches.append((j, lab, m, pred))
    return report


def degenerate_multiplicities(table: CharacterTable) -> list[tuple[int, float, float]]:
    """``(a, m1(pi^q_a + pi^1_a), m1(pi^q_a - pi^1_a))`` for every character ``alpha_a`` of F^x.

    Computed from the signed Frobenius sums of the two virtual characters
    for the trivial twist.
    """
    raw = frobenius_sums(table, table.ctx.phi(0))
    out = []
    for a in range(table.q - 1):
        st = raw[table.index(table.steinberg(a))].real
        od = raw[table.index(table.onedim(a))].real
        out.append((a, st + od, st - od))
    return out


# ---- spherical functions ----------------------------------------------------------

@dataclass(eq=False)
class SphericalFunction:
    phi: CharLabel
    label: IrrepLabel
    values: np.ndarray   # one value per double coset, at the canonical representative
    full: np.ndarray     # dense function on G

    def __call__(self, g: int) -> complex:
        return complex(self.full[g])


def spherical_via_averaging(table: CharacterTable, phi: CharLabel, label: IrrepLabel) -> SphericalFunction:
    """``P_Phi(chi_pi)``, which already has value 1 at the identity when pi occurs once."""
    group = table.group
    at_e = frobenius_sums(table, phi)[table.index(label)]
    if abs(at_e) < 0.5:
        raise NotAConstituent(f"{label} does not occur in Ind Phi_{phi.index}")
    h = spherical_functions(table, phi, [label])[0] / at_e
    return SphericalFunction(phi, label, h[group.double_cosets.representatives], h)


def all_sphericals(table: CharacterTable, phi: CharLabel) -> list[SphericalFunction]:
    labels = decompose(table, phi).constituents()
    reps = table.group.double_cosets.representatives
    H = spherical_functions(table, phi, labels)
    return [SphericalFunction(phi, lab, h[reps], h) for lab, h in zip(labels, H)]


def spherical_by_direct_average(table: CharacterTable, phi: CharLabel, label: IrrepLabel) -> np.ndarray:
    """Independent route: the |K|-term average evaluated at every group element."""
    return project_P_phi(table.group, phi, table.on_group(label))


def functional_equation_residual(group: GL2, phi: CharLabel, h: np.ndarray,
                                 xs=None, ys=None) -> float:
    """``max |h(x)h(y) - |K|^-1 sum_k conj(Phi(k)) h(x k y)|``.

    With ``xs``/``ys`` omitted all pairs of double-coset representatives are
    used, which suffices for bi-equivariant ``h``.  When given, ``xs`` and
    ``ys`` are paired elementwise.
    """
    K = group.torus
    w = np.conj(torus_character(group, phi))
    h = np.asarray(h)
    if xs is None:
        reps = group.double_cosets.representatives
        xk = group.mul(reps[:, None], K[None, :])
        xky = group.mul(xk[:, :, None], reps[None, None, :])
        rhs = np.einsum("xky,k->xy", h[xky], w) / len(K)
        lhs = np.outer(h[reps], h[reps])
        return float(np.abs(lhs - rhs).max())
    xs, ys = np.asarray(xs), np.asarray(ys)
    xky = group.mul(group.mul(xs[:, None], K[None, :]), ys[:, None])
    rhs = h[xky] @ w / len(K)
    return float(np.abs(h[xs] * h[ys] - rhs).max())


def _complex_normal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def center_epimorphism_check(table: CharacterTable, phi: CharLabel, trials: int = 100,
                             rng: np.random.Generator | None = None,
                             central_first: bool = True) -> dict:
    """Check ``P_Phi(f1 * f2) = P_Phi f1 * P_Phi f2`` on random class functions.

    Returns the worst residual together with the rank of ``{P_Phi chi_pi}``
    and the number of constituents of Ind Phi.  With ``central_first=False``
    ``f1`` is a random non-central function (negative control).
    """
    group = table.group
    rng = rng or np.random.default_rng(0)
    ncls = len(table.classes)
    worst = 0.0
    for _ in range(trials):
        f1 = _complex_normal(rng, ncls)[group.class_id]
        f2 = _complex_normal(rng, ncls)[group.class_id]
        if not central_first:
            f1 = _complex_normal(rng, group.order)
        lhs = project_P_phi(group, phi, convolve(f1, f2, group))
        rhs = convolve(project_P_phi(group, phi, f1), project_P_phi(group, phi, f2), group)
        worst = max(worst, float(np.abs(lhs - rhs).max() / max(1.0, np.abs(lhs).max())))
    images = project_P_phi(group, phi, table.full)
    rank = int(np.linalg.matrix_rank(images, tol=1e-8 * max(1.0, np.abs(images).max())))
    ncons = len(decompose(table, phi).constituents())
    return {"residual": worst, "image_dim": rank, "constituents": ncons,
            "compatible_cosets": len(hecke_basis(group, phi))}


# ---- explicit cuspidal values ------------------------------------------------------

def _gamma_logs(ctx: FieldCtx, a: int) -> tuple[np.ndarray, np.ndarray]:
    q = ctx.q
    a %= q
    if a == 0:
        raise ValueError("a must be a unit")
    if (a + 1) % q == 0:
        raise SingularParameter("the trace constraint is undefined at a = -1")
    codes = ctx.exp_e
    nz, tz = ctx.code_norm(codes), ctx.code_trace(codes)
    c = (2 * pow(a + 1, q - 2, q)) % q
    ok = (nz[None, :] == (a * nz[:, None]) % q) & (tz[None, :] == (c * tz[:, None]) % q)
    kz, kw = np.nonzero(ok)  # positions are discrete logs
    return kz, kw


def gamma_set(ctx: FieldCtx, a: int) -> list[tuple[ExtElem, ExtElem]]:
    """All ``(z, w)`` in E^x x E^x with ``N(w) = a N(z)`` and ``Tr(w) = 2 (a+1)^-1 Tr(z)``."""
    kz, kw = _gamma_logs(ctx, a)
    q = ctx.q
    return [(ExtElem.from_code(ctx.exp_e[i], q), ExtElem.from_code(ctx.exp_e[k], q))
            for i, k in zip(kz, kw)]


def spherical_explicit(ctx: FieldCtx, phi: CharLabel, lam: CharLabel, a: int) -> complex:
    """Closed-form cuspidal spherical value at ``d(a, 1)``, evaluated verbatim."""
    q = ctx.q
    if ctx.is_frobenius_fixed(lam):
        raise ValueError("Lambda must differ from its Frobenius twist")
    kz, kw = _gamma_logs(ctx, a)
    me = ctx.order_e
    s = -root_of_unity(me, -phi.index * kz + lam.index * kw).sum() / me
    if a % q == 1 and (lam.index - phi.index) % (q - 1) == 0:
        s += q / (q + 1)
    return complex(s)


class KatzReading(enum.Enum):
    """Readings of the circle-sum formula's factor ``(eps omega)(u)``; omega = Lambda on U, eps(0) = 0."""
    OMEGA = 1        # omega(u)
    EPS_TRACE = 2    # eps(Tr u) omega(u)
    EPS_CIRCLE = 3   # eps_U(u) omega(u), eps_U the quadratic character of U


def katz_candidate(ctx: FieldCtx, lam: CharLabel, a: int, reading: KatzReading) -> complex:
    """``(q+1)^-1 sum_{u in U} eps(Tr u - (a + a^-1)) (eps omega)(u)`` under ``reading``."""
    q = ctx.q
    if not isinstance(reading, KatzReading):
        try:
            reading = KatzReading(reading)
        except ValueError as exc:
            raise UnsupportedInterpretation(str(reading)) from exc
    a %= q
    if a in (0, 1):
        raise SingularParameter("the circle-sum formula needs a != 0, 1")
    U = ctx.circle
    ku = ctx.dlog_e[U]
    s = (a + pow(a, q - 2, q)) % q
    omega = root_of_unity(lam.modulus, lam.index * ku)
    factor = sign_f(ctx, ctx.code_trace(U) - s)
    if reading is KatzReading.EPS_TRACE:
        factor = factor * sign_f(ctx, ctx.code_trace(U))
    elif reading is KatzReading.EPS_CIRCLE:
        factor = factor * np.where((ku // (q - 1)) % 2 == 0, 1, -1)
    return complex((factor * omega).sum() / (q + 1))


def sign_f(ctx: FieldCtx, x) -> np.ndarray:
    """Quadratic character of F^x extended by 0 at 0."""
    x = np.asarray(x) % ctx.q
    return np.where(x == 0, 0, np.where(ctx.sqrt_f[x] >= 0, 1, -1))


def compare_explicit(table: CharacterTable, tol: float = 1e-8) -> list[dict]:
    """Closed form vs averaging at every ``d(a, 1)``, ``a != -1``, for every cuspidal constituent."""
    ctx, group, q = table.ctx, table.group, table.q
    rows = []
    for j in range(ctx.order_e):
        phi = ctx.phi(j)
        for sph in all_sphericals(table, phi):
            if sph.label.family != "cuspidal":
                continue
            lam = ctx.phi(sph.label.params[0])
            for a in range(1, q - 1):
                avg = complex(sph.full[group.diag(a)])
                exp = spherical_explicit(ctx, phi, lam, a)
                rows.append({"q": q, "phi": j, "lambda": lam.index, "a": a,
                             "averaging": avg, "explicit": exp,
                             "residual": abs(avg - exp), "match": abs(avg - exp) < tol})
    return rows


def scan_katz(table: CharacterTable, tol: float = 1e-8) -> dict:
    """Agreement of every :class:`KatzReading` with the averaging values, trivial twist."""
    ctx, group, q = table.ctx, table.group, table.q
    phi = ctx.phi(0)
    out = {r: [0, 0] for r in KatzReading}
    for sph in all_sphericals(table, phi):
        if sph.label.family != "cuspidal":
            continue
        lam = ctx.phi(sph.label.params[0])
        for a in range(2, q - 1):
            avg = complex(sph.full[group.diag(a)])
            for r in KatzReading:
                out[r][1] += 1
                out[r][0] += abs(katz_candidate(ctx, lam, a, r) - avg) < tol
    return out
