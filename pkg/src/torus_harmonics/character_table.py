"""Character table of GL(2, q) in the four standard families.

Irreducibles are labelled by dual indices of characters of F^x (``alpha_i``)
and E^x (``Lambda_j``)::

    onedim(i)        alpha_i o det                      dim 1
    steinberg(i)     Steinberg twisted by alpha_i       dim q
    principal(i, j)  induced from (alpha_i, alpha_j)    dim q+1,  i < j
    cuspidal(j)      attached to {Lambda_j, Lambda_jq}  dim q-1,  j the smaller index

The degenerate combinations ``pi^q_a + pi^1_a`` (principal with equal
parameters) and ``pi^q_a - pi^1_a`` (cuspidal with Frobenius-fixed
parameter) are handled as :data:`VirtualCharacter` mappings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationFailed
from .field_tower import CharLabel, FieldCtx, root_of_unity
from .gl2_geometry import GL2, ClassLabel, gl2

VirtualCharacter = dict  # IrrepLabel -> int coefficient

ORTHOGONALITY_TOL = 1e-8


@dataclass(frozen=True, order=True)
class IrrepLabel:
    family: str
    params: tuple
    dim: int

    def __str__(self):
        return f"{self.family}({','.join(str(p) for p in self.params)})"


@dataclass(eq=False)
class CharacterTable:
    group: GL2
    labels: list[IrrepLabel]
    classes: list[ClassLabel]
    class_sizes: np.ndarray
    values: np.ndarray = field(repr=False)  # (labels, classes) complex
    _index: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {lab: n for n, lab in enumerate(self.labels)}

    @property
    def ctx(self) -> FieldCtx:
        return self.group.ctx

    @property
    def q(self) -> int:
        return self.group.q

    def index(self, label: IrrepLabel) -> int:
        return self._index[label]

    def row(self, label: IrrepLabel) -> np.ndarray:
        return self.values[self._index[label]]

    @property
    def dims(self) -> np.ndarray:
        return np.array([lab.dim for lab in self.labels])

    def on_group(self, label: IrrepLabel) -> np.ndarray:
        """The character as a dense function on G (canonical enumeration order)."""
        return self.row(label)[self.group.class_id]

    @property
    def full(self) -> np.ndarray:
        """All characters on G, shape ``(labels, |G|)``."""
        if "full" not in self._cache:
            self._cache["full"] = self.values[:, self.group.class_id]
        return self._cache["full"]

    @property
    def torus_values(self) -> np.ndarray:
        """All characters restricted to K, shape ``(labels, |K|)``, K in generator order."""
        if "torus" not in self._cache:
            self._cache["torus"] = self.values[:, self.group.class_id[self.group.torus]]
        return self._cache["torus"]

    def virtual_values(self, vc: VirtualCharacter) -> np.ndarray:
        out = np.zeros(len(self.classes), dtype=complex)
        for lab, coeff in vc.items():
            out += coeff * self.row(lab)
        return out

    # ---- label constructors ---------------------------------------------
    def onedim(self, i: int) -> IrrepLabel:
        return IrrepLabel("onedim", (i % (self.q - 1),), 1)

    def steinberg(self, i: int) -> IrrepLabel:
        return IrrepLabel("steinberg", (i % (self.q - 1),), self.q)

    def principal(self, i: int, j: int) -> IrrepLabel:
        m = self.q - 1
        i, j = sorted((i % m, j % m))
        if i == j:
            raise ValueError("principal series needs distinct parameters; use principal_character")
        return IrrepLabel("principal", (i, j), self.q + 1)

    def cuspidal(self, j: int) -> IrrepLabel:
        m = self.q * self.q - 1
        j %= m
        if j % (self.q + 1) == 0:
            raise ValueError("Frobenius-fixed parameter; use cuspidal_character")
        return IrrepLabel("cuspidal", (min(j, (j * self.q) % m),), self.q - 1)

    def principal_character(self, i: int, j: int) -> VirtualCharacter:
        """``chi^{q+1}_{alpha_i, alpha_j}``, virtual ``pi^q + pi^1`` when i = j."""
        if (i - j) % (self.q - 1) == 0:
            return {self.steinberg(i): 1, self.onedim(i): 1}
        return {self.principal(i, j): 1}

    def cuspidal_character(self, j: int) -> VirtualCharacter:
        """``chi^{q-1}_{Lambda_j}``, virtual ``pi^q_a - pi^1_a`` when Lambda_j = a o N."""
        if j % (self.q + 1) == 0:
            a = j // (self.q + 1)
            return {self.steinberg(a): 1, self.onedim(a): -1}
        return {self.cuspidal(j): 1}

    def dual(self, label: IrrepLabel) -> IrrepLabel:
        """Label of the contragredient representation."""
        if label.family == "onedim":
            return self.onedim(-label.params[0])
        if label.family == "steinberg":
            return self.steinberg(-label.params[0])
        if label.family == "principal":
            return self.principal(-label.params[0], -label.params[1])
        return self.cuspidal(-label.params[0])

    # ---- validation --------------------------------------------------------
    def orthogonality_residuals(self) -> tuple[float, float]:
        """Max deviation of the row and column orthogonality relations."""
        n = self.group.order
        weighted = self.values * self.class_sizes[None, :]
        gram = weighted @ self.values.conj().T / n
        rows = float(np.abs(gram - np.eye(len(self.labels))).max())
        col = self.values.conj().T @ self.values
        expected = np.diag(n / self.class_sizes)
        cols = float(np.abs(col - expected).max() / n)
        return rows, cols

    def restrict_to_torus(self, label: IrrepLabel) -> np.ndarray:
        """``k -> chi(m_{gE^k})`` for k in ``range(q^2 - 1)``."""
        return self.torus_values[self._index[label]]


def irrep_labels(q: int) -> list[IrrepLabel]:
    m, me = q - 1, q * q - 1
    labels = [IrrepLabel("onedim", (i,), 1) for i in range(m)]
    labels += [IrrepLabel("steinberg", (i,), q) for i in range(m)]
    labels += [IrrepLabel("principal", (i, j), q + 1) for i in range(m) for j in range(i + 1, m)]
    labels += [IrrepLabel("cuspidal", (j,), q - 1) for j in range(me)
               if j % (q + 1) and j < (j * q) % me]
    return labels


def _class_logs(ctx: FieldCtx, cls: ClassLabel) -> tuple[int, int]:
    """Discrete logs of the two eigenvalues (in E^x for elliptic classes, else in F^x)."""
    if cls.kind in ("central", "unipotent"):
        m = int(ctx.dlog_f[cls.params[0]])
        return m, m
    if cls.kind == "split":
        return int(ctx.dlog_f[cls.params[0]]), int(ctx.dlog_f[cls.params[1]])
    return int(ctx.dlog_e[cls.params[0]]), int(ctx.dlog_e[cls.params[1]])


def character_value(q: int, label: IrrepLabel, cls: ClassLabel, logs: tuple[int, int]) -> complex:
    """Closed-form value of an irreducible character at a class."""
    mf, me = q - 1, q * q - 1
    x, y = logs
    kind, fam = cls.kind, label.family

    def wf(n):
        return complex(root_of_unity(mf, n))

    def we(n):
        return complex(root_of_unity(me, n))

    if fam == "onedim":
        (i,) = label.params
        return wf(i * x) if kind == "elliptic" else wf(i * (x + y))
    if fam == "steinberg":
        (i,) = label.params
        return {"central": q * wf(2 * i * x), "unipotent": 0j,
                "split": wf(i * (x + y)), "elliptic": -wf(i * x)}[kind]
    if fam == "principal":
        i, j = label.params
        if kind == "central":
            return (q + 1) * wf((i + j) * x)
        if kind == "unipotent":
            return wf((i + j) * x)
        if kind == "split":
            return wf(i * x + j * y) + wf(i * y + j * x)
        return 0j
    (j,) = label.params
    if kind == "central":
        return (q - 1) * we(j * (q + 1) * x)
    if kind == "unipotent":
        return -we(j * (q + 1) * x)
    if kind == "split":
        return 0j
    return -(we(j * x) + we(j * y))


@lru_cache(maxsize=None)
def _build(q: int, tol: float) -> CharacterTable:
    group = gl2(q)
    ctx = group.ctx
    labels = irrep_labels(q)
    classes = group.classes
    logs = [_class_logs(ctx, c) for c in classes]
    values = np.array([[character_value(q, lab, c, lg) for c, lg in zip(classes, logs)]
                       for lab in labels])
    values.setflags(write=False)
    table = CharacterTable(group, labels, classes, group.class_sizes, values)
    rows, cols = table.orthogonality_residuals()
    if max(rows, cols) > tol:
        raise ValidationFailed(f"q={q}: orthogonality residual rows={rows:.3g} cols={cols:.3g}")
    return table


def build_character_table(ctx_or_q, tol: float = ORTHOGONALITY_TOL) -> CharacterTable:
    """Build and validate the character table; refuses to return a table failing orthogonality."""
    q = ctx_or_q if isinstance(ctx_or_q, int) else ctx_or_q.q
    return _build(int(q), float(tol))


def twisting_identity_residual(table: CharacterTable, phi: CharLabel) -> float:
    """Max pointwise deviation on K of the four twisting identities

    ``(Phi + Phi^q) chi`` against the stated sums of (possibly virtual)
    characters, over every admissible parameter.
    """
    q = table.q
    ctx = table.ctx
    j = phi.index
    f = j % (q - 1)  # index of the restriction phi
    k = np.arange(ctx.order_e)
    twist = root_of_unity(phi.modulus, j * k) + root_of_unity(phi.modulus, j * q * k)
    cls_k = table.group.class_id[table.group.torus]

    def on_k(vc):
        return table.virtual_values(vc)[cls_k]

    worst = 0.0
    for a in range(q - 1):
        lhs_q = twist * on_k({table.steinberg(a): 1})
        lhs_1 = twist * on_k({table.onedim(a): 1})
        cusp = on_k(table.cuspidal_character(j + a * (q + 1)))
        prin = on_k(table.principal_character(f + a, a))
        worst = max(worst, np.abs(lhs_q - (cusp + prin)).max(), np.abs(lhs_1 - (prin - cusp)).max())
    for a in range(q - 1):
        for b in range(a + 1, q - 1):
            lhs = twist * on_k({table.principal(a, b): 1})
            rhs = on_k(table.principal_character(f + a, b)) + on_k(table.principal_character(a, f + b))
            worst = max(worst, np.abs(lhs - rhs).max())
    for lab in table.labels:
        if lab.family != "cuspidal":
            continue
        (lam,) = lab.params
        lhs = twist * on_k({lab: 1})
        rhs = on_k(table.cuspidal_character(j + lam)) + on_k(table.cuspidal_character(j * q + lam))
        worst = max(worst, np.abs(lhs - rhs).max())
    return float(worst)
