"""The group G = GL(2, q), its Coxeter torus K and the half-plane H = E \\ F.

G is enumerated once, lexicographically in ``(a, b, c, d)``, and every
group element is thereafter addressed by its position in that list.  All
products are computed in bulk on index arrays via :meth:`GL2.mul`.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainMismatch, ZeroElement
from .field_tower import ExtElem, FieldCtx, build_field_context


class GroupElem(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    def det(self, q: int) -> int:
        return (self.a * self.d - self.b * self.c) % q


class TorusElem(NamedTuple):
    z: ExtElem
    matrix: GroupElem


HalfPlanePoint = ExtElem


class _Infinity:
    """Value of D on antipodal pairs; sorts after every field value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("torus_harmonics.inf")


INF = _Infinity()


def d_sort_key(v):
    return (1, 0) if v is INF else (0, int(v))


@dataclass(frozen=True, order=True)
class ClassLabel:
    """Conjugacy class of GL(2, q).

    ``params`` holds F-values for central/unipotent/split classes (split pairs
    sorted by discrete log) and the two E-codes ``(z, z^q)`` for elliptic
    classes, smaller discrete log first.
    """
    kind: str
    params: tuple

    def __str__(self):
        return f"{self.kind}({','.join(str(p) for p in self.params)})"


@dataclass(eq=False)
class DoubleCosetTable:
    representatives: np.ndarray  # element index of the canonical representative
    assignment: np.ndarray       # element index -> coset id
    sizes: np.ndarray
    diagonal_as: list            # coset id -> sorted list of a with d(a,1) in the coset

    def __len__(self):
        return len(self.sizes)

    def members(self, cid: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == cid)


@dataclass(eq=False)
class GL2:
    """Enumerated GL(2, q) together with the torus embedding and class data."""

    ctx: FieldCtx
    entries: np.ndarray = field(repr=False)   # (n, 4) int64
    lookup: np.ndarray = field(repr=False)    # code(a,b,c,d) -> index or -1
    inverse: np.ndarray = field(repr=False)
    identity: int = 0
    torus: np.ndarray = field(default=None, repr=False)   # k -> index of m_{gE^k}
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def order(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    # ---- element access --------------------------------------------------
    def element(self, i: int) -> GroupElem:
        return GroupElem(*(int(v) for v in self.entries[i]))

    def index(self, g) -> int:
        a, b, c, d = (int(v) % self.q for v in g)
        i = int(self.lookup[self._code(a, b, c, d)])
        if i < 0:
            raise DomainMismatch(f"{g} is singular")
        return i

    def _code(self, a, b, c, d):
        q = self.q
        return ((a * q + b) * q + c) * q + d

    def mul(self, i, j):
        """Index of ``g_i g_j``; ``i`` and ``j`` broadcast like numpy arrays."""
        q = self.q
        x = self.entries[np.asarray(i)]
        y = self.entries[np.asarray(j)]
        a = (x[..., 0] * y[..., 0] + x[..., 1] * y[..., 2]) % q
        b = (x[..., 0] * y[..., 1] + x[..., 1] * y[..., 3]) % q
        c = (x[..., 2] * y[..., 0] + x[..., 3] * y[..., 2]) % q
        d = (x[..., 2] * y[..., 1] + x[..., 3] * y[..., 3]) % q
        return self.lookup[self._code(a, b, c, d)]

    def diag(self, a: int, d: int = 1) -> int:
        return self.index((a, 0, 0, d))

    # ---- torus -----------------------------------------------------------
    def torus_index(self, z: ExtElem) -> int:
        return self.index(torus_matrix(self.ctx, z))

    @property
    def torus_log(self) -> np.ndarray:
        """Element index -> k with g = m_{gE^k}, or -1 off K."""
        if "torus_log" not in self._cache:
            out = np.full(self.order, -1, dtype=np.int64)
            out[self.torus] = np.arange(len(self.torus))
            self._cache["torus_log"] = out
        return self._cache["torus_log"]

    def quotient_rows(self, ys) -> np.ndarray:
        """``T[r, x] = index(y_r^{-1} g_x)`` for the given rows ``ys``."""
        full = self._cache.get("quotient")
        ys = np.asarray(ys)
        if full is not None:
            return full[ys]
        return self.mul(self.inverse[ys][:, None], np.arange(self.order)[None, :])

    def quotient_table(self) -> np.ndarray | None:
        """Full table ``T[y, x] = index(y^{-1} x)``, cached for small groups only."""
        if "quotient" not in self._cache:
            if self.order > 5000:
                return None
            t = self.mul(self.inverse[:, None], np.arange(self.order)[None, :]).astype(np.int32)
            self._cache["quotient"] = t
        return self._cache["quotient"]

    # ---- conjugacy classes -------------------------------------------------
    @functools.cached_property
    def classes(self) -> list[ClassLabel]:
        return _canonical_classes(self.ctx)

    @functools.cached_property
    def class_id(self) -> np.ndarray:
        ids = {lab: n for n, lab in enumerate(self.classes)}
        labels = _classify_entries(self.ctx, self.entries)
        return np.array([ids[lab] for lab in labels], dtype=np.int64)

    @functools.cached_property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.class_id, minlength=len(self.classes))

    # ---- double cosets ---------------------------------------------------
    @functools.cached_property
    def double_cosets(self) -> DoubleCosetTable:
        return double_coset_decomposition(self)


def torus_matrix(ctx: FieldCtx, z: ExtElem) -> GroupElem:
    q = ctx.q
    return GroupElem(z.a % q, (ctx.delta * z.b) % q, z.b % q, z.a % q)


def torus_embed(ctx: FieldCtx, z: ExtElem) -> TorusElem:
    """The matrix of ``w -> z w`` in the basis (1, sqrt(delta))."""
    if z.is_zero():
        raise ZeroElement("0 is not in E^x")
    return TorusElem(z, torus_matrix(ctx, z))


@functools.lru_cache(maxsize=None)
def _build_group(q: int) -> GL2:
    ctx = build_field_context(q)
    r = np.arange(q)
    a, b, c, d = (m.ravel() for m in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = (a * d - b * c) % q != 0
    entries = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1).astype(np.int64)
    n = len(entries)
    lookup = np.full(q ** 4, -1, dtype=np.int64)
    codes = ((entries[:, 0] * q + entries[:, 1]) * q + entries[:, 2]) * q + entries[:, 3]
    lookup[codes] = np.arange(n)

    det = (entries[:, 0] * entries[:, 3] - entries[:, 1] * entries[:, 2]) % q
    dinv = np.array([pow(int(x), q - 2, q) for x in det])
    inv_entries = np.stack([
        entries[:, 3] * dinv, -entries[:, 1] * dinv,
        -entries[:, 2] * dinv, entries[:, 0] * dinv], axis=1) % q
    inverse = lookup[((inv_entries[:, 0] * q + inv_entries[:, 1]) * q + inv_entries[:, 2]) * q
                     + inv_entries[:, 3]]

    group = GL2(ctx, entries, lookup, inverse)
    group.identity = group.index((1, 0, 0, 1))
    zs = ctx.exp_e
    za, zb = zs % q, zs // q
    group.torus = lookup[((za * q + (ctx.delta * zb) % q) * q + zb) * q + za]
    for arr in (entries, lookup, inverse, group.torus):
        arr.setflags(write=False)
    return group


def enumerate_group(ctx: FieldCtx) -> list[GroupElem]:
    """All of GL(2, q) in lexicographic order of ``(a, b, c, d)``."""
    group = gl2(ctx.q)
    return [group.element(i) for i in range(group.order)]


def gl2(q: int) -> GL2:
    """Shared, cached group object for ``q``."""
    return _build_group(int(q))


# ---- half-plane -------------------------------------------------------------

def is_half_plane_point(w: ExtElem, q: int) -> bool:
    return w.b % q != 0


def mobius_act(ctx: FieldCtx, g, w: ExtElem) -> ExtElem:
    """``g.w = (a w + b) / (c w + d)``; the denominator never vanishes on H."""
    if not is_half_plane_point(w, ctx.q):
        raise DomainMismatch(f"{w} is not in E \\ F")
    a, b, c, d = g
    num = ctx.add(ctx.mul(ctx.elem(a), w), ctx.elem(b))
    den = ctx.add(ctx.mul(ctx.elem(c), w), ctx.elem(d))
    return ctx.div(num, den)


def distance_invariant(ctx: FieldCtx, z: ExtElem, w: ExtElem):
    """``D(z, w) = N(z - w) / N(z - conj(w))``, or :data:`INF` when ``w = conj(z)``."""
    den = ctx.norm(ctx.sub(z, ctx.conj(w)))
    if den == 0:
        return INF
    return (ctx.norm(ctx.sub(z, w)) * ctx.finv(den)) % ctx.q


def half_plane(ctx: FieldCtx) -> list[ExtElem]:
    q = ctx.q
    return [ExtElem(a, b) for b in range(1, q) for a in range(q)]


def origin(ctx: FieldCtx) -> ExtElem:
    return ExtElem(0, 1)


# ---- conjugacy classes --------------------------------------------------------

def _canonical_classes(ctx: FieldCtx) -> list[ClassLabel]:
    q = ctx.q
    f_units = [int(x) for x in ctx.exp_f]
    out = [ClassLabel("central", (a,)) for a in f_units]
    out += [ClassLabel("unipotent", (a,)) for a in f_units]
    out += [ClassLabel("split", (f_units[i], f_units[j]))
            for i in range(q - 1) for j in range(i + 1, q - 1)]
    for k in range(ctx.order_e):
        if k % (q + 1) == 0:
            continue  # z in F
        kq = (k * q) % ctx.order_e
        if k < kq:
            out.append(ClassLabel("elliptic", (int(ctx.exp_e[k]), int(ctx.exp_e[kq]))))
    return out


def _classify_entries(ctx: FieldCtx, entries: np.ndarray) -> list[ClassLabel]:
    q = ctx.q
    a, b, c, d = (entries[:, i] for i in range(4))
    t = (a + d) % q
    n = (a * d - b * c) % q
    disc = (t * t - 4 * n) % q
    half = pow(2, q - 2, q)
    inv4d = pow(4 * ctx.delta, q - 2, q)
    labels = []
    for i in range(len(entries)):
        ti, di = int(t[i]), int(disc[i])
        if di == 0:
            ev = (ti * half) % q
            if b[i] == 0 and c[i] == 0:
                labels.append(ClassLabel("central", (ev,)))
            else:
                labels.append(ClassLabel("unipotent", (ev,)))
            continue
        r = int(ctx.sqrt_f[di])
        if r >= 0:
            x, y = ((ti + r) * half) % q, ((ti - r) * half) % q
            if ctx.dlog_f[x] > ctx.dlog_f[y]:
                x, y = y, x
            labels.append(ClassLabel("split", (x, y)))
        else:
            s = int(ctx.sqrt_f[(di * inv4d) % q])
            z = ((ti * half) % q) + q * s
            zq = ((ti * half) % q) + q * ((-s) % q)
            if ctx.dlog_e[z] > ctx.dlog_e[zq]:
                z, zq = zq, z
            labels.append(ClassLabel("elliptic", (z, zq)))
    return labels


def conjugacy_class_of(ctx: FieldCtx, g) -> ClassLabel:
    """Classify ``g`` by its characteristic polynomial."""
    entries = np.array([[int(v) % ctx.q for v in g]], dtype=np.int64)
    if (entries[0, 0] * entries[0, 3] - entries[0, 1] * entries[0, 2]) % ctx.q == 0:
        raise DomainMismatch(f"{g} is singular")
    return _classify_entries(ctx, entries)[0]


# ---- double cosets -----------------------------------------------------------

def double_coset_decomposition(group: GL2) -> DoubleCosetTable:
    """Partition G into K-double cosets by brute-force orbit closure.

    Cosets containing some ``d(a, 1)`` come first, ordered by the smallest
    such ``a`` (so coset 0 is K itself) and represented by that ``d(a, 1)``;
    the rest follow in order of their first element.
    """
    q = group.q
    K = group.torus
    assignment = np.full(group.order, -1, dtype=np.int64)
    orbits = []
    for x in range(group.order):
        if assignment[x] >= 0:
            continue
        right = group.mul(x, K)
        orbit = np.unique(group.mul(K[:, None], right[None, :]))
        assignment[orbit] = len(orbits)
        orbits.append(orbit)

    diag_as: dict[int, list[int]] = {}
    for a in range(1, q):
        diag_as.setdefault(int(assignment[group.diag(a)]), []).append(a)

    def key(cid):
        if cid in diag_as:
            return (0, min(diag_as[cid]))
        return (1, int(orbits[cid][0]))

    order = sorted(range(len(orbits)), key=key)
    remap = np.empty(len(orbits), dtype=np.int64)
    remap[order] = np.arange(len(orbits))
    reps = np.array([group.diag(min(diag_as[c])) if c in diag_as else int(orbits[c][0])
                     for c in order], dtype=np.int64)
    return DoubleCosetTable(
        representatives=reps,
        assignment=remap[assignment],
        sizes=np.array([len(orbits[c]) for c in order], dtype=np.int64),
        diagonal_as=[sorted(diag_as.get(c, [])) for c in order],
    )


# ---- orbits on H x H -----------------------------------------------------------

def half_plane_codes(ctx: FieldCtx) -> np.ndarray:
    q = ctx.q
    return np.array([a + q * b for b in range(1, q) for a in range(q)], dtype=np.int64)


def action_table(group: GL2) -> np.ndarray:
    """``A[g, p]`` = position in :func:`half_plane_codes` of ``g.w_p``."""
    if "action" in group._cache:
        return group._cache["action"]
    ctx, q = group.ctx, group.q
    pts = half_plane_codes(ctx)
    pos = np.full(q * q, -1, dtype=np.int64)
    pos[pts] = np.arange(len(pts))
    e = group.entries
    wa, wb = pts % q, pts // q
    na = (e[:, 0:1] * wa + e[:, 1:2]) % q
    nb = (e[:, 0:1] * wb) % q
    da = (e[:, 2:3] * wa + e[:, 3:4]) % q
    db = (e[:, 2:3] * wb) % q
    den = ctx.dlog_e[da + q * db]
    den_inv = ctx.exp_e[(-den) % ctx.order_e]
    out = pos[ctx.code_mul(na + q * nb, den_inv)]
    group._cache["action"] = out
    return out


def pair_orbits(group: GL2) -> np.ndarray:
    """Orbit label of every pair in H x H under the diagonal action, shape ``(|H|, |H|)``.

    The label of ``(z, w)`` is the smallest flattened index among its images.
    """
    act = action_table(group)
    m = act.shape[1]
    flat = act[:, :, None] * m + act[:, None, :]   # (g, z, w)
    return flat.min(axis=0)


def distance_matrix(ctx: FieldCtx) -> list[list]:
    pts = [ExtElem.from_code(c, ctx.q) for c in half_plane_codes(ctx)]
    return [[distance_invariant(ctx, z, w) for w in pts] for z in pts]
