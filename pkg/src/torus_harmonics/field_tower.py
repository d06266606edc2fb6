"""Arithmetic in F_q and its quadratic extension E = F_q(sqrt(delta)).

Elements of E are stored either as :class:`ExtElem` pairs ``(a, b)`` meaning
``a + b*sqrt(delta)`` or, for vectorised work, as integer codes
``a + q*b`` in ``range(q*q)``.  Code 0 is the zero element.

Characters of the cyclic groups F^x and E^x are addressed by a dual index:
``CharLabel(modulus, j)`` sends the fixed generator to ``exp(2*pi*i*j/modulus)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, DomainMismatch, EvenCharacteristic, NonPrime, ZeroElement

DEFAULT_CAP = 31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def validate_q(q: int, cap: int = DEFAULT_CAP) -> None:
    """Raise a :class:`ConfigError` subclass unless ``q`` is an odd prime <= cap."""
    if not isinstance(q, (int, np.integer)) or not is_prime(int(q)):
        raise NonPrime(f"q={q} is not prime")
    if q == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if q > cap:
        raise CapExceeded(f"q={q} exceeds the configured cap {cap}")


@dataclass(frozen=True, order=True)
class ExtElem:
    a: int
    b: int

    def code(self, q: int) -> int:
        return self.a % q + q * (self.b % q)

    @classmethod
    def from_code(cls, code: int, q: int) -> "ExtElem":
        return cls(int(code) % q, int(code) // q)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0


@dataclass(frozen=True, order=True)
class CharLabel:
    modulus: int
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % self.modulus)


@dataclass(frozen=True, eq=False)
class FieldCtx:
    q: int
    delta: int
    gE: ExtElem
    gF: int
    exp_e: np.ndarray = field(repr=False)   # k -> code of gE^k, k in [0, q^2-1)
    dlog_e: np.ndarray = field(repr=False)  # code -> k; -1 at code 0
    exp_f: np.ndarray = field(repr=False)   # k -> gF^k
    dlog_f: np.ndarray = field(repr=False)  # x -> k; -1 at 0
    sqrt_f: np.ndarray = field(repr=False)  # x -> smallest r with r^2 = x, or -1

    # ---- sizes ----------------------------------------------------------
    @property
    def order_e(self) -> int:
        return self.q * self.q - 1

    @property
    def order_f(self) -> int:
        return self.q - 1

    # ---- scalar arithmetic on ExtElem ------------------------------------
    def elem(self, a: int, b: int = 0) -> ExtElem:
        return ExtElem(a % self.q, b % self.q)

    def add(self, x: ExtElem, y: ExtElem) -> ExtElem:
        return self.elem(x.a + y.a, x.b + y.b)

    def sub(self, x: ExtElem, y: ExtElem) -> ExtElem:
        return self.elem(x.a - y.a, x.b - y.b)

    def mul(self, x: ExtElem, y: ExtElem) -> ExtElem:
        return self.elem(x.a * y.a + self.delta * x.b * y.b, x.a * y.b + x.b * y.a)

    def inv(self, x: ExtElem) -> ExtElem:
        if x.is_zero():
            raise ZeroElement("0 has no inverse in E")
        k = self.dlog_e[x.code(self.q)]
        return ExtElem.from_code(self.exp_e[(-k) % self.order_e], self.q)

    def div(self, x: ExtElem, y: ExtElem) -> ExtElem:
        return self.mul(x, self.inv(y))

    def power(self, x: ExtElem, n: int) -> ExtElem:
        out = ExtElem(1, 0)
        base = x
        if n < 0:
            base, n = self.inv(x), -n
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def norm(self, x: ExtElem) -> int:
        return (x.a * x.a - self.delta * x.b * x.b) % self.q

    def trace(self, x: ExtElem) -> int:
        return (2 * x.a) % self.q

    def conj(self, x: ExtElem) -> ExtElem:
        return self.elem(x.a, -x.b)

    def conjugation_data(self, z: ExtElem) -> tuple[int, int, ExtElem]:
        """Return ``(N(z), Tr(z), z^q)``."""
        return self.norm(z), self.trace(z), self.conj(z)

    def discrete_log(self, z: ExtElem) -> int:
        if z.is_zero():
            raise ZeroElement("discrete log of 0")
        return int(self.dlog_e[z.code(self.q)])

    def discrete_log_f(self, x: int) -> int:
        x %= self.q
        if x == 0:
            raise ZeroElement("discrete log of 0")
        return int(self.dlog_f[x])

    def finv(self, x: int) -> int:
        x %= self.q
        if x == 0:
            raise ZeroElement("0 has no inverse in F")
        return pow(x, self.q - 2, self.q)

    # ---- vectorised code arithmetic --------------------------------------
    def code_mul(self, x, y):
        q = self.q
        xa, xb = np.divmod(np.asarray(x), q)[::-1]
        ya, yb = np.divmod(np.asarray(y), q)[::-1]
        a = (xa * ya + self.delta * xb * yb) % q
        b = (xa * yb + xb * ya) % q
        return a + q * b

    def code_norm(self, x):
        q = self.q
        xb, xa = np.divmod(np.asarray(x), q)
        return (xa * xa - self.delta * xb * xb) % q

    def code_trace(self, x):
        return (2 * (np.asarray(x) % self.q)) % self.q

    def code_conj(self, x):
        q = self.q
        xb, xa = np.divmod(np.asarray(x), q)
        return xa + q * ((-xb) % q)

    @property
    def units_e(self) -> np.ndarray:
        """Codes of E^x in generator order: ``units_e[k] = gE^k``."""
        return self.exp_e

    @property
    def circle(self) -> np.ndarray:
        """Codes of the norm-one subgroup U of E^x (order q+1), in generator order."""
        step = self.q - 1
        return self.exp_e[::step]

    # ---- characters ------------------------------------------------------
    def phi(self, j: int) -> CharLabel:
        """Character of E^x sending gE to exp(2 pi i j / (q^2-1))."""
        return CharLabel(self.order_e, j)

    def alpha(self, i: int) -> CharLabel:
        """Character of F^x sending gF to exp(2*pi*1j*i / (q-1))."""
        return CharLabel(self.order_f, i)

    @property
    def sign(self) -> CharLabel:
        """The quadratic (sign) character of F^x."""
        return self.alpha((self.q - 1) // 2)

    def restrict(self, chi: CharLabel) -> CharLabel:
        """Restriction of a character of E^x to F^x."""
        self._check_e(chi)
        return self.alpha(chi.index)

    def frobenius_twist(self, chi: CharLabel) -> CharLabel:
        """``chi o Frob``, i.e. ``z -> chi(z^q)``."""
        self._check_e(chi)
        return self.phi(chi.index * self.q)

    def norm_pullback(self, alpha: CharLabel) -> CharLabel:
        """``alpha o N`` as a character of E^x."""
        self._check_f(alpha)
        return self.phi(alpha.index * (self.q + 1))

    def is_frobenius_fixed(self, chi: CharLabel) -> bool:
        self._check_e(chi)
        return chi.index % (self.q + 1) == 0

    def char_eval(self, chi: CharLabel, x) -> complex:
        """Evaluate a character at an element of its group.

        ``x`` is an :class:`ExtElem` for characters of E^x and an int for
        characters of F^x.
        """
        if chi.modulus == self.order_e:
            if not isinstance(x, ExtElem):
                raise DomainMismatch("character of E^x needs an ExtElem argument")
            k = self.discrete_log(x)
        elif chi.modulus == self.order_f:
            if isinstance(x, ExtElem):
                if x.b % self.q:
                    raise DomainMismatch(f"{x} is not in F")
                x = x.a
            k = self.discrete_log_f(int(x))
        else:
            raise DomainMismatch(f"modulus {chi.modulus} matches neither F^x nor E^x")
        return complex(np.exp(2j * np.pi * ((chi.index * k) % chi.modulus) / chi.modulus))

    def char_values_e(self, chi: CharLabel, codes=None) -> np.ndarray:
        """Values of a character of E^x on an array of nonzero codes (default: all of E^x in generator order)."""
        self._check_e(chi)
        k = np.arange(self.order_e) if codes is None else self.dlog_e[np.asarray(codes)]
        if np.any(k < 0):
            raise ZeroElement("character of E^x evaluated at 0")
        return root_of_unity(chi.modulus, chi.index * k)

    def char_values_f(self, chi: CharLabel, xs=None) -> np.ndarray:
        self._check_f(chi)
        k = np.arange(self.order_f) if xs is None else self.dlog_f[np.asarray(xs) % self.q]
        if np.any(k < 0):
            raise ZeroElement("character of F^x evaluated at 0")
        return root_of_unity(chi.modulus, chi.index * k)

    def _check_e(self, chi: CharLabel) -> None:
        if chi.modulus != self.order_e:
            raise DomainMismatch(f"{chi} is not a character of E^x for q={self.q}")

    def _check_f(self, chi: CharLabel) -> None:
        if chi.modulus != self.order_f:
            raise DomainMismatch(f"{chi} is not a character of F^x for q={self.q}")


def root_of_unity(modulus: int, k) -> np.ndarray:
    """``exp(2 pi i k / modulus)`` with the exponent reduced first."""
    k = np.asarray(k) % modulus
    return np.exp(2j * np.pi * k / modulus)


def _order_of(code: int, q: int, delta: int, bound: int) -> int:
    a, b = code % q, code // q
    x, y = a, b
    for n in range(1, bound + 1):
        if x == 1 and y == 0:
            return n
        x, y = (x * a + delta * y * b) % q, (x * b + y * a) % q
    return -1


@lru_cache(maxsize=None)
def build_field_context(q: int, cap: int = DEFAULT_CAP) -> FieldCtx:
    """Build the canonical arithmetic context for an odd prime ``q``.

    ``delta`` is the smallest non-square in ``2..q-1``; ``gE`` is the
    lexicographically smallest ``(a, b)`` of order ``q^2 - 1``; ``gF = N(gE)``.
    """
    validate_q(q, cap)
    squares = {(x * x) % q for x in range(1, q)}
    delta = next(d for d in range(2, q) if d not in squares)

    order = q * q - 1
    gE = None
    for a in range(q):
        for b in range(q):
            if (a, b) != (0, 0) and _order_of(a + q * b, q, delta, order) == order:
                gE = ExtElem(a, b)
                break
        if gE is not None:
            break

    exp_e = np.empty(order, dtype=np.int64)
    dlog_e = np.full(q * q, -1, dtype=np.int64)
    x, y = 1, 0
    for k in range(order):
        c = x + q * y
        exp_e[k] = c
        dlog_e[c] = k
        x, y = (x * gE.a + delta * y * gE.b) % q, (x * gE.b + y * gE.a) % q

    gF = (gE.a * gE.a - delta * gE.b * gE.b) % q
    exp_f = np.empty(q - 1, dtype=np.int64)
    dlog_f = np.full(q, -1, dtype=np.int64)
    v = 1
    for k in range(q - 1):
        exp_f[k] = v
        dlog_f[v] = k
        v = (v * gF) % q

    sqrt_f = np.full(q, -1, dtype=np.int64)
    for r in range(q - 1, -1, -1):
        sqrt_f[(r * r) % q] = r

    for arr in (exp_e, dlog_e, exp_f, dlog_f, sqrt_f):
        arr.setflags(write=False)
    return FieldCtx(q, delta, gE, gF, exp_e, dlog_e, exp_f, dlog_f, sqrt_f)
