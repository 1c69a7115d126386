"""Arithmetic in GF(p) and GF(p^n) for odd primes p.

Elements are canonically encoded as integers in ``[0, p^n)``: the
coefficient of ``x^i`` in the polynomial basis is the ``i``-th base-p
digit.  Prime-field elements therefore keep their usual value, and the
encoding doubles as a vertex ID for the Cayley graphs built elsewhere.

All context methods accept either Python ints or integer numpy arrays
and return the same kind.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

CONSTANTS_ENV = "BENTSRG_CONSTANTS"
LOG_TABLE_LIMIT = 2**22


class FieldError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient lists low degree first
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    m = max(len(a), len(b))
    a = a + [0] * (m - len(a))
    b = b + [0] * (m - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial ``f`` over GF(p)."""
    f = _trim(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    # x^(p^i) mod f for i = 1..n
    frob = [x]
    for _ in range(n):
        frob.append(_poly_powmod(frob[-1], p, f, p))
    if _poly_sub(frob[n], x, p):
        return False
    for r in prime_factors(n):
        g = _poly_gcd(f, _poly_sub(frob[n // r], x, p), p)
        if len(g) > 1:
            return False
    return True


def _has_order(g: list[int], f: list[int], p: int, order: int) -> bool:
    if _poly_powmod(g, order, f, p) != [1]:
        return False
    return all(_poly_powmod(g, order // r, f, p) != [1] for r in prime_factors(order))


# ---------------------------------------------------------------------------
# pinned constants
# ---------------------------------------------------------------------------

def _parse_coeffs(text: str) -> tuple[int, ...]:
    return tuple(int(c) for c in text.split(","))


@lru_cache(maxsize=None)
def load_constants(path: str | None = None) -> dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]]:
    """Read and verify the pinned (modulus, generator) table.

    The file is taken from ``$BENTSRG_CONSTANTS`` when set, otherwise the
    copy shipped with the package.  Every entry is checked for
    irreducibility and generator primitivity.
    """
    if path is None:
        path = os.environ.get(CONSTANTS_ENV)
    if path is None:
        text = resources.files("bentsrg").joinpath("data/conway.txt").read_text()
    else:
        text = Path(path).read_text()
    table = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p_s, n_s, mod_s, gen_s = line.split()
            p, n = int(p_s), int(n_s)
            modulus, generator = _parse_coeffs(mod_s), _parse_coeffs(gen_s)
        except ValueError as exc:
            raise FieldError(f"constants line {lineno}: cannot parse {line!r}") from exc
        if len(modulus) != n + 1 or modulus[-1] != 1 or len(generator) != n:
            raise FieldError(f"constants line {lineno}: wrong shape for GF({p}^{n})")
        if not is_irreducible(list(modulus), p):
            raise FieldError(f"constants line {lineno}: modulus is reducible")
        if not _has_order(_trim(list(generator)), list(modulus), p, p**n - 1):
            raise FieldError(f"constants line {lineno}: generator is not primitive")
        table[(p, n)] = (modulus, generator)
    return table


def _search_primitive_modulus(p: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # lexicographically first monic polynomial with x primitive
    order = p**n - 1
    assert n > 1
    for tail in product(range(p), repeat=n):
        f = list(reversed(tail)) + [1]
        if f[0] == 0:
            continue
        if is_irreducible(f, p) and _has_order([0, 1], f, p, order):
            gen = [0] * n
            gen[1] = 1
            return tuple(f), tuple(gen)
    raise FieldError(f"no primitive polynomial found for GF({p}^{n})")


def _least_primitive_root(p: int) -> int:
    for g in range(1, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)):
            return g
    raise FieldError(f"no primitive root mod {p}")


# ---------------------------------------------------------------------------
# the field context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadClasses:
    p: int
    squares: tuple[int, ...]
    nonsquares: tuple[int, ...]


def quad_classes(p: int) -> QuadClasses:
    """Non-zero squares and non-squares of GF(p)."""
    if p % 2 == 0 or not is_prime(p):
        raise FieldError(f"p={p} is not an odd prime")
    squares = sorted({a * a % p for a in range(1, p)})
    euler = [s for s in range(1, p) if pow(s, (p - 1) // 2, p) == 1]
    assert squares == euler
    nonsquares = [t for t in range(1, p) if t not in set(squares)]
    return QuadClasses(p, tuple(squares), tuple(nonsquares))


class FieldCtx:
    """GF(p^n) with a fixed polynomial basis and primitive element.

    Use :func:`make_field` rather than constructing directly.
    """

    def __init__(self, p: int, n: int, modulus: tuple[int, ...], generator: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = tuple(modulus)
        self.powers = p ** np.arange(n, dtype=np.int64)
        ids = np.arange(self.q, dtype=np.int64)
        self.digits = (ids[:, None] // self.powers[None, :]) % p
        self.generator = self.pack(np.asarray(generator, dtype=np.int64))
        self.exp: np.ndarray | None = None
        self.log: np.ndarray | None = None
        if self.q <= LOG_TABLE_LIMIT:
            self._build_log_tables()
        self.neg_table = self.pack((-self.digits) % p)
        self.trace_table = self._build_trace_table()
        basis = self.powers
        self.trace_form = self.trace_table[self.mul(basis[:, None], basis[None, :])]

    # -- construction helpers ------------------------------------------------
    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        red = _poly_mod(prod, list(self.modulus), self.p)
        return self.pack(np.asarray(red + [0] * (self.n - len(red)), dtype=np.int64))

    def _build_log_tables(self) -> None:
        q = self.q
        exp = np.zeros(q - 1, dtype=np.int64)
        logt = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            if logt[x] >= 0:
                raise FieldError("generator is not primitive")
            exp[i] = x
            logt[x] = i
            x = self._mul_poly(x, self.generator)
        if x != 1:
            raise FieldError("generator is not primitive")
        self.exp, self.log = exp, logt

    def _build_trace_table(self) -> np.ndarray:
        ids = np.arange(self.q, dtype=np.int64)
        acc = np.zeros(self.q, dtype=np.int64)
        for i in range(self.n):
            acc = self.add(acc, self.frobenius(ids, i))
        if np.any(acc >= self.p):
            raise FieldError("trace left the prime field; modulus is bad")
        return acc

    # -- encoding ------------------------------------------------------------
    @property
    def key(self) -> tuple:
        return (self.p, self.n, self.modulus)

    def pack(self, digits: np.ndarray) -> np.ndarray | int:
        out = np.asarray(digits, dtype=np.int64) @ self.powers
        return int(out) if np.ndim(out) == 0 else out

    def coeffs(self, x: int) -> list[int]:
        return [int(c) for c in self.digits[int(x)]]

    def element(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx.key != self.key:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return FieldElem(self, parse_element(self, value))
        if isinstance(value, (list, tuple)):
            return FieldElem(self, self.pack(np.asarray(value)))
        value = int(value)
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element ID of GF({self.p}^{self.n})")
        return FieldElem(self, value)

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={self.modulus})"

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        return self.pack((self.digits[a] + self.digits[b]) % self.p)

    def neg(self, a):
        return self._out(self.neg_table[a])

    def sub(self, a, b):
        return self.pack((self.digits[a] - self.digits[b]) % self.p)

    def scale(self, c: int, a):
        """Multiply by a prime-field scalar."""
        return self.pack((c * self.digits[a]) % self.p)

    def mul(self, a, b):
        if self.log is None:
            if np.ndim(a) or np.ndim(b):
                fn = np.vectorize(self._mul_poly, otypes=[np.int64])
                return fn(a, b)
            return self._mul_poly(a, b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return self._out(np.where((a == 0) | (b == 0), 0, r))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._out(self.exp[(-self.log[a]) % (self.q - 1)])

    def pow(self, a, e: int):
        """``a**e``; exponents are reduced mod ``q - 1`` on non-zero bases."""
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e == 0:
            return self._out(np.ones_like(a))
        if e < 0:
            a = np.asarray(self.inv(a))
            e = -e
        r = self.exp[(self.log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, r))

    def frobenius(self, a, i: int = 1):
        return self.pow(a, self.p ** (i % self.n))

    # -- traces --------------------------------------------------------------
    def abs_trace(self, x):
        return self._out(self.trace_table[x])

    def rel_trace(self, x, m: int):
        """Trace from GF(p^n) onto the subfield GF(p^m)."""
        if m < 1 or self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        acc = np.zeros(np.shape(x), dtype=np.int64)
        for i in range(self.n // m):
            acc = self.add(acc, self.frobenius(x, m * i))
        return self._out(acc)

    def sub_trace(self, y, m: int):
        """Absolute trace of ``y`` computed inside the subfield GF(p^m)."""
        if m < 1 or self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        if np.any(self.frobenius(y, m) != np.asarray(y)):
            raise FieldError(f"element is not in GF({self.p}^{m})")
        acc = np.zeros(np.shape(y), dtype=np.int64)
        for i in range(m):
            acc = self.add(acc, self.frobenius(y, i))
        return self._out(acc)

    def subfield(self, m: int) -> np.ndarray:
        """Sorted IDs of the subfield GF(p^m)."""
        if m < 1 or self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        step = (self.q - 1) // (self.p**m - 1)
        return np.sort(np.concatenate([[0], self.exp[::step]]))

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)


@dataclass(frozen=True)
class FieldElem:
    ctx: FieldCtx
    id: int

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.id)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx.key != self.ctx.key:
                raise FieldError("mixed field contexts")
            return other.id
        if isinstance(other, int):
            return self.ctx.element(other % self.ctx.p).id
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.id, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.id, self._other(other)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.id))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.id, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * FieldElem(self.ctx, self.ctx.inv(self._other(other)))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.id, e))

    def inv(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.id))

    def trace(self) -> int:
        return self.ctx.abs_trace(self.id)

    def __int__(self) -> int:
        return self.id

    def __repr__(self) -> str:
        return f"FieldElem({format_element(self.ctx, self.id)})"


def parse_element(ctx: FieldCtx, text: str) -> int:
    """Parse a base-p digit string, most significant digit first."""
    text = text.strip()
    if not text or any(not ch.isdigit() or int(ch) >= ctx.p for ch in text):
        raise FieldError(f"{text!r} is not a base-{ctx.p} digit string")
    value = int(text, ctx.p)
    if value >= ctx.q:
        raise FieldError(f"{text!r} has more than {ctx.n} digits")
    return value


def format_element(ctx: FieldCtx, x: int) -> str:
    digits = ctx.coeffs(x)
    return "".join(str(d) for d in reversed(digits)).lstrip("0") or "0"


def make_field(p: int, n: int, modulus=None) -> FieldCtx:
    """Build a validated GF(p^n) context.

    Without ``modulus`` the pinned Conway polynomial is used; degree-1
    fields default to ``x - g`` with ``g`` the least primitive root.
    """
    if not isinstance(p, (int, np.integer)) or p % 2 == 0 or not is_prime(int(p)):
        raise FieldError(f"p={p} must be an odd prime")
    if n < 1:
        raise FieldError(f"extension degree must be >= 1, got {n}")
    p, n = int(p), int(n)
    if modulus is None:
        pinned = load_constants().get((p, n))
        if pinned is not None:
            modulus, generator = pinned
        elif n == 1:
            g = _least_primitive_root(p)
            modulus, generator = ((-g) % p, 1), (g,)
        else:
            log.info("no pinned modulus for GF(%d^%d); searching", p, n)
            modulus, generator = _search_primitive_modulus(p, n)
        return FieldCtx(p, n, modulus, generator)

    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != n + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {n}")
    if not is_irreducible(list(modulus), p):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    generator = _find_generator(p, n, modulus)
    return FieldCtx(p, n, modulus, generator)


def _find_generator(p: int, n: int, modulus: tuple[int, ...]) -> tuple[int, ...]:
    order = p**n - 1
    for x in range(1, p**n):
        coeffs = [(x // p**i) % p for i in range(n)]
        if _has_order(_trim(list(coeffs)), list(modulus), p, order):
            return tuple(coeffs)
    raise FieldError("no primitive element found")


def multiplicative_order(ctx: FieldCtx, x: int) -> int:
    """Order of ``x`` by repeated multiplication; a slow test oracle."""
    if x == 0:
        raise ZeroDivisionError("zero has no multiplicative order")
    y, k = x, 1
    while y != 1:
        y = ctx._mul_poly(y, x)
        k += 1
    return k


__all__ = [
    "FieldCtx", "FieldElem", "FieldError", "QuadClasses", "format_element",
    "is_irreducible", "is_prime", "load_constants", "make_field", "multiplicative_order",
    "parse_element", "prime_factors", "quad_classes",
]
