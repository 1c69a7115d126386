"""Exact arithmetic in Z[zeta_p].

A :class:`CycInt` stores coordinates in the power basis
``1, zeta, ..., zeta^(p-2)``; ``zeta^(p-1)`` is rewritten as
``-(1 + zeta + ... + zeta^(p-2))``.  With that basis two values are equal
exactly when their coefficient tuples are equal.

The module also carries a few vectorised helpers that work on integer
arrays whose last axis holds these coordinates; the group-ring code uses
them to avoid per-element Python objects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def canonical(full) -> tuple[int, ...]:
    """Reduce a length-p coefficient vector (basis ``zeta^0..zeta^(p-1)``)."""
    top = full[-1]
    return tuple(int(c) - int(top) for c in full[:-1])


@dataclass(frozen=True)
class CycInt:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ValueError(f"need {self.p - 1} coefficients for p={self.p}")

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def integer(cls, p: int, c: int) -> "CycInt":
        return cls(p, (int(c),) + (0,) * (p - 2))

    @classmethod
    def from_full(cls, p: int, full) -> "CycInt":
        """From coefficients on ``zeta^0..zeta^(p-1)`` (any integers)."""
        if len(full) != p:
            raise ValueError(f"need {p} coefficients")
        return cls(p, canonical(full))

    from_counts = from_full

    # -- ring operations -----------------------------------------------------
    def _check(self, other: "CycInt") -> None:
        if not isinstance(other, CycInt):
            raise TypeError(f"cannot combine CycInt with {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"mixed p: {self.p} and {other.p}")

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, (int, np.integer)):
            return CycInt.integer(self.p, int(other))
        self._check(other)
        return other

    def __add__(self, other) -> "CycInt":
        other = self._coerce(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "CycInt":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycInt":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CycInt":
        if isinstance(other, (int, np.integer)):
            return self.scalar_mul(int(other))
        self._check(other)
        p = self.p
        # multiply modulo x^p - 1, then rewrite zeta^(p-1)
        full = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        full[(i + j) % p] += a * b
        return CycInt(p, canonical(full))

    __rmul__ = __mul__

    def scalar_mul(self, c: int) -> "CycInt":
        return CycInt(self.p, tuple(c * a for a in self.coeffs))

    def __pow__(self, e: int) -> "CycInt":
        if e < 0:
            raise ValueError("negative powers are not supported")
        out, base = CycInt.integer(self.p, 1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "CycInt":
        """Complex conjugation, ``zeta -> zeta^-1``."""
        p = self.p
        full = [0] * p
        for i, a in enumerate(self.coeffs):
            full[(-i) % p] += a
        return CycInt(p, canonical(full))

    def norm_squared(self) -> "CycInt":
        return self * self.conj()

    # -- recognisers ---------------------------------------------------------
    def as_integer(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*z^{i}")
        return f"CycInt(p={self.p}: {' + '.join(terms) or '0'})"


def root_power(p: int, j: int) -> CycInt:
    """``zeta_p^j`` in canonical form."""
    full = [0] * p
    full[j % p] = 1
    return CycInt(p, canonical(full))


def match_scaled_root(z: CycInt, c: int) -> tuple[int, int] | None:
    """Return ``(s, j)`` with ``z == s * c * zeta^j``, ``s = +-1``, if any."""
    if c <= 0:
        raise ValueError("scale must be positive")
    a = z.coeffs
    p = z.p
    nonzero = [i for i, x in enumerate(a) if x]
    if len(nonzero) == 1 and abs(a[nonzero[0]]) == c:
        i = nonzero[0]
        return (1 if a[i] > 0 else -1, i)
    # s*c*zeta^(p-1) has every coordinate equal to -s*c
    if a and all(x == a[0] for x in a) and abs(a[0]) == c:
        return (-1 if a[0] > 0 else 1, p - 1)
    return None


# ---------------------------------------------------------------------------
# vectorised helpers on (..., p-1) integer arrays
# ---------------------------------------------------------------------------

def rows_from_counts(counts: np.ndarray) -> np.ndarray:
    """``(..., p)`` coefficient arrays on ``zeta^0..zeta^(p-1)`` to canonical rows."""
    counts = np.asarray(counts, dtype=np.int64)
    return counts[..., :-1] - counts[..., -1:]


def rows_mul(u: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Multiply canonical rows elementwise; ``u`` broadcasts against ``rows``."""
    u = np.asarray(u, dtype=np.int64)
    rows = np.asarray(rows, dtype=np.int64)
    m = u.shape[-1]
    p = m + 1
    shape = np.broadcast_shapes(u.shape[:-1], rows.shape[:-1])
    full = np.zeros(shape + (p,), dtype=np.int64)
    for i in range(m):
        ui = u[..., i : i + 1]
        if not np.any(ui):
            continue
        for j in range(m):
            full[..., (i + j) % p] += (ui * rows[..., j : j + 1])[..., 0]
    return rows_from_counts(full)


def rows_conj(rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    m = rows.shape[-1]
    p = m + 1
    full = np.zeros(rows.shape[:-1] + (p,), dtype=np.int64)
    for i in range(m):
        full[..., (-i) % p] += rows[..., i]
    return rows_from_counts(full)


def rows_root_powers(p: int, exponents: np.ndarray) -> np.ndarray:
    """Canonical rows of ``zeta^e`` for an integer array of exponents."""
    e = np.asarray(exponents, dtype=np.int64) % p
    full = np.zeros(e.shape + (p,), dtype=np.int64)
    np.put_along_axis(full, e[..., None], 1, axis=-1)
    return rows_from_counts(full)


def to_cycint(p: int, row) -> CycInt:
    return CycInt(p, tuple(int(c) for c in row))
