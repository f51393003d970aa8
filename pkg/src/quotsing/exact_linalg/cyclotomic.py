"""Exact scalar arithmetic in cyclotomic fields Q(zeta_m).

A value is stored as its coordinate vector in the reduced power basis
1, z, ..., z^(phi(m)-1) of Q(zeta_m), where z = exp(2*pi*i/m) and phi is
Euler's totient.  Coefficients are exact rationals; there is no floating
point anywhere in this module.  Mixed-conductor operands are promoted to
the least common multiple conductor before arithmetic.

Equality is value equality (promote, then compare coordinates).  Hashing
goes through the canonical form at the minimal conductor containing the
value, so equal values hash equal even when built at different conductors.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Union

from ..errors import InputError, ShapeError

# Exact rational scalar type used throughout the package.  fractions.Fraction
# already keeps lowest terms with a positive denominator.
Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    """Ascending tuple of distinct prime factors of n >= 1."""
    if n < 1:
        raise InputError(f"prime_factors needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    phi = n
    for p in prime_factors(n):
        phi -= phi // p
    return phi


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    """Ascending tuple of positive divisors of n >= 1."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Exact division of integer polynomials; den must be monic here.
    num = list(num)
    deg_d = len(den) - 1
    if den[-1] != 1:
        raise InputError("internal polynomial division expects a monic divisor")
    quot = [0] * max(len(num) - deg_d, 0)
    for i in range(len(num) - 1, deg_d - 1, -1):
        c = num[i]
        if c:
            quot[i - deg_d] = c
            for j, dj in enumerate(den):
                num[i - deg_d + j] -= c * dj
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, low degree first, monic."""
    if m < 1:
        raise InputError(f"conductor must be >= 1, got {m}")
    # x^m - 1 divided by the product of Phi_d over proper divisors d of m.
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
        if rem != [0]:
            raise AssertionError(f"cyclotomic division left a remainder at m={m}")
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_rows(m: int) -> tuple[tuple[int, ...], ...]:
    """Row e is the reduced coordinate vector of z^e, for 0 <= e <= max(2*phi-2, m-1)."""
    phi = euler_phi(m)
    top = max(2 * phi - 2, m - 1)
    cyc = cyclotomic_polynomial(m)
    rows: list[tuple[int, ...]] = []
    for e in range(top + 1):
        if e < phi:
            rows.append(tuple(1 if i == e else 0 for i in range(phi)))
        else:
            prev = rows[e - 1]
            lead = prev[phi - 1]
            shifted = (0,) + prev[: phi - 1]
            rows.append(tuple(shifted[i] - lead * cyc[i] for i in range(phi)))
    return tuple(rows)


@lru_cache(maxsize=None)
def _promotion_rows(d: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Row e is the coordinate vector of zeta_d^e inside Q(zeta_m), for e < phi(d)."""
    if m % d != 0:
        raise InputError(f"cannot promote conductor {d} into {m}")
    step = m // d
    rows = _reduction_rows(m)
    return tuple(rows[(e * step) % m] for e in range(euler_phi(d)))


def _solve_in_subfield(
    coeffs: tuple[Fraction, ...], d: int, m: int
) -> Optional[tuple[Fraction, ...]]:
    """Coordinates of the value in Q(zeta_d), or None if it does not lie there."""
    cols = _promotion_rows(d, m)
    phi_m, phi_d = len(coeffs), len(cols)
    # Augmented system: phi_m equations, phi_d unknowns.
    rows = [
        [Fraction(cols[j][i]) for j in range(phi_d)] + [coeffs[i]]
        for i in range(phi_m)
    ]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(phi_d):
        pr = next((i for i in range(r, phi_m) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(phi_m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
    if any(rows[i][-1] for i in range(r, phi_m)):
        return None
    sol = [_ZERO] * phi_d
    for pr, pc in pivots:
        sol[pc] = rows[pr][-1]
    return tuple(sol)


_ScalarLike = Union["CyclotomicScalar", Fraction, int]


class CyclotomicScalar:
    """An element of Q(zeta_m) in the reduced power basis (see module docstring)."""

    __slots__ = ("conductor", "coeffs", "_canon", "_hashed", "_root")

    def __init__(self, conductor: int, coeffs: Iterable[Union[Fraction, int]]):
        cs = tuple(c if type(c) is Fraction else Fraction(c) for c in coeffs)
        if len(cs) != euler_phi(conductor):
            raise ShapeError(
                f"conductor {conductor} needs {euler_phi(conductor)} coefficients, "
                f"got {len(cs)}"
            )
        self.conductor = conductor
        self.coeffs = cs
        self._canon: Optional["CyclotomicScalar"] = None
        self._hashed: Optional[int] = None
        # memo (k, c) asserting self == c * zeta_conductor^k with c != 0; when
        # set, products, inverses and promotions skip polynomial arithmetic
        self._root: Optional[tuple[int, Fraction]] = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, q: Union[Fraction, int]) -> "CyclotomicScalar":
        s = cls(1, (Fraction(q),))
        if q:
            s._root = (0, s.coeffs[0])
        return s

    @classmethod
    def zero(cls) -> "CyclotomicScalar":
        return cls(1, (_ZERO,))

    @classmethod
    def one(cls) -> "CyclotomicScalar":
        s = cls(1, (_ONE,))
        s._root = (0, _ONE)
        return s

    @classmethod
    def root_of_unity(cls, m: int, k: int) -> "CyclotomicScalar":
        """zeta_m^k, stored at conductor m."""
        if m < 1:
            raise InputError(f"root_of_unity needs m >= 1, got {m}")
        k %= m
        s = cls(m, _reduction_rows(m)[k])
        s._root = (k, _ONE)
        return s

    @classmethod
    def _scaled_root(cls, m: int, k: int, c: Union[Fraction, int]) -> "CyclotomicScalar":
        # c * zeta_m^k with c != 0, built from the cached reduction rows
        k %= m
        row = _reduction_rows(m)[k]
        s = cls(m, row if c == 1 else tuple(c * x for x in row))
        s._root = (k, c if type(c) is Fraction else Fraction(c))
        return s

    @staticmethod
    def coerce(x: _ScalarLike) -> "CyclotomicScalar":
        if isinstance(x, CyclotomicScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return CyclotomicScalar.from_rational(x)
        raise InputError(f"cannot coerce {type(x).__name__} to a cyclotomic scalar")

    # -- conductor handling --------------------------------------------------

    def promote(self, m: int) -> "CyclotomicScalar":
        """The same value expressed at conductor m (self.conductor must divide m)."""
        if m == self.conductor:
            return self
        if self._root is not None:
            if m % self.conductor:
                raise InputError(f"cannot promote conductor {self.conductor} into {m}")
            k, c = self._root
            return CyclotomicScalar._scaled_root(m, k * (m // self.conductor), c)
        rows = _promotion_rows(self.conductor, m)
        acc = [_ZERO] * euler_phi(m)
        for e, c in enumerate(self.coeffs):
            if c:
                row = rows[e]
                for i, x in enumerate(row):
                    if x:
                        acc[i] += c * x
        return CyclotomicScalar(m, acc)

    @staticmethod
    def _canonical_scaled_root(m: int, e: int, c: Fraction) -> "CyclotomicScalar":
        # minimal-conductor form of c * zeta_m^e with c != 0
        e %= m
        if e == 0:
            return CyclotomicScalar(1, (c,))
        r = m // gcd(m, e)
        e2 = e // (m // r)
        if r % 4 == 2:
            # conductors congruent to 2 mod 4 are never minimal: -1 absorbs
            s = r // 2
            sign = -1 if e2 % 2 else 1
            e3 = (e2 * ((s + 1) // 2)) % s
            return CyclotomicScalar._scaled_root(s, e3, sign * c)
        return CyclotomicScalar._scaled_root(r, e2, c)

    def canonical(self) -> "CyclotomicScalar":
        """The value at its minimal conductor (unique representation across fields)."""
        if self._canon is not None:
            return self._canon
        m, coeffs = self.conductor, self.coeffs
        if m == 1:
            self._canon = self
            return self
        if self._root is not None:
            k, c = self._root
            canon = CyclotomicScalar._canonical_scaled_root(m, k, c)
            canon._canon = canon
            self._canon = canon
            return canon
        nonzero = [i for i, c in enumerate(coeffs) if c]
        canon: Optional[CyclotomicScalar] = None
        if all(i == 0 for i in nonzero):
            canon = CyclotomicScalar(1, (coeffs[0],))
        elif len(nonzero) == 1:
            canon = CyclotomicScalar._canonical_scaled_root(m, nonzero[0], coeffs[nonzero[0]])
        else:
            changed = True
            while changed and m > 1:
                changed = False
                for p in prime_factors(m):
                    sol = _solve_in_subfield(coeffs, m // p, m)
                    if sol is not None:
                        m, coeffs = m // p, sol
                        changed = True
                        break
            canon = CyclotomicScalar(m, coeffs)
        canon._canon = canon
        self._canon = canon
        return canon

    def canonical_key(self):
        c = self.canonical()
        return (c.conductor,) + c.coeffs

    def sort_key(self):
        """Deterministic total-order key, consistent across conductors."""
        return self.canonical_key()

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise InputError("value is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other: _ScalarLike):
        other = CyclotomicScalar.coerce(other)
        if self.conductor == other.conductor:
            return self.conductor, self, other
        m = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return m, self.promote(m), other.promote(m)

    def __add__(self, other: _ScalarLike) -> "CyclotomicScalar":
        m, a, b = self._pair(other)
        return CyclotomicScalar(m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other: _ScalarLike) -> "CyclotomicScalar":
        m, a, b = self._pair(other)
        return CyclotomicScalar(m, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other: _ScalarLike) -> "CyclotomicScalar":
        return CyclotomicScalar.coerce(other).__sub__(self)

    def __neg__(self) -> "CyclotomicScalar":
        out = CyclotomicScalar(self.conductor, tuple(-x for x in self.coeffs))
        if self._root is not None:
            out._root = (self._root[0], -self._root[1])
        return out

    def __mul__(self, other: _ScalarLike) -> "CyclotomicScalar":
        if isinstance(other, (int, Fraction)):
            out = CyclotomicScalar(self.conductor, tuple(c * other for c in self.coeffs))
            if self._root is not None and other:
                out._root = (self._root[0], self._root[1] * other)
            return out
        if isinstance(other, CyclotomicScalar):
            if other.conductor == 1:
                return self * other.coeffs[0]
            if self.conductor == 1:
                return other * self.coeffs[0]
            if self._root is not None and other._root is not None:
                # roots multiply by adding exponents at the joint conductor
                ka, ca = self._root
                kb, cb = other._root
                ma, mb = self.conductor, other.conductor
                m = ma * mb // gcd(ma, mb)
                return CyclotomicScalar._scaled_root(
                    m, ka * (m // ma) + kb * (m // mb), ca * cb
                )
        m, a, b = self._pair(other)
        phi = len(a.coeffs)
        raw = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[i + j] += x * y
        out = list(raw[:phi])
        rows = _reduction_rows(m)
        for e in range(phi, 2 * phi - 1):
            c = raw[e]
            if c:
                row = rows[e]
                for i, x in enumerate(row):
                    if x:
                        out[i] += c * x
        return CyclotomicScalar(m, out)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicScalar":
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic scalar")
        if self._root is not None:
            k, c = self._root
            return CyclotomicScalar._scaled_root(self.conductor, -k, 1 / c)
        if self.is_rational():
            return CyclotomicScalar.from_rational(1 / self.coeffs[0]).promote(1)
        m = self.conductor
        nonzero = [i for i, c in enumerate(self.coeffs) if c]
        if len(nonzero) == 1:
            # c * z^e inverts to (1/c) * z^(m-e) without any polynomial gcd
            e = nonzero[0]
            root = CyclotomicScalar.root_of_unity(m, (m - e) % m)
            return root * (1 / self.coeffs[e])
        modulus = [Fraction(c) for c in cyclotomic_polynomial(m)]
        old_r, r = list(self.coeffs), modulus
        old_s, s = [_ONE], [_ZERO]
        while any(r):
            q, rem = _poly_divmod_frac(old_r, r)
            old_r, r = r, rem
            old_s, s = s, _poly_sub(old_s, _poly_mul(q, s))
        # old_r is a nonzero constant since Phi_m is irreducible over Q.
        if len(_trim(old_r)) != 1:
            raise AssertionError("gcd with the cyclotomic polynomial was not constant")
        g = old_r[0]
        inv = [c / g for c in old_s]
        _, inv = _poly_divmod_frac(inv, modulus)
        phi = euler_phi(m)
        inv = inv + [_ZERO] * (phi - len(inv))
        return CyclotomicScalar(m, inv[:phi])

    def __truediv__(self, other: _ScalarLike) -> "CyclotomicScalar":
        other = CyclotomicScalar.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other: _ScalarLike) -> "CyclotomicScalar":
        return CyclotomicScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "CyclotomicScalar":
        if k < 0:
            return self.inverse() ** (-k)
        if self._root is not None:
            e, c = self._root
            return CyclotomicScalar._scaled_root(self.conductor, e * k, c**k)
        result = CyclotomicScalar.one().promote(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def galois(self, j: int) -> "CyclotomicScalar":
        """Image under the Galois automorphism zeta -> zeta^j (gcd(j, m) must be 1)."""
        m = self.conductor
        if gcd(j, m) != 1:
            raise InputError(f"galois exponent {j} is not a unit mod {m}")
        if self._root is not None:
            k, c = self._root
            return CyclotomicScalar._scaled_root(m, k * j, c)
        rows = _reduction_rows(m)
        acc = [_ZERO] * len(self.coeffs)
        for e, c in enumerate(self.coeffs):
            if c:
                row = rows[(e * j) % m]
                for i, x in enumerate(row):
                    if x:
                        acc[i] += c * x
        return CyclotomicScalar(m, acc)

    def conjugate(self) -> "CyclotomicScalar":
        """Complex conjugation, i.e. zeta -> zeta^(-1)."""
        m = self.conductor
        return self.galois(m - 1 if m > 1 else 1)

    # -- root-of-unity helpers -----------------------------------------------

    def order(self) -> Optional[int]:
        """Multiplicative order when the value is a root of unity, else None."""
        if self.is_zero():
            return None
        m = self.conductor
        if self._root is not None:
            k, c = self._root
            if c == 1:
                return m // gcd(m, k)
            if c == -1:
                # -zeta_m^k = zeta_2m^(m + 2k)
                return 2 * m // gcd(2 * m, m + 2 * k)
            return None  # rational torsion in Q(zeta_m)* is just {1, -1}
        cap = m if m % 2 == 0 else 2 * m  # torsion of Q(zeta_m)* is <-zeta_m>
        if not (self**cap).is_one():
            return None
        for d in divisors(cap):
            if (self**d).is_one():
                return d
        raise AssertionError("unreachable: order divides the torsion exponent")

    def as_root_power(self) -> Optional[tuple[int, int]]:
        """(M, t) with the value equal to zeta_M^t, or None if not a root of unity."""
        m = self.conductor
        cap = m if m % 2 == 0 else 2 * m
        if self._root is not None:
            k, c = self._root
            if c == 1:
                return (cap, (k * (cap // m)) % cap)
            if c == -1:
                return (cap, (cap // 2 + k * (cap // m)) % cap)
            return None
        r = self.order()
        if r is None:
            return None
        step = cap // r
        for s in range(r):
            if self == CyclotomicScalar.root_of_unity(cap, step * s):
                return (cap, step * s)
        raise AssertionError("unreachable: root of unity must be a power of zeta_cap")

    # -- dunder plumbing -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        _, a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self._hashed is None:
            c = self.canonical()
            if c.conductor == 1:
                self._hashed = hash(c.coeffs[0])
            else:
                self._hashed = hash((c.conductor,) + c.coeffs)
        return self._hashed

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        return f"Cyc[{self.conductor}]({body})"


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [_ZERO] * (n - len(a))
    b = b + [_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_divmod_frac(
    num: list[Fraction], den: list[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    den = _trim(list(den))
    deg_d = len(den) - 1
    lead = den[-1]
    if not lead:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [_ZERO] * max(len(num) - deg_d, 1)
    for i in range(len(num) - 1, deg_d - 1, -1):
        c = num[i]
        if c:
            q = c / lead
            quot[i - deg_d] = q
            for j, dj in enumerate(den):
                num[i - deg_d + j] -= q * dj
    return quot, _trim(num)


def discrete_root_exponent(u: CyclotomicScalar, r: int) -> Optional[int]:
    """The exponent a in [0, r) with u == zeta_r^a, or None if there is none."""
    if u._root is not None:
        rp = u.as_root_power()
        if rp is None:
            return None
        cap, t = rp
        g = gcd(cap, t)
        order, reduced = cap // g, t // g
        if r % order:
            return None
        return reduced * (r // order) % r
    return _root_exponent_search(u, r)


@lru_cache(maxsize=None)
def _root_exponent_search(u: CyclotomicScalar, r: int) -> Optional[int]:
    for a in range(r):
        if u == CyclotomicScalar.root_of_unity(r, a):
            return a
    return None
