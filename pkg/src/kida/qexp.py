"""Exact q-expansion arithmetic and Fourier-coefficient sources.

Coefficient sources: the weight-12 level-1 cusp form (eta-product),
elliptic curves over Q via naive point counting, and user tables of
prime-indexed eigenvalues.  Only forms with rational-integer
coefficients are supported natively, so reduction "mod pi" is reduction
mod p throughout.  Twists by Dirichlet characters land in a minimal
exact root-of-unity model (CycValue); nothing is ever a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import arith, chargroup
from .errors import (BadReduction, BoundExceeded, MissingCoefficient,
                     PrecisionExceeded, RamifiedLevel, SpecParseError)

DEFAULT_PRECISION = 2000
EC_PRIME_BOUND = 100_000


# -- truncated integer power series -------------------------------------

@dataclass(frozen=True)
class PowerSeries:
    """Cusp-form style q-expansion: coefficients of q^1 .. q^B."""

    coefficients: tuple[int, ...]

    @property
    def precision(self) -> int:
        return len(self.coefficients)

    def coefficient(self, n: int) -> int:
        if not 1 <= n <= self.precision:
            raise PrecisionExceeded(f"coefficient {n} beyond precision "
                                    f"{self.precision}")
        return self.coefficients[n - 1]

    def add(self, other: "PowerSeries") -> "PowerSeries":
        B = min(self.precision, other.precision)
        return PowerSeries(tuple(a + b for a, b in
                                 zip(self.coefficients[:B],
                                     other.coefficients[:B])))

    def mul(self, other: "PowerSeries") -> "PowerSeries":
        """Truncated product; both factors start at q^1."""
        B = min(self.precision, other.precision)
        a, b = self.coefficients, other.coefficients
        out = [0] * B
        for i in range(1, B):
            ai = a[i - 1]
            if not ai:
                continue
            for j in range(1, B - i + 1):
                out[i + j - 1] += ai * b[j - 1]
        return PowerSeries(tuple(out))


def _pentagonal_terms(bound: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of Euler's series sum (-1)^k q^(k(3k+1)/2)."""
    terms = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        s = -1 if k % 2 else 1
        added = False
        if e1 <= bound:
            terms.append((e1, s))
            added = True
        if e2 <= bound:
            terms.append((e2, s))
            added = True
        if not added:
            return sorted(terms)
        k += 1


@lru_cache(maxsize=8)
def _eta24_coefficients(B: int) -> tuple[int, ...]:
    """Coefficients of the 24th power of the pentagonal series up to q^(B-1).

    24 successive truncated multiplications by the (sparse) pentagonal
    series; exact integers throughout.  After the q-shift, entry n-1 is
    the n-th Fourier coefficient of the weight-12 level-1 cusp form.
    """
    pent = _pentagonal_terms(B - 1)
    cur = [0] * B
    cur[0] = 1
    for _ in range(24):
        new = [0] * B
        for off, s in pent:
            if s > 0:
                for n in range(off, B):
                    new[n] += cur[n - off]
            else:
                for n in range(off, B):
                    new[n] -= cur[n - off]
        cur = new
    return tuple(cur)


def delta_qexp(precision: int = DEFAULT_PRECISION) -> PowerSeries:
    """q-expansion q * prod (1-q^n)^24 to the given precision."""
    return PowerSeries(_eta24_coefficients(precision))


def tau(n: int, precision: int | None = None) -> int:
    """n-th coefficient of the eta-product, exact."""
    budget = DEFAULT_PRECISION if precision is None else precision
    if n < 1 or n > budget:
        raise PrecisionExceeded(f"tau({n}) beyond precision budget {budget}")
    return _eta24_coefficients(budget)[n - 1]


# -- elliptic curves over Q ---------------------------------------------

@dataclass(frozen=True)
class EllipticCurve:
    """Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    def b_invariants(self) -> tuple[int, int, int, int]:
        b2 = self.a1 ** 2 + 4 * self.a2
        b4 = 2 * self.a4 + self.a1 * self.a3
        b6 = self.a3 ** 2 + 4 * self.a6
        b8 = (self.a1 ** 2 * self.a6 + 4 * self.a2 * self.a6
              - self.a1 * self.a3 * self.a4 + self.a2 * self.a3 ** 2
              - self.a4 ** 2)
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        return (-b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2
                + 9 * b2 * b4 * b6)

    def bad_primes(self) -> list[int]:
        return [p for p, _ in arith.factor(abs(self.discriminant()))]

    def count_points(self, ell: int) -> int:
        """#E(F_ell) including the point at infinity, good reduction only."""
        if ell > EC_PRIME_BOUND:
            raise BoundExceeded(f"prime {ell} beyond bound {EC_PRIME_BOUND}")
        if self.discriminant() % ell == 0:
            raise BadReduction(f"prime {ell} divides the discriminant")
        if ell == 2:
            cnt = 1
            for x in range(2):
                for y in range(2):
                    if (y * y + self.a1 * x * y + self.a3 * y
                            - (x ** 3 + self.a2 * x * x + self.a4 * x
                               + self.a6)) % 2 == 0:
                        cnt += 1
            return cnt
        # Complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        b2, b4, b6, _ = self.b_invariants()
        square = bytearray(ell)
        for r in range(ell // 2 + 1):
            square[r * r % ell] = 1
        chi_sum = 0
        for x in range(ell):
            v = (4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6) % ell
            if v:
                chi_sum += 1 if square[v] else -1
        return ell + 1 + chi_sum

    def ap(self, ell: int) -> int:
        return ell + 1 - self.count_points(ell)


def ec_ap(curve: EllipticCurve, ell: int) -> int:
    """Trace of Frobenius a_ell = ell + 1 - #E(F_ell); |a_ell| <= 2 sqrt(ell)."""
    return curve.ap(ell)


# -- coefficient tables --------------------------------------------------

@dataclass(frozen=True)
class CoefficientTable:
    weight: int
    level: int
    ap: dict[int, int] = field(hash=False)

    def __hash__(self):
        return hash((self.weight, self.level,
                     tuple(sorted(self.ap.items()))))


def parse_table(text: str) -> CoefficientTable:
    """Parse the table file format: header ``weight k level N`` then
    one ``ell a_ell`` record per line; ``#`` starts a comment."""
    header = None
    ap: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if (len(parts) != 4 or parts[0] != "weight"
                    or parts[2] != "level"):
                raise SpecParseError(
                    f"line {lineno}: expected header 'weight k level N'")
            header = (int(parts[1]), int(parts[3]))
            continue
        if len(parts) != 2:
            raise SpecParseError(f"line {lineno}: expected 'ell a_ell'")
        ell, a = int(parts[0]), int(parts[1])
        if not arith.is_prime(ell):
            raise SpecParseError(f"line {lineno}: index {ell} is not prime")
        if ell in ap:
            raise SpecParseError(f"line {lineno}: duplicate entry for {ell}")
        ap[ell] = a
    if header is None:
        raise SpecParseError("missing 'weight k level N' header")
    return CoefficientTable(weight=header[0], level=header[1], ap=ap)


def load_table(path) -> CoefficientTable:
    with open(path, "r", encoding="ascii") as fh:
        return parse_table(fh.read())


# -- modular form data ----------------------------------------------------

class _DeltaSource:
    def __repr__(self):
        return "Delta"


DELTA_SOURCE = _DeltaSource()


@dataclass(frozen=True)
class ModularFormData:
    """Weight, level, nebentypus and an exact coefficient source.

    nebentypus: None for the trivial character, else a dict of values
    mod p keyed by prime (only reductions mod p are ever consumed).
    """

    weight: int
    level: int
    source: object
    nebentypus: dict[int, int] | None = None
    ordinary_at_p: bool | None = None

    def __post_init__(self):
        if self.weight < 2 or self.level < 1:
            raise ValueError("need weight >= 2 and level >= 1")
        if isinstance(self.source, _DeltaSource):
            if (self.weight, self.level) != (12, 1):
                raise ValueError("eta-product source forces weight 12, level 1")
        if isinstance(self.source, EllipticCurve) and self.weight != 2:
            raise ValueError("elliptic-curve source forces weight 2")

    def describe(self) -> str:
        if isinstance(self.source, _DeltaSource):
            return "delta"
        if isinstance(self.source, EllipticCurve):
            e = self.source
            return (f"ec:a1={e.a1},a2={e.a2},a3={e.a3},"
                    f"a4={e.a4},a6={e.a6}")
        return f"table:weight={self.weight},level={self.level}"

    # coefficient access ------------------------------------------------

    def a_prime(self, ell: int, precision: int | None = None) -> int:
        """Exact eigenvalue a_ell for prime ell."""
        if isinstance(self.source, _DeltaSource):
            return tau(ell, precision)
        if isinstance(self.source, EllipticCurve):
            if self.source.discriminant() % ell == 0:
                raise MissingCoefficient(
                    f"a_{ell} at a bad-reduction prime needs a table entry")
            return self.source.ap(ell)
        if isinstance(self.source, CoefficientTable):
            try:
                return self.source.ap[ell]
            except KeyError:
                raise MissingCoefficient(f"table has no entry for {ell}")
        raise TypeError(f"unknown source {self.source!r}")

    def epsilon_mod(self, ell: int, p: int) -> int:
        """Nebentypus value at ell reduced mod p (trivial character: 1)."""
        if self.nebentypus is None:
            return 1 % p
        try:
            return self.nebentypus[ell] % p
        except KeyError:
            raise MissingCoefficient(f"nebentypus table has no value at {ell}")

    def a_coefficient(self, n: int, precision: int | None = None) -> int:
        """a_n for general n via multiplicativity and the Hecke recursion.

        Prime-power recursion a_{l^(r+1)} = a_l a_{l^r} - l^(k-1) eps(l)
        a_{l^(r-1)} needs the exact nebentypus value, so composite indices
        with a nontrivial nebentypus are rejected.
        """
        if n < 1:
            raise ValueError("coefficient index must be >= 1")
        if isinstance(self.source, _DeltaSource):
            return tau(n, precision)
        if n == 1:
            return 1
        fac = arith.factor(n)
        if any(e > 1 for _, e in fac) and self.nebentypus is not None:
            raise MissingCoefficient(
                "exact prime-power recursion needs a trivial nebentypus")
        out = 1
        for ell, e in fac:
            a1 = self.a_prime(ell, precision)
            if e == 1:
                out *= a1
                continue
            if self.level % ell == 0:
                out *= a1 ** e
                continue
            c = ell ** (self.weight - 1)
            prev, cur = 1, a1
            for _ in range(e - 1):
                prev, cur = cur, a1 * cur - c * prev
            out *= cur
        return out


def delta_form() -> ModularFormData:
    return ModularFormData(weight=12, level=1, source=DELTA_SOURCE)


def ec_form(curve: EllipticCurve) -> ModularFormData:
    level = 1
    for p in curve.bad_primes():
        level *= p
    return ModularFormData(weight=2, level=level, source=curve)


def table_form(table: CoefficientTable) -> ModularFormData:
    return ModularFormData(weight=table.weight, level=table.level,
                           source=table)


def frobenius_data(f: ModularFormData, ell: int, p: int,
                   precision: int | None = None) -> tuple[int, int]:
    """(a_ell mod p, ell^(k-1) eps(ell) mod p) for unramified primes."""
    if not arith.is_prime(ell) or not arith.is_prime(p):
        raise ValueError("ell and p must be prime")
    if ell == p:
        raise ValueError("Frobenius data needs ell != p")
    if f.level % ell == 0:
        raise RamifiedLevel(f"{ell} divides the level {f.level}; "
                            "supply a local type instead")
    a = f.a_prime(ell, precision) % p
    c = (pow(ell, f.weight - 1, p) * f.epsilon_mod(ell, p)) % p
    return a, c


# -- Dirichlet characters and twists --------------------------------------

@dataclass(frozen=True)
class CycValue:
    """Exact scalar a * zeta_m^k (zeta_m = primitive m-th root of unity).

    Normalized so that m is minimal: gcd(k, m) is cancelled, m = 1 for
    rational values and the sign of zeta_2 is folded into ``a``.
    """

    a: int
    k: int = 0
    m: int = 1

    def __post_init__(self):
        a, k, m = self.a, self.k, self.m
        if m < 1:
            raise ValueError("root order must be >= 1")
        if a == 0:
            k, m = 0, 1
        else:
            k %= m
            if k == 0:
                m = 1
            else:
                g = math.gcd(k, m)
                k //= g
                m //= g
            if m == 2:          # zeta_2 = -1 folds into the sign
                a, k, m = -a, 0, 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "m", m)

    def is_zero(self) -> bool:
        return self.a == 0

    def is_rational(self) -> bool:
        return self.m == 1

    def rational(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational integer")
        return self.a

    def __mul__(self, other):
        if isinstance(other, int):
            return CycValue(self.a * other, self.k, self.m)
        m = self.m * other.m // math.gcd(self.m, other.m)
        k = self.k * (m // self.m) + other.k * (m // other.m)
        return CycValue(self.a * other.a, k, m)

    __rmul__ = __mul__

    def conjugate(self) -> "CycValue":
        return CycValue(self.a, -self.k % self.m if self.m > 1 else 0, self.m)

    def __repr__(self):
        if self.m == 1:
            return f"{self.a}"
        return f"{self.a}*zeta{self.m}^{self.k}"


class DirichletCharacter:
    """Dirichlet character presented modulo N via the unit group's
    invariant-factor coordinates; evaluation uses the primitive character
    attached to its conductor."""

    def __init__(self, modulus: int, character: chargroup.Character):
        self.modulus = modulus
        self.group = arith.unit_group(modulus)
        if (character.group.invariant_factors
                != self.group.invariant_factors):
            raise ValueError("character group does not match (Z/N)^*")
        self.character = character
        self.conductor = self._conductor()

    @classmethod
    def from_exponents(cls, modulus: int, exponents) -> "DirichletCharacter":
        U = arith.unit_group(modulus)
        G = chargroup.FiniteAbelianGroup(U.invariant_factors)
        return cls(modulus, chargroup.Character(G, tuple(exponents)))

    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletCharacter":
        U = arith.unit_group(modulus)
        return cls.from_exponents(modulus, (0,) * len(U.invariant_factors))

    def _value_log_unit(self, y: int) -> int:
        return self.character.value_log(self.group.log(y))

    def _conductor(self) -> int:
        """Smallest f | N such that the character factors through (Z/f)^*."""
        cond = 1
        E = (self.character.group.exponent
             if self.character.group.rank else 1)
        for q, e in arith.factor(self.modulus):
            qe = q ** e
            comps = [(i, c) for i, c in enumerate(self.group._components)
                     if c.prime_power == qe]
            if not comps:
                continue  # q = 2, e = 1: no component, no contribution
            orders = []
            for i, c in comps:
                y = self.group._lift(i, c.gen_local)
                lg = self._value_log_unit(y)
                orders.append(E // math.gcd(E, lg) if lg else 1)
            if q != 2:
                o = orders[0]
                if o > 1:
                    cond *= q ** (1 + arith.padic_val(o, q))
            else:
                if e == 2:
                    if orders[0] > 1:
                        cond *= 4
                else:
                    o_sign, o_five = orders
                    if o_five > 1:
                        cond *= 2 ** (2 + arith.padic_val(o_five, 2))
                    elif o_sign > 1:
                        cond *= 4
        return cond

    def order(self) -> int:
        return self.character.order()

    def value(self, n: int) -> CycValue:
        """chi(n) in the exact root-of-unity model; 0 off the conductor."""
        if math.gcd(n, self.conductor) != 1:
            return CycValue(0)
        # Lift n to a unit mod N agreeing with n modulo the conductor.
        res, mods = [], []
        for q, e in arith.factor(self.modulus):
            qe = q ** e
            res.append(n % qe if self.conductor % q == 0 else 1)
            mods.append(qe)
        y = arith.crt(res, mods) if mods else 0
        if self.modulus == 1:
            return CycValue(1)
        lg = self._value_log_unit(y)
        E = self.character.group.exponent if self.character.group.rank else 1
        return CycValue(1, lg, E)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, self.character.inverse())

    def is_trivial(self) -> bool:
        return self.character.is_trivial()


@dataclass(frozen=True)
class TwistedForm:
    """Base form twisted by a Dirichlet character: a_n -> a_n * psi(n)."""

    base: ModularFormData
    psi: DirichletCharacter

    def coefficient(self, n: int, precision: int | None = None) -> CycValue:
        v = self.psi.value(n)
        if v.is_zero():
            return CycValue(0)
        return v * self.base.a_coefficient(n, precision)


def twist_coefficients(f: ModularFormData, psi: DirichletCharacter,
                       n: int, precision: int | None = None) -> CycValue:
    """a_n * psi(n) in the exact model; zero when n meets the conductor."""
    return TwistedForm(f, psi).coefficient(n, precision)
