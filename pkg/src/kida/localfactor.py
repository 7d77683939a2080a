"""Local types at primes ell != p and their multiplicity bookkeeping.

For a two-dimensional representation V of the absolute Galois group of a
local tower field L (ell != p), m(V) counts the trivial constituents of
the Galois invariants of the inertia coinvariants.  A finite p-extension
of L is cyclic and totally ramified, so twisting characters of the local
Galois group form a cyclic p-group; the extension multiplicity

    m(L'/L, V) = sum over chi of (m(V) - m(V_chi))

is what the global transition formula consumes, and it matches the h
tables case by case (unramified characters restrict trivially iff they
are trivial mod p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (GenericUnsupported, IncoherentGenericData,
                     SpecParseError)


@dataclass(frozen=True)
class LocalCharData:
    """One character of the local Galois group, by the bits that matter.

    ``becomes_unramified_over_extension`` says whether the character is
    killed by restriction to the (context) extension; it is vacuous for
    unramified characters.  ``order_on_inertia`` (1 if unramified) pins
    the exact level at which a ramified character dies and is required
    for coherent restriction in towers with more than one step.
    """

    ramified: bool
    trivial_mod_p: bool
    becomes_unramified_over_extension: bool = True
    order_on_inertia: int | None = None

    def __post_init__(self):
        if not self.ramified:
            object.__setattr__(self, "becomes_unramified_over_extension", True)
            object.__setattr__(self, "order_on_inertia", 1)
        else:
            o = self.order_on_inertia
            if o is not None and o < 2:
                raise ValueError("ramified character needs order > 1 on inertia")

    def dies_over(self, degree: int) -> bool:
        """Whether restriction to the degree-``degree`` extension is unramified."""
        if not self.ramified:
            return True
        if self.order_on_inertia is not None:
            return degree % self.order_on_inertia == 0
        return self.becomes_unramified_over_extension

    def restricted(self, degree: int) -> "LocalCharData":
        """The same character over the degree-``degree`` extension."""
        if not self.ramified:
            return self
        if self.order_on_inertia is None:
            if self.becomes_unramified_over_extension:
                return LocalCharData(False, self.trivial_mod_p)
            raise IncoherentGenericData(
                "restricting a surviving ramified character needs "
                "order_on_inertia")
        new_order = self.order_on_inertia // math.gcd(self.order_on_inertia,
                                                      degree)
        if new_order == 1:
            return LocalCharData(False, self.trivial_mod_p)
        return LocalCharData(True, self.trivial_mod_p,
                             becomes_unramified_over_extension=False,
                             order_on_inertia=new_order)


@dataclass(frozen=True)
class UnramifiedPS:
    """Unramified principal series: Frobenius polynomial x^2 - a x + c mod p."""

    a: int
    c: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "c", self.c % self.p)


@dataclass(frozen=True)
class RamifiedPS:
    phi1: LocalCharData
    phi2: LocalCharData


@dataclass(frozen=True)
class Special:
    phi: LocalCharData


@dataclass(frozen=True)
class Supercuspidal:
    """Supercuspidal or extraordinary: contributes 0 through every path."""


@dataclass(frozen=True)
class Generic:
    """User-supplied m-values per character of the local cyclic p-group.

    ``m_values[j]`` is m(V_{chi_j}) for the character of exponent j of
    the cyclic group of order ``degree`` (j = 0 the trivial character);
    equivalently the multiplicity of chi_j in an explicit character
    multiset, which is what makes restriction in towers well defined.
    """

    degree: int
    m_values: tuple[int, ...]

    def __post_init__(self):
        if len(self.m_values) != self.degree:
            raise IncoherentGenericData(
                "generic data must cover every character of its group")
        if any(v < 0 for v in self.m_values):
            raise IncoherentGenericData("generic m-values must be >= 0")


LocalType = UnramifiedPS | RamifiedPS | Special | Supercuspidal | Generic


@dataclass(frozen=True)
class TwistCharacter:
    """Character of the cyclic twisting group, by exponent."""

    degree: int
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.degree)

    def is_trivial(self) -> bool:
        return self.exponent == 0

    def order(self) -> int:
        if self.exponent == 0:
            return 1
        return self.degree // math.gcd(self.exponent, self.degree)


TRIVIAL_TWIST = TwistCharacter(1, 0)


def _matching_exponent(phi: LocalCharData, degree: int) -> int | None:
    """Exponent of the unique twist chi with chi*phi unramified, if any.

    For unramified phi the match is the trivial twist.  For ramified phi
    that dies over the extension, phi's inertia character factors through
    the cyclic group, and exactly one twist cancels it; the labeling of
    that twist is a convention (sums over all twists are label-free).
    """
    if not phi.ramified:
        return 0
    if not phi.dies_over(degree):
        return None
    order = phi.order_on_inertia if phi.order_on_inertia else degree
    return degree // order if degree > 1 else None


def _m_char(phi: LocalCharData, chi: TwistCharacter, degree: int) -> int:
    """Multiplicity contribution of one character line under twist chi."""
    if not phi.trivial_mod_p:
        return 0
    match = _matching_exponent(phi, degree)
    if match is None:
        return 0
    return 1 if chi.exponent == match else 0


def m_single(V: LocalType, chi: TwistCharacter = TRIVIAL_TWIST) -> int:
    """m(V_chi): multiplicity of the trivial representation in the
    Galois invariants of the inertia coinvariants of the twist."""
    if isinstance(V, Generic):
        raise GenericUnsupported("generic types carry their m-values directly")
    if isinstance(V, Supercuspidal):
        return 0
    if isinstance(V, UnramifiedPS):
        if not chi.is_trivial():
            return 0    # ramified twist kills the coinvariants
        p = V.p
        if V.a == 2 % p and V.c == 1 % p:
            return 2    # both Frobenius eigenvalues trivial mod p
        if V.a == (V.c + 1) % p:
            return 1    # exactly one trivial eigenvalue
        return 0
    if isinstance(V, Special):
        return _m_char(V.phi, chi, chi.degree)
    if isinstance(V, RamifiedPS):
        return (_m_char(V.phi1, chi, chi.degree)
                + _m_char(V.phi2, chi, chi.degree))
    raise TypeError(f"unknown local type {V!r}")


def _generic_m_over(V: Generic, degree: int) -> list[int]:
    """m-values of V for the characters of the degree-``degree`` quotient."""
    if V.degree % degree:
        raise IncoherentGenericData(
            f"generic data over degree {V.degree} cannot serve degree {degree}")
    step = V.degree // degree
    return [V.m_values[step * i] for i in range(degree)]


def m_extension(V: LocalType, local_degree: int) -> int:
    """m(L'/L, V) = sum over the local_degree twist characters of
    (m(V) - m(V_chi))."""
    if local_degree < 1:
        raise ValueError("local degree must be >= 1")
    if isinstance(V, Generic):
        vals = _generic_m_over(V, local_degree)
        return sum(vals[0] - v for v in vals)
    base = m_single(V, TwistCharacter(local_degree, 0))
    return sum(base - m_single(V, TwistCharacter(local_degree, j))
               for j in range(local_degree))


def h_char(phi: LocalCharData, e: int) -> int:
    """Per-character table: -1 / 0 / e-1."""
    if e < 1:
        raise ValueError("ramification index must be >= 1")
    if not phi.trivial_mod_p:
        return 0
    if not phi.ramified:
        return e - 1
    return -1 if phi.dies_over(e) else 0


def h_v(V: LocalType, e: int) -> int:
    """Per-place table value for ramification index e."""
    if e < 1:
        raise ValueError("ramification index must be >= 1")
    if isinstance(V, Generic):
        raise GenericUnsupported("generic types go through m_extension")
    if isinstance(V, Supercuspidal):
        return 0
    if isinstance(V, UnramifiedPS):
        p = V.p
        if V.a == 2 % p and V.c == 1 % p:
            return 2 * (e - 1)
        if V.a == (V.c + 1) % p:
            return e - 1
        return 0
    if isinstance(V, Special):
        return h_char(V.phi, e)
    if isinstance(V, RamifiedPS):
        return h_char(V.phi1, e) + h_char(V.phi2, e)
    raise TypeError(f"unknown local type {V!r}")


def restrict_type(V: LocalType, degree: int) -> LocalType:
    """The same representation over the degree-``degree`` extension.

    Unramified principal series keep their Frobenius data (the extension
    is totally ramified), supercuspidal stays supercuspidal by the
    contributes-zero convention, characters restrict by inertia order,
    and generic data restricts through its character-multiset model.
    """
    if degree == 1:
        return V
    if isinstance(V, (UnramifiedPS, Supercuspidal)):
        return V
    if isinstance(V, Special):
        return Special(V.phi.restricted(degree))
    if isinstance(V, RamifiedPS):
        return RamifiedPS(V.phi1.restricted(degree), V.phi2.restricted(degree))
    if isinstance(V, Generic):
        if V.degree % degree:
            raise IncoherentGenericData(
                f"generic data over degree {V.degree} cannot restrict "
                f"through degree {degree}")
        sub = V.degree // degree
        vals = [0] * sub
        for j, m in enumerate(V.m_values):
            vals[j % sub] += m
        return Generic(sub, tuple(vals))
    raise TypeError(f"unknown local type {V!r}")


def check_tower_additivity(V: LocalType, inner_degree: int,
                           outer_degree: int):
    """Both sides of m(L''/L,V) = [L'':L'] m(L'/L,V) + m(L''/L',V)
    for the chain of local degrees inner_degree | outer_degree.

    Returns (lhs == rhs, lhs, rhs).
    """
    if outer_degree % inner_degree:
        raise ValueError("chain degrees must be nested")
    lhs = m_extension(V, outer_degree)
    step = outer_degree // inner_degree
    rhs = step * m_extension(V, inner_degree) + m_extension(
        restrict_type(V, inner_degree), step)
    return lhs == rhs, lhs, rhs


# -- local type grammar ----------------------------------------------------

def parse_char_spec(spec: str) -> LocalCharData:
    """charspec = ram|unram,triv|nontriv[,dies|survives]"""
    parts = [t.strip() for t in spec.split(",")]
    if len(parts) not in (2, 3):
        raise SpecParseError(f"bad character spec {spec!r}")
    if parts[0] not in ("ram", "unram") or parts[1] not in ("triv", "nontriv"):
        raise SpecParseError(f"bad character spec {spec!r}")
    ramified = parts[0] == "ram"
    trivial = parts[1] == "triv"
    if ramified:
        if len(parts) != 3 or parts[2] not in ("dies", "survives"):
            raise SpecParseError(
                f"ram characters need a dies|survives flag: {spec!r}")
        dies = parts[2] == "dies"
    else:
        if len(parts) == 3:
            raise SpecParseError("dies/survives only applies to ram characters")
        dies = True
    return LocalCharData(ramified=ramified, trivial_mod_p=trivial,
                         becomes_unramified_over_extension=dies)


def parse_local_type(spec: str, p: int) -> LocalType:
    """Grammar: ups:a=<int>,c=<int> | ramps:<charspec>;<charspec> |
    special:<charspec> | sc | generic:<m0,m1,...>"""
    s = spec.strip()
    if s == "sc":
        return Supercuspidal()
    if s.startswith("ups:"):
        fields = {}
        for item in s[len("ups:"):].split(","):
            if "=" not in item:
                raise SpecParseError(f"bad ups spec {spec!r}")
            k, v = item.split("=", 1)
            try:
                fields[k.strip()] = int(v)
            except ValueError:
                raise SpecParseError(f"bad integer in {spec!r}")
        if set(fields) != {"a", "c"}:
            raise SpecParseError(f"ups spec needs exactly a=..,c=..: {spec!r}")
        return UnramifiedPS(fields["a"], fields["c"], p)
    if s.startswith("ramps:"):
        body = s[len("ramps:"):]
        halves = body.split(";")
        if len(halves) != 2:
            raise SpecParseError(f"ramps spec needs two characters: {spec!r}")
        return RamifiedPS(parse_char_spec(halves[0]), parse_char_spec(halves[1]))
    if s.startswith("special:"):
        return Special(parse_char_spec(s[len("special:"):]))
    if s.startswith("generic:"):
        body = s[len("generic:"):]
        try:
            vals = tuple(int(x) for x in body.split(","))
        except ValueError:
            raise SpecParseError(f"bad generic values in {spec!r}")
        n = len(vals)
        t = n
        while t % p == 0:
            t //= p
        if t != 1:
            raise SpecParseError(
                f"generic data length {n} is not a power of {p}")
        return Generic(n, vals)
    raise SpecParseError(f"bad local type spec {spec!r}")


def describe_local_type(V: LocalType) -> str:
    """Inverse of the grammar, for reports."""
    if isinstance(V, Supercuspidal):
        return "sc"
    if isinstance(V, UnramifiedPS):
        return f"ups:a={V.a},c={V.c}"
    if isinstance(V, Special):
        return f"special:{_describe_char(V.phi)}"
    if isinstance(V, RamifiedPS):
        return f"ramps:{_describe_char(V.phi1)};{_describe_char(V.phi2)}"
    if isinstance(V, Generic):
        return "generic:" + ",".join(str(v) for v in V.m_values)
    raise TypeError(f"unknown local type {V!r}")


def _describe_char(phi: LocalCharData) -> str:
    base = f"{'ram' if phi.ramified else 'unram'}," \
           f"{'triv' if phi.trivial_mod_p else 'nontriv'}"
    if phi.ramified:
        base += ",dies" if phi.becomes_unramified_over_extension else ",survives"
    return base
