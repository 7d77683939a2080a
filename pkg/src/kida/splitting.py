"""Splitting and ramification of rational primes in abelian fields, and
place counting in cyclotomic p-power towers.

An abelian field is (conductor N, subgroup H of (Z/N)^*): the fixed field
of H acting on the N-th cyclotomic field.  Decomposition data at a prime
ell comes from the standard dictionary: inertia at ell is the
ell-component of the unit group, Frobenius is the class of ell prime to
ell, and places of a layer correspond to cosets of H times the
decomposition subgroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import arith, chargroup
from .errors import NotASubfield, NotPPower, SpecParseError
from .intlinalg import Lattice, preimage_lattice, subgroup_lattice

_MAX_TOWER_LAYERS = 40


class AbelianField:
    """Abelian extension of Q presented as (conductor, subgroup generators)."""

    def __init__(self, conductor: int, subgroup_gens=()):
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        self.conductor = conductor
        self.unit_group = arith.unit_group(conductor)
        gens = sorted({g % conductor for g in subgroup_gens}) if conductor > 1 else []
        for g in gens:
            if math.gcd(g, conductor) != 1:
                raise ValueError(f"subgroup generator {g} not a unit mod {conductor}")
        self.subgroup_gens = tuple(gens)
        rows = [list(self.unit_group.log(g)) for g in self.subgroup_gens]
        self._lattice = subgroup_lattice(rows, self.unit_group.invariant_factors)

    @property
    def degree(self) -> int:
        """[F : Q] = index of H in the unit group."""
        return self._lattice.det() if self.unit_group.rank else 1

    def subgroup_order(self) -> int:
        return self.unit_group.order // self.degree

    def is_rationals(self) -> bool:
        return self.degree == 1

    def contains_unit(self, residue: int) -> bool:
        return self._lattice.contains(self.unit_group.log(residue))

    def spec_string(self) -> str:
        if self.degree == 1:
            return "Q"
        gens = ",".join(str(g) for g in self.subgroup_gens)
        return f"cyclotomic:{self.conductor}:gens={gens}" if gens else \
            f"cyclotomic:{self.conductor}:gens="

    def __repr__(self):
        return (f"AbelianField(conductor={self.conductor}, "
                f"degree={self.degree})")


def rationals() -> AbelianField:
    return AbelianField(1)


def cyclotomic_field(N: int) -> AbelianField:
    """Q(zeta_N): trivial subgroup."""
    return AbelianField(N, ())


def _reduction_matrix(M_group: arith.UnitGroup, N: int) -> list[list[int]]:
    """Coordinate matrix of the reduction map (Z/M)^* -> (Z/N)^*."""
    target = arith.unit_group(N)
    return [list(target.log(g % N)) for g in M_group.generators]


def _pullback_lattice(M_group: arith.UnitGroup, field: AbelianField) -> Lattice:
    """Lattice in U(M)-coordinates of the preimage of field's subgroup."""
    if field.conductor == 1 or field.unit_group.rank == 0:
        # preimage of the full unit group: everything
        return subgroup_lattice(
            [[1 if j == i else 0 for j in range(M_group.rank)]
             for i in range(M_group.rank)],
            M_group.invariant_factors)
    amat = _reduction_matrix(M_group, field.conductor)
    return preimage_lattice(M_group.rank, amat, field._lattice)


def _aligned(F: AbelianField, Fp: AbelianField):
    """Both subgroup lattices pulled back to the lcm conductor."""
    M = F.conductor * Fp.conductor // math.gcd(F.conductor, Fp.conductor)
    UM = arith.unit_group(M)
    return UM, _pullback_lattice(UM, F), _pullback_lattice(UM, Fp)


def is_subfield(F: AbelianField, Fp: AbelianField) -> bool:
    """F contained in Fp (containment of fixed fields)."""
    _, LF, LFp = _aligned(F, Fp)
    return LF.contains_lattice(LFp)


def same_field(F: AbelianField, Fp: AbelianField) -> bool:
    _, LF, LFp = _aligned(F, Fp)
    return LF.key() == LFp.key()


def relative_degree(F: AbelianField, Fp: AbelianField) -> int:
    """[Fp : F] for F contained in Fp."""
    if not is_subfield(F, Fp):
        raise NotASubfield(
            f"{F!r} is not contained in {Fp!r} after conductor alignment")
    _, LF, LFp = _aligned(F, Fp)
    return LFp.det() // LF.det()


@dataclass(frozen=True)
class PlaceData:
    """Decomposition data of a rational prime in a finite abelian field."""

    ell: int
    e: int
    f: int
    g: int
    degree: int


def _inertia_rows(U: arith.UnitGroup, ell: int) -> list[list[int]]:
    """Coordinates of generators of the inertia subgroup at ell."""
    rows = []
    for i, comp in enumerate(U._components):
        q = comp.prime_power
        while q % ell == 0 and q > 1:
            q //= ell
        if q == 1:  # component at a power of ell
            res = U._lift(i, comp.gen_local)
            rows.append(list(U.log(res)))
    return rows


def _frobenius_residue(U: arith.UnitGroup, ell: int) -> int:
    """Class of ell on the prime-to-ell part, 1 on the ell-part."""
    if U.modulus == 1:
        return 0
    res, mods = [], []
    for q, e in arith.factor(U.modulus):
        qe = q ** e
        res.append(1 if q == ell else ell % qe)
        mods.append(qe)
    return arith.crt(res, mods)


def _element_order_mod_lattice(U: arith.UnitGroup, lat: Lattice,
                               vec, quotient_order: int) -> int:
    order = quotient_order
    for q, _ in arith.factor(quotient_order):
        while order % q == 0 and lat.contains(
                [x * (order // q) for x in vec]):
            order //= q
    return order


def efg(F: AbelianField, ell: int) -> PlaceData:
    """Ramification index, residue degree, number of places of ell in F."""
    if not arith.is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    U = F.unit_group
    if U.rank == 0:
        return PlaceData(ell, 1, 1, 1, 1)
    rows_HI = [list(r) for r in F._lattice.basis] + _inertia_rows(U, ell)
    L_HI = Lattice(rows_HI, U.rank)
    e = F._lattice.det() // L_HI.det()
    frob = list(U.log(_frobenius_residue(U, ell)))
    f = _element_order_mod_lattice(U, L_HI, frob, L_HI.det())
    L_D = Lattice(L_HI.basis + [frob], U.rank)
    g = L_D.det()
    assert e * f * g == F.degree, "efg does not multiply to the degree"
    return PlaceData(ell, e, f, g, F.degree)


@dataclass(frozen=True)
class TowerPlaceData:
    """Places above ell in the cyclotomic p-tower over a field."""

    ell: int
    p: int
    g_layers: tuple[int, ...]
    g_infinity: int
    stabilized_at: int


def _layer_subgroup_lattice(U: arith.UnitGroup, F: AbelianField,
                            p: int, n: int) -> Lattice:
    """Fixer of F * (n-th tower layer) inside U(lcm(N, p^(n+1)))."""
    L_F = _pullback_lattice(U, F)
    pk = p ** (n + 1)
    Upk = arith.unit_group(pk)
    # fixer of the layer: unique index-p^n subgroup of the cyclic U(p^(n+1))
    layer = AbelianField(pk, (Upk.element((p ** n,)),))
    L_layer = _pullback_lattice(U, layer)
    return L_F.intersect(L_layer)


def layer_place_count(F: AbelianField, ell: int, p: int, n: int) -> int:
    """Number of places above ell in the n-th tower layer of F."""
    M = F.conductor * p ** (n + 1) // math.gcd(F.conductor, p ** (n + 1))
    U = arith.unit_group(M)
    L_Hn = _layer_subgroup_lattice(U, F, p, n)
    rows = [list(r) for r in L_Hn.basis] + _inertia_rows(U, ell)
    rows.append(list(U.log(_frobenius_residue(U, ell))))
    return Lattice(rows, U.rank).det()


def tower_places(F: AbelianField, ell: int, p: int) -> TowerPlaceData:
    """Stable number of places above ell in the cyclotomic p-tower of F.

    Computes the place count layer by layer (layer n presented with
    conductor lcm(N, p^(n+1))) and stops at the first repeat; the count
    is nondecreasing and multiplies by 1 or p per step, so one equal
    step certifies stabilization.
    """
    if p == 2 or not arith.is_prime(p):
        raise ValueError("p must be an odd prime")
    if ell == p:
        raise ValueError("tower place counts are for ell != p")
    if not arith.is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    gs: list[int] = []
    for n in range(_MAX_TOWER_LAYERS):
        gs.append(layer_place_count(F, ell, p, n))
        if n >= 1:
            assert gs[n] in (gs[n - 1], gs[n - 1] * p), \
                "layer place count must grow by a factor of 1 or p"
            if gs[n] == gs[n - 1]:
                return TowerPlaceData(ell, p, tuple(gs), gs[n], n - 1)
    raise AssertionError("tower place count failed to stabilize")


@dataclass(frozen=True)
class RamifiedPlace:
    """One prime-to-p prime ramified in the tower extension."""

    ell: int
    tower: TowerPlaceData
    local_degree: int          # [F'_{infty,w'} : F_{infty,w}], a p-power
    places: int                # number of places of F'_infty above ell

    def __iter__(self):
        return iter((self.ell, self.tower, self.local_degree))


@dataclass(frozen=True)
class RamifiedSet:
    entries: tuple[RamifiedPlace, ...]
    degree: int                       # [F' : F]
    unramified_at_p: bool


def ramified_set(F: AbelianField, Fp: AbelianField, p: int) -> RamifiedSet:
    """Prime-to-p places of Fp's tower ramified over F's tower.

    For ell != p the tower layers are unramified at ell, so the local
    ramification equals e_ell(F'/F); the residue field of a tower-layer
    place has no p-extensions, so the whole local degree is e_ell(F'/F)
    and every place above a ramified ell is (totally) ramified.
    """
    if p == 2 or not arith.is_prime(p):
        raise ValueError("p must be an odd prime")
    if not is_subfield(F, Fp):
        raise NotASubfield("extension field does not contain the base field")
    degree = relative_degree(F, Fp)
    t = degree
    while t % p == 0:
        t //= p
    if t != 1:
        raise NotPPower(f"[F':F] = {degree} is not a power of {p}")
    e_p_rel = efg(Fp, p).e // efg(F, p).e
    candidates = sorted({q for q, _ in arith.factor(F.conductor)}
                        | {q for q, _ in arith.factor(Fp.conductor)})
    entries = []
    for ell in candidates:
        if ell == p:
            continue
        e_base = efg(F, ell).e
        e_ext = efg(Fp, ell).e
        assert e_ext % e_base == 0
        e_rel = e_ext // e_base
        if e_rel == 1:
            continue
        tw = tower_places(Fp, ell, p)
        entries.append(RamifiedPlace(ell=ell, tower=tw,
                                     local_degree=e_rel,
                                     places=tw.g_infinity))
    return RamifiedSet(entries=tuple(entries), degree=degree,
                       unramified_at_p=(e_p_rel == 1))


def unramified_at_p_reduction(F: AbelianField, p: int) -> AbelianField:
    """Maximal subfield of F's tower unramified at p, same presentation style.

    Realized by intersecting H with the subgroup generated by the
    prime-to-p part of the p-component (the part of inertia at p that
    survives in every tower layer) and projecting to the prime-to-p
    conductor.  The reduced field has the same cyclotomic p-tower
    whenever the p-inertia of the tower is torsion-free, which holds in
    every p-power-degree situation the transition formula consumes.
    """
    if p == 2 or not arith.is_prime(p):
        raise ValueError("p must be an odd prime")
    a = 0
    N = F.conductor
    while N % p == 0:
        N //= p
        a += 1
    if a == 0:
        return F
    U = F.unit_group
    # K = (everything prime to p) x (Teichmueller part at p)
    rows = []
    for i, comp in enumerate(U._components):
        res = None
        if comp.prime_power == p ** a:
            t_local = pow(comp.gen_local, p ** (a - 1), comp.prime_power)
            res = U._lift(i, t_local)
        else:
            res = U._lift(i, comp.gen_local)
        rows.append(list(U.log(res)))
    L_K = subgroup_lattice(rows, U.invariant_factors)
    L_int = F._lattice.intersect(L_K)
    gens = sorted({U.element(row) % N for row in L_int.basis})
    return AbelianField(N, tuple(g for g in gens if N > 1))


# -- field input grammar --------------------------------------------------

@lru_cache(maxsize=None)
def _resolve_degree_subgroup(N: int, d: int) -> tuple[int, ...]:
    """Generators of the unique index-d subgroup of (Z/N)^*, if unique."""
    U = arith.unit_group(N)
    if U.order % d:
        raise SpecParseError(f"(Z/{N})^* has no subgroup of index {d}")
    if U.rank == 0:
        if d != 1:
            raise SpecParseError(f"(Z/{N})^* is trivial; degree must be 1")
        return ()
    G = chargroup.FiniteAbelianGroup(U.invariant_factors)
    found = [H for H in chargroup.subgroups(G)
             if G.order // H.order == d]
    if len(found) != 1:
        raise SpecParseError(
            f"index-{d} subgroup of (Z/{N})^* is not unique "
            f"({len(found)} candidates); use gens=...")
    return tuple(U.element(g) for g in found[0].generators)


def parse_field_spec(spec: str) -> AbelianField:
    """Grammar: ``Q`` | ``cyclotomic:<N>:degree=<d>`` |
    ``cyclotomic:<N>:gens=<g1,g2,...>``."""
    s = spec.strip()
    if s == "Q":
        return rationals()
    parts = s.split(":")
    if len(parts) != 3 or parts[0] != "cyclotomic":
        raise SpecParseError(f"bad field spec {spec!r}")
    try:
        N = int(parts[1])
    except ValueError:
        raise SpecParseError(f"bad conductor in {spec!r}")
    if N < 1:
        raise SpecParseError(f"conductor must be >= 1 in {spec!r}")
    body = parts[2]
    if body.startswith("degree="):
        try:
            d = int(body[len("degree="):])
        except ValueError:
            raise SpecParseError(f"bad degree in {spec!r}")
        if d < 1:
            raise SpecParseError("degree must be >= 1")
        return AbelianField(N, _resolve_degree_subgroup(N, d))
    if body.startswith("gens="):
        tail = body[len("gens="):]
        try:
            gens = tuple(int(x) for x in tail.split(",") if x != "")
        except ValueError:
            raise SpecParseError(f"bad generator list in {spec!r}")
        try:
            return AbelianField(N, gens)
        except ValueError as exc:
            raise SpecParseError(str(exc))
    raise SpecParseError(f"bad field spec {spec!r}")
