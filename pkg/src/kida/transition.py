"""Global transition evaluators for Iwasawa invariants under p-extensions.

The single formula driving everything:

    lambda_out = [F'_infty : F_infty] * lambda_in
                 + sum over ramified prime-to-p places w' of m(local type)

valid when mu = 0 on input (and then mu = 0 on output).  The same shape
serves the algebraic, analytic, and signed (plus/minus) invariants; only
the asserted hypotheses differ.  Each ramified prime contributes
(number of places of the extension tower above it) x m(type, local degree),
and for tabulated types the h-table route is evaluated alongside as a
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import localfactor, qexp, splitting
from .errors import (ChainMismatch, IncompleteTwistData,
                     InternalAdditivityViolation, MismatchedInputs,
                     MissingLocalType, MuNonzero)

KINDS = ("algebraic", "analytic", "plus", "minus")

HYPOTHESIS_NAMES = {
    "algebraic": (
        "graded_pieces_residually_distinct",
        "archimedean_rank_condition",
        "residual_invariants_vanish",
        "inertia_coinvariants_divisible",
    ),
    "analytic": (
        "p_ordinary",
        "residual_irreducible",
        "p_distinguished",
    ),
    "plus": (
        "supersingular_weight_two",
        "congruent_to_zp_coefficient_form",
        "extension_abelian_p_over_Q",
    ),
    "minus": (
        "supersingular_weight_two",
        "congruent_to_zp_coefficient_form",
        "extension_abelian_p_over_Q",
    ),
}


@dataclass(frozen=True)
class InvariantRecord:
    """(mu, lambda) with provenance; mu None means unknown."""

    kind: str
    mu: int | None
    lam: int | None
    provenance: str = "asserted-input"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.provenance not in ("asserted-input", "computed"):
            raise ValueError("bad provenance tag")
        if self.mu is not None and self.mu < 0:
            raise ValueError("mu must be >= 0")
        if self.mu != 0 and self.lam is not None:
            raise ValueError("lambda is only defined when mu = 0")
        if self.mu == 0 and (self.lam is None or self.lam < 0):
            raise ValueError("mu = 0 needs a lambda >= 0")


@dataclass(frozen=True)
class LocalFactorReport:
    """Per ramified prime: place counts and the local contribution."""

    ell: int
    local_degree: int
    places: int
    m: int
    h: int | None           # table value; None on the generic path
    path: str               # "table" or "generic" or "composed"
    type_spec: str
    local_type: object = field(repr=False, compare=False)

    @property
    def contribution(self) -> int:
        return self.places * self.m


@dataclass(frozen=True)
class TransitionReport:
    kind: str
    p: int
    form: str
    base_spec: str
    ext_spec: str
    base_field: splitting.AbelianField
    ext_field: splitting.AbelianField
    degree: int
    lambda_in: int
    lambda_out: int
    mu_in: int
    mu_out: int
    places: tuple[LocalFactorReport, ...]
    hypotheses: tuple[tuple[str, bool], ...]
    warnings: tuple[str, ...]

    def to_invariant_record(self) -> "InvariantRecord":
        """The transported invariants, tagged as computed (chainable)."""
        return InvariantRecord(self.kind, self.mu_out, self.lambda_out,
                               provenance="computed")

    def as_mapping(self) -> dict[str, object]:
        """Flat key/value view with deterministic keys (for output)."""
        out: dict[str, object] = {
            "kind": self.kind,
            "p": self.p,
            "form": self.form,
            "base": self.base_spec,
            "extension": self.ext_spec,
            "degree": self.degree,
            "lambda.in": self.lambda_in,
            "lambda.out": self.lambda_out,
            "mu.in": self.mu_in,
            "mu.out": self.mu_out,
        }
        for name, val in self.hypotheses:
            out[f"hypothesis.{name}"] = val
        for i, w in enumerate(self.warnings):
            out[f"warning.{i}"] = w
        for rep in self.places:
            k = f"local.{rep.ell}"
            out[f"{k}.degree"] = rep.local_degree
            out[f"{k}.places"] = rep.places
            out[f"{k}.m"] = rep.m
            if rep.h is not None:
                out[f"{k}.h"] = rep.h
            out[f"{k}.contribution"] = rep.contribution
            out[f"{k}.path"] = rep.path
            out[f"{k}.type"] = rep.type_spec
        return out


def _frobenius_power(a: int, c: int, f: int, p: int) -> tuple[int, int]:
    """Characteristic data of the f-th Frobenius power mod p.

    Newton's recursion on the power sums of the roots of x^2 - a x + c:
    trace(Frob^f) = s_f with s_0 = 2, s_1 = a, s_k = a s_{k-1} - c s_{k-2};
    det(Frob^f) = c^f.
    """
    s_prev, s_cur = 2 % p, a % p
    for _ in range(f - 1):
        s_prev, s_cur = s_cur, (a * s_cur - c * s_prev) % p
    return s_cur, pow(c, f, p)


def _resolve_local_type(ell: int, p: int,
                        form: qexp.ModularFormData | None,
                        overrides: dict[int, object] | None,
                        precision: int | None,
                        base_field: splitting.AbelianField):
    if overrides and ell in overrides:
        return overrides[ell], "user"
    if form is None:
        raise MissingLocalType(
            f"no form and no local type supplied for ramified prime {ell}")
    if form.level % ell == 0:
        raise MissingLocalType(
            f"{ell} divides the level {form.level}; supply a local type "
            f"for it explicitly")
    a, c = qexp.frobenius_data(form, ell, p, precision)
    # The table needs the Frobenius of the base tower field.  Its
    # residue field exhausts all p-extensions, so only the prime-to-p
    # part of the base residue degree survives as a Frobenius power.
    f0 = splitting.efg(base_field, ell).f
    while f0 % p == 0:
        f0 //= p
    if f0 > 1:
        a, c = _frobenius_power(a, c, f0, p)
    return localfactor.UnramifiedPS(a, c, p), "frobenius"


def transition(*, p: int,
               base_field: splitting.AbelianField,
               ext_field: splitting.AbelianField,
               base: InvariantRecord,
               form: qexp.ModularFormData | None = None,
               local_types: dict[int, object] | None = None,
               assert_hypotheses: bool = False,
               precision: int | None = None) -> TransitionReport:
    """Transport (mu, lambda) from the base tower to the extension tower.

    Rejects mu != 0 inputs.  Both fields are replaced by their maximal
    subfields unramified at p first (flagged in the warnings when this
    changes anything); the degree is then the p-power [F' : F] of the
    reduced fields.  Local types come from the supplied form via its
    Frobenius data away from the level, and from ``local_types``
    overrides at primes dividing the level.
    """
    kind = base.kind
    if base.mu != 0 or base.lam is None:
        raise MuNonzero(
            "transition formula needs mu = 0 (and a lambda) on input; "
            f"got mu={base.mu!r}")
    warnings: list[str] = []
    base_red = splitting.unramified_at_p_reduction(base_field, p)
    ext_red = splitting.unramified_at_p_reduction(ext_field, p)
    if base_red is not base_field or ext_red is not ext_field:
        warnings.append(
            "extension ramified above p: fields replaced by their maximal "
            "subfields unramified at p (the towers are unchanged)")
    rs = splitting.ramified_set(base_red, ext_red, p)
    assert rs.unramified_at_p, "reduction left ramification at p"
    if not assert_hypotheses:
        warnings.append(
            "standard hypotheses not asserted by the caller; the formula "
            "is applied formally")
    if form is not None and form.ordinary_at_p is not None:
        signed = kind in ("plus", "minus")
        if signed and form.ordinary_at_p:
            warnings.append(
                "signed invariants requested for a form flagged ordinary "
                "at p")
        if not signed and not form.ordinary_at_p:
            warnings.append(
                f"{kind} route requested for a form flagged supersingular "
                f"at p")
    places = []
    for entry in sorted(rs.entries, key=lambda ent: ent.ell):
        V, origin = _resolve_local_type(entry.ell, p, form, local_types,
                                        precision, base_red)
        m = localfactor.m_extension(V, entry.local_degree)
        if isinstance(V, localfactor.Generic):
            h = None
            path = "generic"
        else:
            h = localfactor.h_v(V, entry.local_degree)
            path = "table" if origin == "frobenius" else "table(user)"
            if h != m:
                raise InternalAdditivityViolation(
                    f"h-table and m-summation disagree at {entry.ell}: "
                    f"{h} != {m}")
        places.append(LocalFactorReport(
            ell=entry.ell, local_degree=entry.local_degree,
            places=entry.places, m=m, h=h, path=path,
            type_spec=localfactor.describe_local_type(V), local_type=V))
    lam_out = rs.degree * base.lam + sum(rep.contribution for rep in places)
    hypotheses = tuple((name, assert_hypotheses)
                       for name in HYPOTHESIS_NAMES[kind])
    return TransitionReport(
        kind=kind, p=p,
        form=form.describe() if form is not None else "local-types-only",
        base_spec=base_field.spec_string(), ext_spec=ext_field.spec_string(),
        base_field=base_red, ext_field=ext_red,
        degree=rs.degree, lambda_in=base.lam, lambda_out=lam_out,
        mu_in=0, mu_out=0, places=tuple(places),
        hypotheses=hypotheses, warnings=tuple(warnings))


def lambda_via_twists(twist_invariants, expected_count: int | None = None,
                      cross_check: TransitionReport | None = None) -> int:
    """Sum per-character lambda invariants over the dual group.

    ``twist_invariants``: iterable of InvariantRecord (or (mu, lambda)
    pairs), one per character of Gal(F'/F); every mu must be 0.  When
    ``expected_count`` (= [F':F]) is given the count is enforced; when
    ``cross_check`` is given the sum must match its lambda_out.
    """
    records = list(twist_invariants)
    if expected_count is not None and len(records) != expected_count:
        raise IncompleteTwistData(
            f"need one lambda per character: got {len(records)}, "
            f"expected {expected_count}")
    total = 0
    for rec in records:
        if isinstance(rec, InvariantRecord):
            mu, lam = rec.mu, rec.lam
        else:
            mu, lam = rec
        if mu != 0 or lam is None:
            raise MuNonzero("per-twist lambda needs mu = 0 for every twist")
        total += lam
    if cross_check is not None and total != cross_check.lambda_out:
        raise InternalAdditivityViolation(
            f"twist sum {total} != transition lambda {cross_check.lambda_out}")
    return total


def _tower_count(report_field: splitting.AbelianField, ell: int, p: int) -> int:
    return splitting.tower_places(report_field, ell, p).g_infinity


def compose(r_ab: TransitionReport, r_bc: TransitionReport) -> TransitionReport:
    """Composite report for F''/F from reports for F'/F and F''/F'.

    Verifies the tower bookkeeping: for every prime the composite local
    sum must decompose as [F'':F'] times the lower sum plus the upper
    sum, place by place.
    """
    if r_ab.p != r_bc.p or r_ab.kind != r_bc.kind or r_ab.form != r_bc.form:
        raise ChainMismatch("reports disagree on p, kind, or form")
    if not splitting.same_field(r_ab.ext_field, r_bc.base_field):
        raise ChainMismatch("middle fields do not match")
    if r_bc.lambda_in != r_ab.lambda_out:
        raise ChainMismatch(
            f"lambda chain broken: {r_ab.lambda_out} -> {r_bc.lambda_in}")
    p = r_ab.p
    ab = {rep.ell: rep for rep in r_ab.places}
    bc = {rep.ell: rep for rep in r_bc.places}
    deg_total = r_ab.degree * r_bc.degree
    places = []
    local_sum = 0
    for ell in sorted(set(ab) | set(bc)):
        d_ab = ab[ell].local_degree if ell in ab else 1
        d_bc = bc[ell].local_degree if ell in bc else 1
        d_tot = d_ab * d_bc
        if ell in ab:
            v_base = ab[ell].local_type
        else:
            # unramified in the lower step: the lower local fields agree,
            # so the upper report's type is already base-relative
            v_base = bc[ell].local_type
        if ell in ab and ell in bc:
            expected_upper = localfactor.restrict_type(v_base, d_ab)
            if expected_upper != bc[ell].local_type:
                raise ChainMismatch(
                    f"local type at {ell} in the upper report does not "
                    f"restrict from the lower report")
        count_total = (bc[ell].places if ell in bc
                       else _tower_count(r_bc.ext_field, ell, p))
        count_mid = (ab[ell].places if ell in ab
                     else _tower_count(r_ab.ext_field, ell, p))
        lhs = count_total * localfactor.m_extension(v_base, d_tot)
        rhs = (r_bc.degree * count_mid * localfactor.m_extension(v_base, d_ab)
               + count_total * localfactor.m_extension(
                   localfactor.restrict_type(v_base, d_ab), d_bc))
        if lhs != rhs:
            raise InternalAdditivityViolation(
                f"tower bookkeeping fails at {ell}: {lhs} != {rhs}")
        local_sum += lhs
        places.append(LocalFactorReport(
            ell=ell, local_degree=d_tot, places=count_total,
            m=localfactor.m_extension(v_base, d_tot),
            h=(localfactor.h_v(v_base, d_tot)
               if not isinstance(v_base, localfactor.Generic) else None),
            path="composed",
            type_spec=localfactor.describe_local_type(v_base),
            local_type=v_base))
    lam_out = deg_total * r_ab.lambda_in + local_sum
    if lam_out != r_bc.lambda_out:
        raise InternalAdditivityViolation(
            f"composite lambda {lam_out} != chained lambda {r_bc.lambda_out}")
    warnings = tuple(dict.fromkeys(r_ab.warnings + r_bc.warnings))
    hyps = tuple((name, a and b) for (name, a), (_, b)
                 in zip(r_ab.hypotheses, r_bc.hypotheses))
    return TransitionReport(
        kind=r_ab.kind, p=p, form=r_ab.form,
        base_spec=r_ab.base_spec, ext_spec=r_bc.ext_spec,
        base_field=r_ab.base_field, ext_field=r_bc.ext_field,
        degree=deg_total, lambda_in=r_ab.lambda_in, lambda_out=lam_out,
        mu_in=0, mu_out=0, places=tuple(places),
        hypotheses=hyps, warnings=warnings)


@dataclass(frozen=True)
class McTransferReport:
    """Main-conjecture transfer along a p-extension."""

    p: int
    form: str
    base_spec: str
    ext_spec: str
    degree: int
    lambda_algebraic: int
    lambda_analytic: int
    holds_over_base: bool
    holds_over_extension: bool
    statement: str

    def as_mapping(self) -> dict[str, object]:
        return {
            "p": self.p,
            "form": self.form,
            "base": self.base_spec,
            "extension": self.ext_spec,
            "degree": self.degree,
            "lambda.algebraic": self.lambda_algebraic,
            "lambda.analytic": self.lambda_analytic,
            "holds.base": self.holds_over_base,
            "holds.extension": self.holds_over_extension,
            "statement": self.statement,
        }


def mc_transfer(alg: TransitionReport, an: TransitionReport,
                holds_over_base: bool = True) -> McTransferReport:
    """Transfer the main-conjecture status along the extension.

    The algebraic and analytic transitions share one formula, so equal
    inputs force equal outputs; the transfer statement records that the
    conjecture holds over the extension iff it holds over the base
    (with mu = 0 throughout).
    """
    if alg.kind != "algebraic" or an.kind != "analytic":
        raise MismatchedInputs("need one algebraic and one analytic report")
    if (alg.p, alg.form) != (an.p, an.form):
        raise MismatchedInputs("reports disagree on p or the form")
    if not (splitting.same_field(alg.base_field, an.base_field)
            and splitting.same_field(alg.ext_field, an.ext_field)):
        raise MismatchedInputs("reports cover different extensions")
    if alg.degree != an.degree:
        raise MismatchedInputs("degree mismatch")
    key_alg = [(r.ell, r.local_degree, r.places, r.m) for r in alg.places]
    key_an = [(r.ell, r.local_degree, r.places, r.m) for r in an.places]
    if key_alg != key_an:
        raise MismatchedInputs("local contributions differ between routes")
    if alg.lambda_in != an.lambda_in:
        raise MismatchedInputs(
            f"input lambdas differ: algebraic {alg.lambda_in} vs "
            f"analytic {an.lambda_in}")
    assert alg.lambda_out == an.lambda_out, "shared formula must agree"
    ext = alg.ext_spec
    base = alg.base_spec
    verdict = "holds" if holds_over_base else "is open"
    statement = (f"main conjecture {verdict} over {ext} with mu = 0 "
                 f"iff it {verdict} over {base} with mu = 0; "
                 f"both lambda invariants transport to {alg.lambda_out}")
    return McTransferReport(
        p=alg.p, form=alg.form, base_spec=base, ext_spec=ext,
        degree=alg.degree,
        lambda_algebraic=alg.lambda_out, lambda_analytic=an.lambda_out,
        holds_over_base=holds_over_base,
        holds_over_extension=holds_over_base,
        statement=statement)
