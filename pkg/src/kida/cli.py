"""Command-line surface.

Subcommands: ``tau``, ``hv``, ``transition``, ``verify``.  Output is a
deterministic key/value document (sorted keys, ``key = value`` per
line); ``--json`` renders the same record as canonical JSON.  A config
file supplies defaults with the same keys as the long flags; explicit
flags win.  The environment variable KIDA_PRECISION overrides the
series precision budget.

Exit codes: 0 success; 1 property violation (verify); 2 domain errors
(mu != 0, precision, missing local type for hv); 3 malformed field or
form specs; 4 missing local data in a transition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import localfactor, qexp, splitting, transition, verify
from .errors import (KidaError, MissingLocalType, MuNonzero,
                     NotASubfield, NotPPower, PrecisionExceeded,
                     RamifiedLevel, SpecParseError)

_LOCAL_TYPE_PREFIXES = ("sc", "ups:", "ramps:", "special:", "generic:")


def _render(mapping: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(mapping, sort_keys=True, separators=(", ", ": "))
    lines = []
    for key in sorted(mapping):
        val = mapping[key]
        if isinstance(val, bool):
            val = "true" if val else "false"
        lines.append(f"{key} = {val}")
    return "\n".join(lines)


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SpecParseError(
                    f"{path}:{lineno}: expected 'key = value'")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _apply_config(args: argparse.Namespace, keys: dict[str, type]):
    """Fill unset options from the config file; flags override."""
    if not getattr(args, "config", None):
        return
    conf = _read_config(args.config)
    for key, caster in keys.items():
        attr = "lam" if key == "lambda" else key.replace("-", "_")
        if getattr(args, attr, None) is None and key in conf:
            raw = conf[key]
            if caster is bool:
                setattr(args, attr, raw.lower() in ("1", "true", "yes"))
            else:
                setattr(args, attr, caster(raw))


def parse_form_spec(spec: str) -> qexp.ModularFormData:
    """``delta`` | ``ec:a1=..,a2=..,a3=..,a4=..,a6=..`` | ``table:<path>``"""
    s = spec.strip()
    if s == "delta":
        return qexp.delta_form()
    if s.startswith("ec:"):
        fields = {}
        for item in s[len("ec:"):].split(","):
            if "=" not in item:
                raise SpecParseError(f"bad curve spec {spec!r}")
            k, v = item.split("=", 1)
            try:
                fields[k.strip()] = int(v)
            except ValueError:
                raise SpecParseError(f"bad integer in {spec!r}")
        if not set(fields) <= {"a1", "a2", "a3", "a4", "a6"}:
            raise SpecParseError(f"unknown curve coefficients in {spec!r}")
        curve = qexp.EllipticCurve(**{k: fields.get(k, 0)
                                      for k in ("a1", "a2", "a3", "a4", "a6")})
        if curve.discriminant() == 0:
            raise SpecParseError("curve is singular (discriminant 0)")
        return qexp.ec_form(curve)
    if s.startswith("table:"):
        return qexp.table_form(qexp.load_table(s[len("table:"):]))
    raise SpecParseError(f"bad form spec {spec!r}")


def _precision(args) -> int | None:
    env = os.environ.get("KIDA_PRECISION")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SpecParseError(f"bad KIDA_PRECISION value {env!r}")
    return None


# -- tau ------------------------------------------------------------------

def cmd_tau(args) -> int:
    _apply_config(args, {"n": int, "mod": int})
    if args.n is None:
        raise SpecParseError("tau needs --n")
    value = qexp.tau(args.n, _precision(args))
    if args.mod is not None:
        value %= args.mod
    print(value)
    return 0


# -- hv -------------------------------------------------------------------

def _ups_case(V: localfactor.UnramifiedPS) -> str:
    p = V.p
    if V.a == 2 % p and V.c == 1 % p:
        return "both_frobenius_eigenvalues_trivial"
    if V.a == (V.c + 1) % p:
        return "one_frobenius_eigenvalue_trivial"
    return "no_trivial_frobenius_eigenvalue"


def _special_case(phi: localfactor.LocalCharData) -> str:
    if not phi.trivial_mod_p:
        return "character_nontrivial_mod_p"
    if not phi.ramified:
        return "character_unramified_trivial_mod_p"
    if phi.becomes_unramified_over_extension:
        return "character_dies_over_extension"
    return "character_survives_ramified"


def cmd_hv(args) -> int:
    _apply_config(args, {"form": str, "p": int, "ell": int,
                         "e": int, "ext": str})
    if args.form is None:
        raise SpecParseError("hv needs --form")
    spec = args.form.strip()
    record: dict[str, object] = {}
    if spec == "sc" or any(spec.startswith(pre) for pre in
                           _LOCAL_TYPE_PREFIXES if pre != "sc"):
        if spec.startswith(("ups:", "generic:")) and args.p is None:
            raise SpecParseError(f"--p required for {spec!r}")
        V = localfactor.parse_local_type(spec, args.p or 0)
    else:
        form = parse_form_spec(spec)
        if args.p is None or args.ell is None:
            raise SpecParseError("hv with a form spec needs --p and --ell")
        a, c = qexp.frobenius_data(form, args.ell, args.p, _precision(args))
        V = localfactor.UnramifiedPS(a, c, args.p)
        record["form"] = form.describe()
        record["ell"] = args.ell
    if args.e is not None:
        e = args.e
    elif args.ext is not None:
        if args.ell is None:
            raise SpecParseError("--ext needs --ell to locate the place")
        ext = splitting.parse_field_spec(args.ext)
        e = splitting.efg(ext, args.ell).e
        record["extension"] = args.ext
    else:
        raise SpecParseError("hv needs --e or --ext")
    record["e"] = e
    if args.p is not None:
        record["p"] = args.p
    record["type"] = localfactor.describe_local_type(V)
    if isinstance(V, localfactor.Generic):
        record["h"] = localfactor.m_extension(V, e)
        record["case"] = "generic_m_summation"
        record["path"] = "generic"
    else:
        record["h"] = localfactor.h_v(V, e)
        record["path"] = "table"
        if isinstance(V, localfactor.UnramifiedPS):
            record["a"] = V.a
            record["c"] = V.c
            record["case"] = _ups_case(V)
        elif isinstance(V, localfactor.Special):
            record["case"] = _special_case(V.phi)
        elif isinstance(V, localfactor.RamifiedPS):
            record["case"] = (f"{_special_case(V.phi1)}"
                              f"+{_special_case(V.phi2)}")
        else:
            record["case"] = "supercuspidal_or_extraordinary"
    print(_render(record, args.json))
    return 0


# -- transition -------------------------------------------------------------

def _parse_local_overrides(items, p: int) -> dict[int, object]:
    out: dict[int, object] = {}
    for item in items or ():
        if "=" not in item:
            raise SpecParseError(f"bad --local {item!r}; use ell=typespec")
        ell_s, typespec = item.split("=", 1)
        try:
            ell = int(ell_s)
        except ValueError:
            raise SpecParseError(f"bad prime in --local {item!r}")
        out[ell] = localfactor.parse_local_type(typespec, p)
    return out


def cmd_transition(args) -> int:
    _apply_config(args, {"form": str, "p": int, "base": str, "ext": str,
                         "lambda": int, "mu": int, "kind": str})
    for name in ("p", "base", "ext"):
        if getattr(args, name) is None:
            raise SpecParseError(f"transition needs --{name}")
    if args.lam is None or args.mu is None:
        raise SpecParseError("transition needs --lambda and --mu")
    kind = args.kind or "algebraic"
    if kind not in transition.KINDS:
        raise SpecParseError(f"kind must be one of {transition.KINDS}")
    base_field = splitting.parse_field_spec(args.base)
    ext_field = splitting.parse_field_spec(args.ext)
    form = parse_form_spec(args.form) if args.form else None
    lam = args.lam if args.mu == 0 else None
    base = transition.InvariantRecord(kind, args.mu, lam)
    overrides = _parse_local_overrides(args.local, args.p)
    report = transition.transition(
        p=args.p, base_field=base_field, ext_field=ext_field, base=base,
        form=form, local_types=overrides,
        assert_hypotheses=bool(args.assert_hypotheses),
        precision=_precision(args))
    print(_render(report.as_mapping(), args.json))
    return 0


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    _apply_config(args, {"suite": str, "seed": int, "size": int})
    if args.suite is None:
        raise SpecParseError("verify needs --suite")
    result = verify.run_suite(args.suite, seed=args.seed or 0,
                              size=args.size)
    print(_render(result.as_mapping(), args.json))
    return 0 if result.passed else 1


# -- entry -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kida",
        description="Exact transition formulas for Iwasawa invariants "
                    "under p-extensions")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tau", help="Fourier coefficient of the eta-product")
    t.add_argument("--n", type=int)
    t.add_argument("--mod", type=int)
    t.add_argument("--config")
    t.add_argument("--json", action="store_true")
    t.set_defaults(handler=cmd_tau)

    h = sub.add_parser("hv", help="local table value at a ramified prime")
    h.add_argument("--form")
    h.add_argument("--p", type=int)
    h.add_argument("--ell", type=int)
    h.add_argument("--e", type=int)
    h.add_argument("--ext")
    h.add_argument("--config")
    h.add_argument("--json", action="store_true")
    h.set_defaults(handler=cmd_hv)

    tr = sub.add_parser("transition",
                        help="transport (mu, lambda) along a p-extension")
    tr.add_argument("--form")
    tr.add_argument("--p", type=int)
    tr.add_argument("--base")
    tr.add_argument("--ext")
    tr.add_argument("--lambda", dest="lam", type=int)
    tr.add_argument("--mu", type=int)
    tr.add_argument("--kind", choices=list(transition.KINDS))
    tr.add_argument("--local", action="append", metavar="ELL=TYPESPEC")
    tr.add_argument("--assert-hypotheses", action="store_true")
    tr.add_argument("--config")
    tr.add_argument("--json", action="store_true")
    tr.set_defaults(handler=cmd_transition)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", choices=sorted(verify.SUITES))
    v.add_argument("--seed", type=int)
    v.add_argument("--size", type=int)
    v.add_argument("--config")
    v.add_argument("--json", action="store_true")
    v.set_defaults(handler=cmd_verify)
    return ap


_EXIT_CODES: list[tuple[type, int]] = [
    (MuNonzero, 2),
    (PrecisionExceeded, 2),
    (RamifiedLevel, 2),
    (MissingLocalType, 4),
    (SpecParseError, 3),
    (NotASubfield, 3),
    (NotPPower, 3),
]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except KidaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.command == "hv" and isinstance(exc, MissingLocalType):
            return 2
        for klass, code in _EXIT_CODES:
            if isinstance(exc, klass):
                return code
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
