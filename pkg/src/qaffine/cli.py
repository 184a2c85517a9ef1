"""Command-line front end.

Exit codes: 0 success or PASS, 1 FAIL (a verified mismatch), 2 input error,
3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Mapping

from .cartan import CartanError, CartanData, parse_algebra
from .characters import ClassicalCharacter
from .charform import (
    ConjSpec,
    ConjSpecError,
    charconj_validate,
    default_offsets,
    denominator_product,
    lagpvm_exponents,
    parabolic_verma_character,
    realize,
    weyl_sum,
)
from .expand import DEFAULT_BUDGET, BudgetExceeded, ExpansionError, engine_character, stabilization_check, truncated_qchar
from .lweights import LWeightError, QExponent, RationalFunction, RationalLWeight, SpectralParam, string_function
from .minaff import AffinizationError, HighestWeightSpec, check_least_conditions, least_affinization
from .sl2 import FactorizationError, factor_into_strings

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    algebra: str | None = None
    height: int = 4
    spec: str | None = None
    lweight: str | None = None
    fmt: str = "json"
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    engine: str = "expand"
    conjecture: str | None = None
    n_max: int | None = None
    level: int = 1
    lenient: bool = False

    def check(self) -> None:
        if self.height < 0:
            raise InputError("--height must be non-negative")
        if self.budget < 1:
            raise InputError("--budget must be at least 1")
        if self.threads < 1:
            raise InputError("--threads must be at least 1")


# --- input helpers -----------------------------------------------------------------

def load_json(text: str | None, what: str) -> Any:
    """Inline JSON, or the contents of a file when ``text`` names one."""
    if text is None:
        raise InputError(f"missing {what}")
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def _param(obj: Mapping) -> SpectralParam:
    return SpectralParam.make(obj.get("orbit", "a"), QExponent.from_json(obj.get("offset", 0)))


def component_from_json(obj: Mapping, level: int) -> RationalFunction:
    """One node component: ``{"strings": [{"mu": .., "orbit": .., "offset": ..}]}`` or
    ``{"scalar": .., "factors": [{"orbit": .., "offset": .., "mult": ..}]}``."""
    if "strings" in obj:
        out = RationalFunction()
        for s in obj["strings"]:
            out = out * string_function(QExponent.from_json(s["mu"]), _param(s), level)
        return out
    facs = [(_param(fa), int(fa["mult"])) for fa in obj.get("factors", [])]
    return RationalFunction.make(QExponent.from_json(obj.get("scalar", 0)), facs)


def lweight_from_json(cd: CartanData, obj: Mapping) -> RationalLWeight:
    """An l-weight keyed by node; string entries are taken in q_i = q^(r_i)."""
    if not isinstance(obj, Mapping):
        raise InputError("an l-weight must be a JSON object keyed by node")
    comps = {}
    for key, val in obj.items():
        i = int(key)
        cd.check_node(i)
        comps[i] = component_from_json(val, cd.r[i - 1])
    return RationalLWeight.from_components(comps, cd.rank).validate()


def _lambda(cd: CartanData, spec: Mapping, n: int | None = None) -> HighestWeightSpec:
    lam = {}
    for k, v in dict(spec.get("lambda", {})).items():
        if n is not None and v == "n":
            v = n
        lam[int(k)] = v
    return HighestWeightSpec.make(cd, lam)


def _least(cd: CartanData, spec: Mapping, n: int | None = None) -> RationalLWeight:
    return least_affinization(_lambda(cd, spec, n), int(spec.get("eps", 1)), SpectralParam.make(spec.get("pole", "a")))


def _algebra(cfg: RunConfig) -> CartanData:
    if cfg.algebra is None:
        raise InputError("missing --algebra")
    return parse_algebra(cfg.algebra)


# --- subcommands --------------------------------------------------------------------------

def cmd_roots(cfg: RunConfig) -> tuple[int, dict]:
    cd = _algebra(cfg)
    return EXIT_OK, {
        "algebra": cd.name,
        "cartan": [list(r) for r in cd.C],
        "B": [list(r) for r in cd.B],
        "r": list(cd.r),
        "positive_roots": [list(a) for a in cd.positive_roots],
    }


def _input_lweight(cfg: RunConfig, cd: CartanData) -> RationalLWeight:
    obj = load_json(cfg.lweight or cfg.spec, "--lweight")
    if isinstance(obj, Mapping) and "lambda" in obj:
        return _least(cd, obj)
    return lweight_from_json(cd, obj)


def cmd_qchar(cfg: RunConfig) -> tuple[int, dict]:
    cd = _algebra(cfg)
    f = _input_lweight(cfg, cd)
    qc = truncated_qchar(cd, f, cfg.height, cfg.budget, cfg.threads, strict=not cfg.lenient)
    return EXIT_OK, {"algebra": cd.name, "count": len(qc), "qchar": qc.to_json()}


def cmd_char(cfg: RunConfig) -> tuple[int, dict]:
    cd = _algebra(cfg)
    f = _input_lweight(cfg, cd)
    ch = engine_character(cd, f, cfg.height, cfg.budget, cfg.threads)
    return EXIT_OK, {"algebra": cd.name, "character": ch.to_json()}


def cmd_minaff(cfg: RunConfig) -> tuple[int, dict]:
    cd = _algebra(cfg)
    spec = load_json(cfg.spec, "--spec")
    f = _least(cd, spec)
    out = {"algebra": cd.name, "lweight": f.to_json(), "least_shape": check_least_conditions(cd, f)}
    if cfg.height:
        out["character"] = engine_character(cd, f, cfg.height, cfg.budget, cfg.threads).to_json()
    return EXIT_OK, out


def cmd_factor(cfg: RunConfig) -> tuple[int, dict]:
    obj = load_json(cfg.lweight or cfg.spec, "--lweight")
    comp = component_from_json(obj, cfg.level)
    bad = comp.check()
    if bad:
        raise InputError("; ".join(bad))
    strings = factor_into_strings(comp, cfg.level)
    return EXIT_OK, {"strings": [s.to_json() for s in strings], "text": [str(s) for s in strings]}


def _verdict(engine: ClassicalCharacter, expected: ClassicalCharacter) -> tuple[int, dict]:
    diff = engine.first_difference(expected)
    out: dict = {"height": engine.height, "result": "PASS" if diff is None else "FAIL"}
    if diff is not None:
        beta, got, want = diff
        out["first_difference"] = {"beta": list(beta), "engine": got, "formula": want}
    return (EXIT_OK if diff is None else EXIT_FAIL), out


def cmd_check(cfg: RunConfig) -> tuple[int, dict]:
    cd = _algebra(cfg)
    spec = load_json(cfg.spec, "--spec")
    H = cfg.height
    conj = cfg.conjecture
    out: dict = {"algebra": cd.name, "conjecture": conj, "engine": cfg.engine}
    if conj in ("lagv", "lagpvm"):
        lam = _lambda(cd, spec)
        J = lam.support
        if conj == "lagv" and J != list(cd.nodes):
            raise InputError("lagv needs every node in the support of lambda")
        if any(v.is_integer for _, v in lam.lam):
            raise InputError("the conjectures need non-integral coefficients; use symbols")
        expected = denominator_product(cd, lagpvm_exponents(cd, J), H)
        if cfg.engine == "expand":
            actual = engine_character(cd, _least(cd, spec), H, cfg.budget, cfg.threads)
        elif cd.type_letter == "A":
            actual = parabolic_verma_character(cd, J, H)
        else:
            raise InputError(f"no closed form for {conj} in type {cd.type_letter}")
    elif conj == "charconj":
        cs = ConjSpec.from_json(cd, spec)
        v = charconj_validate(cs)
        out["validation"] = {"ok": v.ok, "relaxed": v.relaxed, "reasons": list(v.reasons)}
        cs = default_offsets(cs)
        real = realize(cs)
        expected = real.expected(cs, H, check=False)
        if cfg.engine != "expand":
            raise InputError("charconj can only be checked against the expansion engine")
        actual = engine_character(cd, real.lweight, H, cfg.budget, cfg.threads)
    elif conj == "decomposition":
        weights = spec.get("weights")
        if not weights:
            raise InputError("decomposition needs a list of dominant weights")
        expected = weyl_sum(cd, weights, H)
        f = _least(cd, spec) if "lambda" in spec else lweight_from_json(cd, spec["lweight"])
        actual = engine_character(cd, f, H, cfg.budget, cfg.threads)
    else:
        raise InputError(f"unknown conjecture {conj!r}")
    code, verdict = _verdict(actual, expected)
    out.update(verdict)
    return code, out


def cmd_stabilize(cfg: RunConfig) -> tuple[int, dict]:
    """Integer family lambda(n) given with the placeholder "n"; compares with the symbolic member."""
    cd = _algebra(cfg)
    spec = load_json(cfg.spec, "--spec")
    H = cfg.height
    n_max = cfg.n_max if cfg.n_max is not None else H + 3
    if "n" not in dict(spec.get("lambda", {})).values():
        raise InputError('--spec must contain the placeholder "n" in lambda')
    n0, chars = stabilization_check(cd, lambda n: _least(cd, spec, n), H, n_max, n_min=int(spec.get("n_min", 1)), budget=cfg.budget)
    out: dict = {"algebra": cd.name, "height": H, "n_max": n_max, "n0": n0}
    if n0 is None:
        out["result"] = "FAIL"
        return EXIT_FAIL, out
    limit = chars[n_max]
    sym = dict(spec)
    sym["lambda"] = {k: ("mu" if v == "n" else v) for k, v in dict(spec["lambda"]).items()}
    symbolic = engine_character(cd, _least(cd, sym), H, cfg.budget, cfg.threads)
    out["limit"] = limit.to_json()
    out["limit_equals_symbolic"] = limit == symbolic
    lam = _lambda(cd, sym)
    if all(not v.is_const for _, v in lam.lam):
        out["limit_equals_lagpvm"] = limit == denominator_product(cd, lagpvm_exponents(cd, lam.support), H)
    ok = out["limit_equals_symbolic"] and out.get("limit_equals_lagpvm", True)
    out["result"] = "PASS" if ok else "FAIL"
    return (EXIT_OK if ok else EXIT_FAIL), out


COMMANDS = {
    "roots": cmd_roots,
    "qchar": cmd_qchar,
    "char": cmd_char,
    "minaff": cmd_minaff,
    "factor-sl2": cmd_factor,
    "check": cmd_check,
    "stabilize": cmd_stabilize,
}


# --- output ----------------------------------------------------------------------------------

def render_text(payload: dict) -> str:
    lines = []
    for key in sorted(payload):
        val = payload[key]
        if key == "qchar":
            lines.append(f"qchar: {len(val['terms'])} monomials up to height {val['height']}")
            for t in val["terms"]:
                mono = " ".join(f"A[{m['node']},{_param(m)}]^{m['exp']}" for m in t["monomial"]) or "1"
                lines.append(f"  {t['mult']} * {mono}")
        elif key in ("character", "limit"):
            lines.append(f"{key} (height {val['height']}):")
            lines.extend(f"  {c['beta']}: {c['mult']}" for c in val["coeffs"])
        elif key == "positive_roots":
            lines.append(f"positive_roots ({len(val)}):")
            lines.extend(f"  {a}" for a in val)
        else:
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
    return "\n".join(lines)


def render(payload: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(payload)
    return json.dumps(payload, sort_keys=True, indent=2)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qaffine", description="q-characters and character formulas for least affinizations")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--algebra", help="e.g. A3, B2, F4")
    p.add_argument("--height", type=int, default=4, help="height bound H")
    p.add_argument("--spec", help="JSON spec, inline or a file path")
    p.add_argument("--lweight", help="JSON l-weight, inline or a file path")
    p.add_argument("--format", dest="fmt", choices=["json", "text"], default="json")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximal number of monomials")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--engine", choices=["expand", "closedform"], default="expand")
    p.add_argument("--conjecture", choices=["lagv", "lagpvm", "charconj", "decomposition"])
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--level", type=int, default=1, help="q_i = q^level for factor-sl2")
    p.add_argument("--lenient", action="store_true", help="expand stalled factorizations instead of failing")
    return p


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    cfg = RunConfig(**vars(ns))
    try:
        cfg.check()
        code, payload = COMMANDS[cfg.subcommand](cfg)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, CartanError, LWeightError, AffinizationError, ConjSpecError, FactorizationError,
            ExpansionError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(render(payload, cfg.fmt), file=stdout)
    return code


def main() -> None:
    sys.exit(run())
