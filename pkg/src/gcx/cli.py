"""Command line front end: ``gcx <command> <input-file> [flags]``.

Exit codes: 0 success, 2 parse or validation error, 3 map not dominant,
4 budget exhausted or finiteness not established, 5 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field as dc_field
from typing import Any

import yaml

from . import canseq as cs
from . import equivariant as eq
from . import groupoids as gp
from .errors import (
    AmbientMismatch,
    BudgetExceeded,
    CoactionAxiomFailure,
    GcxError,
    IllDefinedMap,
    InvariantViolation,
    ModularCase,
    NotAGroup,
    NotDominant,
    NotFinite,
    ParseError,
)
from .groebner import budget
from .poly import Field
from .report import render_json, render_text
from .rings import PresentedRing, RingMap, unique_names

COMMANDS = ("validate", "canseq", "effepi", "stabilizer", "complexity", "invariants", "equivariant")

EXIT_OK, EXIT_INPUT, EXIT_NOT_DOMINANT, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4, 5


class JobError(GcxError):
    """Malformed or inconsistent job document."""


# ---------------------------------------------------------------------------
# job loading


@dataclass
class Job:
    field: Field
    rings: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    actions: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    params: dict = dc_field(default_factory=dict)
    source: str = ""
    command: str | None = None


def _polys(ring: PresentedRing, items, where: str) -> list:
    if items is None:
        return []
    if not isinstance(items, list):
        raise JobError(f"{where}: expected a list of polynomial strings")
    out = []
    for i, s in enumerate(items):
        try:
            out.append(ring.poly_ring(str(s) if not isinstance(s, str) else s))
        except ParseError as exc:
            raise ParseError(f"{where}[{i}]: {exc.args[0]}", exc.line, exc.column, exc.source) from None
    return out


def _section(doc: dict, key: str) -> dict:
    v = doc.get(key) or {}
    if not isinstance(v, dict):
        raise JobError(f"'{key}' must be a mapping")
    return v


def _lookup(table: dict, name, kind: str, where: str):
    if name not in table:
        raise JobError(f"{where}: undeclared {kind} '{name}'")
    return table[name]


def _hopf(spec: dict, fld: Field, where: str) -> gp.HopfData:
    if not isinstance(spec, dict):
        raise JobError(f"{where}: hopf must be a mapping")
    if "builtin" in spec:
        kind = spec["builtin"]
        var = spec.get("var")
        if kind == "mu":
            return gp.mu(int(spec["n"]), fld, var or "z")
        if kind == "alpha":
            return gp.alpha(int(spec["p"]), fld, var or "a")
        raise JobError(f"{where}: unknown builtin Hopf algebra '{kind}'")
    H = PresentedRing(fld, list(spec.get("vars", [])))
    H = PresentedRing(fld, H.names, _polys(H, spec.get("relations"), f"{where}.relations"))
    HH_names = [f"{n}{i}" for i in (1, 2) for n in H.names]
    HH = PresentedRing(fld, HH_names)
    return gp.HopfData.from_images(
        H,
        _polys(HH, spec.get("comultiplication"), f"{where}.comultiplication"),
        [str(c) for c in spec.get("counit", [])],
        _polys(H, spec.get("antipode"), f"{where}.antipode"),
        name=str(spec.get("name", "")),
    )


def load_job(text: str, source: str = "<input>", command: str | None = None) -> Job:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line, col = (mark.line + 1, mark.column + 1) if mark else (1, 1)
        raise ParseError(f"invalid job document: {getattr(exc, 'problem', exc)}", line, col, source) from None
    if not isinstance(doc, dict):
        raise JobError("the job document must be a mapping")
    declared = doc.get("command")
    if declared is not None and command is not None and declared != command:
        raise JobError(f"the document is a '{declared}' job, not '{command}'")
    try:
        fld = Field.parse(str(doc.get("field", "QQ")))
    except ValueError as exc:
        raise JobError(str(exc)) from None
    job = Job(fld, source=source, command=declared)
    for name, spec in _section(doc, "rings").items():
        where = f"rings.{name}"
        if not isinstance(spec, dict):
            raise JobError(f"{where}: expected a mapping")
        names = [str(v) for v in spec.get("vars", [])]
        try:
            R = PresentedRing(fld, names)
        except ValueError as exc:
            raise JobError(f"{where}: {exc}") from None
        job.rings[name] = PresentedRing(fld, names, _polys(R, spec.get("relations"), f"{where}.relations"))
    for name, spec in _section(doc, "maps").items():
        where = f"maps.{name}"
        src = _lookup(job.rings, spec.get("source"), "ring", where)
        tgt = _lookup(job.rings, spec.get("target"), "ring", where)
        job.maps[name] = RingMap(src, tgt, _polys(tgt, spec.get("images"), f"{where}.images"))
    for name, spec in _section(doc, "actions").items():
        where = f"actions.{name}"
        B = _lookup(job.rings, spec.get("base"), "ring", where)
        kind = spec.get("kind")
        if kind == "group":
            autos = [RingMap(B, B, _polys(B, imgs, f"{where}.generators[{i}]"))
                     for i, imgs in enumerate(spec.get("generators") or [])]
            g = gp.action_from_automorphisms(B, autos)
            job.actions[name] = (g, autos)
        elif kind == "coaction":
            hopf = _hopf(spec.get("hopf"), fld, f"{where}.hopf")
            names = list(B.names) + unique_names(hopf.ring.names, B.names)
            ambient = PresentedRing(fld, names)
            g = gp.action_from_coaction(B, hopf, _polys(ambient, spec.get("coaction"), f"{where}.coaction"))
            job.actions[name] = (g, None)
        else:
            raise JobError(f"{where}: kind must be 'group' or 'coaction'")
    for name, spec in _section(doc, "modules").items():
        where = f"modules.{name}"
        g, autos = _lookup(job.actions, spec.get("action"), "action", where)
        labels = [str(x) for x in spec.get("labels", [])]
        if autos is not None:
            mats = spec.get("matrices") or []
            if len(mats) != len(autos):
                raise JobError(f"{where}: need one matrix per group generator")
            pairs = [(a, [_polys(g.base, row, f"{where}.matrices[{i}]") for row in M])
                     for i, (a, M) in enumerate(zip(autos, mats))]
            job.modules[name] = eq.group_module(g, labels, pairs)
        else:
            cols = [_polys(g.arrows, c, f"{where}.columns[{k}]") for k, c in enumerate(spec.get("columns") or [])]
            job.modules[name] = eq.coaction_module(g, labels, cols)
    params = doc.get("params") or {}
    if not isinstance(params, dict):
        raise JobError("'params' must be a mapping")
    job.params = params
    return job


# ---------------------------------------------------------------------------
# payloads


def _fmt(R: PresentedRing, f) -> str:
    return R.format(R.reduce(f))


def _ring_payload(R: PresentedRing) -> dict:
    return {"variables": list(R.names), "relations": [R.format(g) for g in R.gb] if R.relations else []}


def _sequence_payload(res: cs.CanonicalSequenceResult) -> dict:
    C = res.map.target
    stages = []
    for s in res.stages:
        stages.append({
            "index": s.index,
            "module_generators": [_fmt(C, g) for g in s.module_generators],
            "presentation": _ring_payload(s.presentation),
        })
    out = {
        "length": res.length if isinstance(res.length, int) else str(res.length),
        "separated": res.separated,
        "dominant": res.dominant,
    }
    if res.dominance_witness is not None:
        out["dominance_witness"] = _fmt(res.map.source, res.dominance_witness)
    out["certificate"] = [_fmt(C, g) for g in res.certificate.generators]
    out["stages"] = stages
    if res.resolved:
        out["checks"] = {"chain": cs.verify_chain(res), "stage_condition_ii": cs.verify_stage_condition_ii(res)}
    return out


def _map_param(job: Job) -> tuple:
    name = job.params.get("map")
    if name is None:
        if len(job.maps) != 1:
            raise JobError("params.map is required when several maps are declared")
        name = next(iter(job.maps))
    return name, _lookup(job.maps, name, "map", "params.map")


def _action_param(job: Job) -> tuple:
    name = job.params.get("action")
    if name is None:
        if len(job.actions) != 1:
            raise JobError("params.action is required when several actions are declared")
        name = next(iter(job.actions))
    return name, _lookup(job.actions, name, "action", "params.action")[0]


def _invariants_param(job: Job, g) -> list:
    gens = job.params.get("invariants")
    if gens is None:
        if isinstance(g.origin, gp.ConstantGroup):
            return gp.reynolds_invariant_generators(g.base, g.origin)
        raise JobError("params.invariants is required for coaction groupoids")
    return _polys(g.base, gens, "params.invariants")


def _max_stages(job: Job, args) -> int:
    if args.max_stages is not None:
        return args.max_stages
    return int(job.params.get("max_stages", cs.DEFAULT_MAX_STAGES))


def cmd_validate(job: Job, args) -> tuple:
    out = {
        "field": repr(job.field),
        "rings": {n: _ring_payload(R) for n, R in job.rings.items()},
        "maps": {n: {"source": next(k for k, R in job.rings.items() if R is f.source),
                     "target": next(k for k, R in job.rings.items() if R is f.target),
                     "images": [_fmt(f.target, im) for im in f.images]} for n, f in job.maps.items()},
        "actions": {},
        "modules": {n: {"labels": m.labels, "rank": m.rank} for n, m in job.modules.items()},
    }
    for n, (g, _) in job.actions.items():
        entry = {"arrows": _ring_payload(g.arrows), "structure_replay": g.verify_structure()}
        if isinstance(g.origin, gp.ConstantGroup):
            entry["group_order"] = g.origin.order
        else:
            entry["hopf"] = g.origin.hopf.name or "custom"
        out["actions"][n] = entry
    return out, EXIT_OK


def cmd_canseq(job: Job, args) -> tuple:
    name, f = _map_param(job)
    res = cs.canonical_sequence(f, max_stages=_max_stages(job, args))
    out = {"map": name}
    out.update(_sequence_payload(res))
    return out, EXIT_OK if res.resolved else EXIT_BUDGET


def cmd_effepi(job: Job, args) -> tuple:
    name, f = _map_param(job)
    v = cs.is_effective_epi(f)
    out = {"map": name, "verdict": v.kind}
    if v.witness is not None:
        R = f.source if v.kind == "NotDominant" else f.target
        out["witness"] = _fmt(R, v.witness)
    if v.detail:
        out["detail"] = v.detail
    code = {"NotDominant": EXIT_NOT_DOMINANT, "Unresolved": EXIT_BUDGET}.get(v.kind, EXIT_OK)
    return out, code


def _stabilizer_payload(st: gp.StabilizerResult) -> dict:
    return {
        "ring": _ring_payload(st.ring),
        "finite": st.finite,
        "certificate": [_fmt(st.ring, g) for g in st.certificate.generators],
        "trivial": st.trivial,
    }


def cmd_stabilizer(job: Job, args) -> tuple:
    name, g = _action_param(job)
    return {"action": name, "stabilizer": _stabilizer_payload(gp.stabilizer(g))}, EXIT_OK


def cmd_complexity(job: Job, args) -> tuple:
    name, g = _action_param(job)
    gens = _invariants_param(job, g)
    out: dict[str, Any] = {"action": name, "invariants": [_fmt(g.base, a) for a in gens]}
    try:
        rep = gp.complexity(g, gens, max_stages=_max_stages(job, args))
    except NotDominant as exc:
        rep = exc.report
        D = rep.fiber_square.ring
        out.update({
            "complexity": str(rep.complexity),
            "dominant": False,
            "witness": _fmt(D, exc.witness),
            "fiber_square": _ring_payload(D),
            "stabilizer": _stabilizer_payload(rep.stabilizer),
            "caveat": rep.caveat,
            "disclaimer": rep.disclaimer,
        })
        return out, EXIT_NOT_DOMINANT
    out.update({
        "complexity": rep.complexity if isinstance(rep.complexity, int) else str(rep.complexity),
        "dominant": True,
        "fiber_square": _ring_payload(rep.fiber_square.ring),
        "stabilizer": _stabilizer_payload(rep.stabilizer),
        "sequence": _sequence_payload(rep.sequence),
        "caveat": rep.caveat,
        "disclaimer": rep.disclaimer,
    })
    return out, EXIT_OK if isinstance(rep.complexity, int) else EXIT_BUDGET


def cmd_invariants(job: Job, args) -> tuple:
    name, g = _action_param(job)
    out: dict[str, Any] = {"action": name}
    given = job.params.get("invariants")
    if given is not None:
        gens = _polys(g.base, given, "params.invariants")
        out["checked"] = [{"generator": _fmt(g.base, a), "invariant": ok}
                          for a, ok in zip(gens, gp.verify_invariants(g, gens))]
    if isinstance(g.origin, gp.ConstantGroup) and not g.base.relations:
        bound = job.params.get("degree_bound")
        gens = gp.reynolds_invariant_generators(g.base, g.origin, int(bound) if bound is not None else None)
        out["reynolds_generators"] = [_fmt(g.base, a) for a in gens]
    return out, EXIT_OK


def cmd_equivariant(job: Job, args) -> tuple:
    name = job.params.get("module")
    if name is None:
        if len(job.modules) != 1:
            raise JobError("params.module is required when several modules are declared")
        name = next(iter(job.modules))
    m = _lookup(job.modules, name, "module", "params.module")
    gens = _invariants_param(job, m.groupoid)
    v = eq.counit_check(m, gens)
    B = m.base

    def vec(w):
        return [_fmt(B, x) for x in w]

    out = {
        "module": name,
        "invariants": [_fmt(B, a) for a in gens],
        "invariant_generators": [vec(w) for w in v.invariants_generators],
        "counit_image": [vec(w) for w in v.counit_image],
        "is_isomorphism": v.is_isomorphism,
    }
    if v.cokernel_witness is not None:
        out["cokernel_witness"] = v.witness_label
    if v.kernel_witness is not None:
        out["kernel_witness"] = vec(v.kernel_witness)
    return out, EXIT_OK


HANDLERS = {
    "validate": cmd_validate,
    "canseq": cmd_canseq,
    "effepi": cmd_effepi,
    "stabilizer": cmd_stabilizer,
    "complexity": cmd_complexity,
    "invariants": cmd_invariants,
    "equivariant": cmd_equivariant,
}

INPUT_ERRORS = (ParseError, JobError, AmbientMismatch, IllDefinedMap, NotAGroup, CoactionAxiomFailure,
                ModularCase, ValueError, KeyError, TypeError)


def run(command: str, text: str, source: str, args) -> tuple[dict, int, dict]:
    """Execute one job; returns (report, exit code, timings)."""
    t0 = time.perf_counter()
    report: dict[str, Any] = {"command": command, "input": os.path.basename(source)}
    timings: dict[str, Any] = {}
    try:
        with budget(args.budget_spairs, args.budget_terms):
            job = load_job(text, source, command)
            t1 = time.perf_counter()
            timings["load_ms"] = round((t1 - t0) * 1000, 1)
            payload, code = HANDLERS[command](job, args)
        report["status"] = "ok" if code == EXIT_OK else "incomplete" if code == EXIT_BUDGET else "not-dominant"
        report["result"] = payload
    except NotDominant as exc:
        code = EXIT_NOT_DOMINANT
        report["status"] = "not-dominant"
        report["error"] = str(exc)
    except (BudgetExceeded, NotFinite) as exc:
        code = EXIT_BUDGET
        report["status"] = "incomplete"
        report["error"] = f"{type(exc).__name__}: {exc}"
    except InvariantViolation as exc:
        code = EXIT_INTERNAL
        report["status"] = "internal-error"
        report["error"] = f"{type(exc).__name__}: {exc}"
    except INPUT_ERRORS as exc:
        code = EXIT_INPUT
        report["status"] = "invalid-input"
        report["error"] = f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # noqa: BLE001 - surfaced as an internal error
        code = EXIT_INTERNAL
        report["status"] = "internal-error"
        report["error"] = f"{type(exc).__name__}: {exc}"
    report["exit_code"] = code
    timings["total_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    return report, code, timings


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gcx", description="Canonical sequences and groupoid complexity.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="job document (YAML)")
    p.add_argument("--max-stages", type=int, default=None, help="stage cap for canonical sequences (default 8)")
    p.add_argument("--budget-spairs", type=int, default=None, help="cap on S-pairs across the job")
    p.add_argument("--budget-terms", type=int, default=None, help="cap on terms in any basis")
    p.add_argument("--json", metavar="PATH", default=None, help="also write the JSON report to PATH")
    p.add_argument("--no-timings", action="store_true", help="omit the timings section")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        report = {"command": args.command, "input": os.path.basename(args.input), "status": "invalid-input",
                  "error": f"cannot read input: {exc.strerror}", "exit_code": EXIT_INPUT}
        sys.stdout.write(render_text(report))
        return EXIT_INPUT
    report, code, timings = run(args.command, text, args.input, args)
    shown = None if args.no_timings else timings
    sys.stdout.write(render_text(report, shown))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(render_json(report, shown))
    return code


if __name__ == "__main__":
    sys.exit(main())
