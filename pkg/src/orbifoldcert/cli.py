"""Scenario-driven command-line front end.

A scenario is one JSON document fixing an algebra, a Whittaker
function, a finite-order automorphism, exploration bounds, and a seed.
Each invocation runs a single command against it:

    orbifoldcert certify-orbifold scenarios/weyl_p2.json
    orbifoldcert virasoro-check scenarios/weyl_p2.json --json out.json

Exit codes: 0 when the run certified or the check passed, 2 for a
valid run that did not certify, 1 for input or internal errors (with a
message on standard error).

Scenario schema (all scalar values are canonical text, with ``z`` the
primitive root of unity of the automorphism order)::

    {
      "algebra":      {"kind": "weyl"} | {"kind": "heisenberg", "rank": 2},
      "whittaker":    {"lambda": ["1"], "mu": []}          (weyl)
                    | {"rows": [["1", "2"], ["0"]]}          (heisenberg)
                    | {"zero": true},
      "automorphism": {"kind": "theta"}
                    | {"kind": "gp", "p": 2}
                    | {"kind": "permutation", "images": [1, 0]}
                    | {"kind": "orthogonal", "matrix": [["0", "1"], ["-1", "0"]],
                       "order": 4},
      "scale":        {"D": "1", "N": 3, "L": 20000, "L_gen": 2, "U": "4"},
      "seed":         0,
      "options":      { command-specific, see the handlers }
    }

Reports carry a scenario digest (stable for a fixed file, seed, and
scale) and keep timing data under a separate "timings" key so the rest
of the body is byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from typing import Optional

from .certify import (
    Scale,
    SpanBasis,
    cyclicity_certificate,
    distinctness,
    orbifold_irreducibility_pipeline,
    separator,
    virasoro_check,
)
from .modes import (
    heisenberg_signature,
    orthogonal_automorphism,
    permutation_automorphism,
    theta_automorphism,
    weyl_cyclic_automorphism,
    weyl_signature,
)
from .modules import (
    ModuleVector,
    build_module,
    heisenberg_whittaker,
    parse_module_vector,
    vacuum_whittaker,
    weyl_whittaker,
    whittaker_type,
)
from .orbifold import CyclicAction, charge_decompose, verify_delta_lemma
from .scalars import parse_scalar


class ScenarioError(ValueError):
    """Raised for malformed or inconsistent scenario files."""


def _require(cond, message: str):
    if not cond:
        raise ScenarioError(message)


def build_signature(desc):
    _require(isinstance(desc, dict), "algebra descriptor must be an object")
    kind = desc.get("kind")
    if kind == "weyl":
        return weyl_signature()
    if kind == "heisenberg":
        rank = desc.get("rank", 1)
        _require(
            isinstance(rank, int) and rank >= 1,
            "heisenberg rank must be a positive integer",
        )
        return heisenberg_signature(rank)
    raise ScenarioError(f"unknown algebra kind {kind!r}")


def build_automorphism(sig, desc):
    _require(isinstance(desc, dict), "automorphism descriptor must be an object")
    kind = desc.get("kind")
    if kind == "theta":
        return theta_automorphism(sig)
    if kind == "gp":
        p = desc.get("p")
        _require(isinstance(p, int) and p >= 1, "gp needs an integer p >= 1")
        return weyl_cyclic_automorphism(sig, p)
    if kind == "permutation":
        images = desc.get("images")
        _require(isinstance(images, list), "permutation needs an images array")
        return permutation_automorphism(sig, images)
    if kind == "orthogonal":
        matrix = desc.get("matrix")
        order = desc.get("order")
        _require(isinstance(matrix, list), "orthogonal needs a matrix")
        _require(
            isinstance(order, int) and order >= 1,
            "orthogonal needs an integer order >= 1",
        )
        rows = [[Fraction(str(x)) for x in row] for row in matrix]
        return orthogonal_automorphism(sig, rows, order)
    raise ScenarioError(f"unknown automorphism kind {kind!r}")


def build_whittaker(sig, data, order: int):
    if data is None or data.get("zero"):
        return vacuum_whittaker(sig)
    _require(isinstance(data, dict), "whittaker data must be an object")

    def scalars(values):
        return [parse_scalar(str(s), order) for s in values]

    if sig.kind == "weyl":
        return weyl_whittaker(
            sig, lam=scalars(data.get("lambda", [])), mu=scalars(data.get("mu", []))
        )
    rows = data.get("rows")
    _require(isinstance(rows, list), "heisenberg whittaker data needs rows")
    return heisenberg_whittaker(sig, [scalars(row) for row in rows])


def parse_scale(data) -> Scale:
    if data is None:
        return Scale()
    _require(isinstance(data, dict), "scale must be an object")
    known = {"D", "N", "L", "L_gen", "U"}
    unknown = set(data) - known
    _require(not unknown, f"unknown scale fields {sorted(unknown)}")
    kwargs = {}
    if "D" in data:
        kwargs["max_degree"] = Fraction(str(data["D"]))
    if "N" in data:
        kwargs["index_bound"] = int(data["N"])
    if "L" in data:
        kwargs["budget"] = int(data["L"])
    if "L_gen" in data and data["L_gen"] is not None:
        kwargs["word_length"] = int(data["L_gen"])
    if "U" in data and data["U"] is not None:
        kwargs["universe_degree"] = Fraction(str(data["U"]))
    return Scale(**kwargs)


def apply_scale_override(scale: Scale, text: str) -> Scale:
    """Merge `D=..,N=..,L=..,Lgen=..,U=..` into an existing scale."""
    fields = {
        "max_degree": scale.max_degree,
        "index_bound": scale.index_bound,
        "word_length": scale.word_length,
        "budget": scale.budget,
        "universe_degree": scale.universe_degree,
    }
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        _require("=" in part, f"bad scale override {part!r}")
        key, _, value = part.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "D":
            fields["max_degree"] = Fraction(value)
        elif key == "N":
            fields["index_bound"] = int(value)
        elif key == "L":
            fields["budget"] = int(value)
        elif key == "Lgen":
            fields["word_length"] = int(value)
        elif key == "U":
            fields["universe_degree"] = Fraction(value)
        else:
            raise ScenarioError(f"unknown scale key {key!r}")
    return Scale(**fields)


def scenario_digest(command: str, scenario: dict, seed: int, scale: Scale) -> str:
    payload = json.dumps(
        {
            "command": command,
            "scenario": scenario,
            "seed": seed,
            "scale": scale.to_json(),
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return "sha256:" + hashlib.sha256(payload.encode("utf-8")).hexdigest()


class RunContext:
    """Everything a command handler needs, built once per invocation."""

    def __init__(self, scenario: dict, seed: int, scale: Scale):
        self.scenario = scenario
        self.seed = seed
        self.scale = scale
        self.sig = build_signature(scenario.get("algebra"))
        self.g = build_automorphism(self.sig, scenario.get("automorphism"))
        self.act = CyclicAction(self.g)
        self.whittaker = build_whittaker(
            self.sig, scenario.get("whittaker"), self.g.order
        )
        self.module = build_module(self.sig, self.whittaker)
        self.options = scenario.get("options") or {}


def _cmd_certify_orbifold(ctx: RunContext):
    report = orbifold_irreducibility_pipeline(
        ctx.module, ctx.act, scale=ctx.scale, seed=ctx.seed
    )
    lines = [f"verdict        {report.verdict}"]
    for cert in report.cyclicity:
        lines.append(
            f"  {cert.label}: {cert.verdict} "
            f"(rank {cert.rank}, {cert.applications} applications)"
        )
    if report.decomposition is not None:
        dec = report.decomposition
        lines.append(
            f"  charge components certified: "
            f"{sorted(j for j, c in dec.component_certs.items() if c.certified)}"
        )
        lines.append(f"  grading cross checks: {dec.cross_checks}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    code = 0 if report.certified else 2
    return code, report.to_json(), lines


def _cmd_whittaker_type(ctx: RunContext):
    handles = ctx.act.twisted_handles(ctx.module)
    types = [whittaker_type(h) for h in handles]
    dist = distinctness(types)
    lines = [f"twist {i}: {t}" for i, t in enumerate(types)]
    lines.append(f"distinct       {dist.passed}")
    body = {
        "types": [str(t) for t in types],
        "distinctness": dist.to_json(),
    }
    return 0, body, lines


def _cmd_separator(ctx: RunContext):
    target = ctx.options.get("target", 0)
    _require(isinstance(target, int), "separator target must be an integer")
    handles = list(ctx.act.twisted_handles(ctx.module))
    _require(0 <= target < len(handles), "separator target out of range")
    try:
        sep = separator(handles, target)
    except ValueError as exc:
        return 2, {"error": str(exc)}, [f"not separated: {exc}"]
    lines = [
        f"separator      {sep.expr}",
        f"achieved       {[str(c) for c in sep.achieved]}",
    ]
    return 0, sep.to_json(), lines


def _cmd_virasoro_check(ctx: RunContext):
    pairs = [tuple(p) for p in ctx.options.get("pairs", [[1, -1], [2, -2], [3, -3]])]
    _require(
        all(len(p) == 2 and all(isinstance(x, int) for x in p) for p in pairs),
        "pairs must be two-integer arrays",
    )
    n_vectors = ctx.options.get("vectors", 10)
    max_degree = Fraction(str(ctx.options.get("max_degree", 3)))
    report = virasoro_check(
        ctx.module, pairs, n_vectors=n_vectors, max_degree=max_degree,
        seed=ctx.seed,
    )
    lines = [
        f"residuals      {'all zero' if report.residuals_ok else 'NONZERO'}",
        f"declared c     {report.declared_c}",
        f"inferred c     {report.inferred_c}",
    ]
    return (0 if report.residuals_ok else 2), report.to_json(), lines


def _cmd_span(ctx: RunContext):
    texts = ctx.options.get("vectors")
    _require(
        isinstance(texts, list) and texts,
        "span needs options.vectors, a nonempty array of vector strings",
    )
    vectors = [
        parse_module_vector(str(t), ctx.sig, ctx.g.order) for t in texts
    ]
    from .certify import _VectorCodec

    codec = _VectorCodec(ctx.module)
    basis = SpanBasis()
    grew = [basis.insert(codec.row_of(v), tag=i) for i, v in enumerate(vectors)]
    body = {"rank": basis.rank, "grew": grew}
    lines = [f"rank           {basis.rank}", f"grew           {grew}"]
    code = 0
    query = ctx.options.get("query")
    if query is not None:
        qv = parse_module_vector(str(query), ctx.sig, ctx.g.order)
        combo = basis.membership(codec.row_of(qv))
        body["query"] = str(query)
        body["member"] = combo is not None
        body["combination"] = (
            None
            if combo is None
            else {str(i): str(c) for i, c in sorted(combo.items())}
        )
        lines.append(f"member         {combo is not None}")
        if combo is None:
            code = 2
    return code, body, lines


def _cmd_delta_check(ctx: RunContext):
    i = ctx.options.get("i", 0)
    j = ctx.options.get("j", 1)
    samples = ctx.options.get("samples", 20)
    _require(
        all(isinstance(x, int) for x in (i, j, samples)),
        "delta-check options i, j, samples must be integers",
    )
    report = verify_delta_lemma(
        ctx.act, ctx.module, i, j, samples=samples, seed=ctx.seed,
        index_bound=ctx.scale.index_bound,
    )
    body = {
        "p": report.p,
        "i": report.i,
        "j": report.j,
        "checked": report.checked,
        "passed": report.passed,
        "failures": list(report.failures),
    }
    lines = [f"checked        {report.checked}", f"passed         {report.passed}"]
    return (0 if report.passed else 2), body, lines


def _cmd_charge_decompose(ctx: RunContext):
    resolved = ctx.scale.resolved(ctx.act.p)
    dec = charge_decompose(ctx.module, ctx.act, resolved.max_degree)
    if dec.diagonal:
        components = {
            str(j): [str(m) for m in monos]
            for j, monos in dec.monomial_components.items()
        }
    else:
        components = {
            str(j): [str(v) for v in vecs]
            for j, vecs in dec.projected_components.items()
        }
    body = {
        "p": dec.p,
        "max_degree": str(dec.max_degree),
        "diagonal": dec.diagonal,
        "components": components,
        "charges": dec.charges(),
    }
    lines = [f"charge {j}: {len(items)} members" for j, items in components.items()]
    return 0, body, lines


_COMMANDS = {
    "certify-orbifold": _cmd_certify_orbifold,
    "whittaker-type": _cmd_whittaker_type,
    "separator": _cmd_separator,
    "virasoro-check": _cmd_virasoro_check,
    "span": _cmd_span,
    "delta-check": _cmd_delta_check,
    "charge-decompose": _cmd_charge_decompose,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbifoldcert",
        description="Exact certificates for Whittaker modules over "
        "cyclic orbifolds of the Heisenberg and Weyl vertex algebras.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("scenario", help="path to a scenario JSON file")
    parser.add_argument("--json", dest="json_path", help="write the JSON report here")
    parser.add_argument("--seed", type=int, default=None, help="override the seed")
    parser.add_argument(
        "--scale",
        default=None,
        help="override scale fields, e.g. D=1,N=3,L=20000,Lgen=2,U=4",
    )
    return parser


def run(command: str, scenario: dict, seed: Optional[int] = None,
        scale_override: Optional[str] = None) -> tuple[int, dict]:
    """Execute one command against a parsed scenario; returns
    (exit code, full report, human-readable lines)."""
    _require(isinstance(scenario, dict), "scenario must be a JSON object")
    unknown = set(scenario) - {
        "algebra", "whittaker", "automorphism", "scale", "seed", "options",
    }
    _require(not unknown, f"unknown scenario fields {sorted(unknown)}")
    effective_seed = scenario.get("seed", 0) if seed is None else seed
    _require(
        isinstance(effective_seed, int) and effective_seed >= 0,
        "seed must be a nonnegative integer",
    )
    scale = parse_scale(scenario.get("scale"))
    if scale_override:
        scale = apply_scale_override(scale, scale_override)
    t0 = time.perf_counter()
    ctx = RunContext(scenario, effective_seed, scale)
    code, body, lines = _COMMANDS[command](ctx)
    elapsed = time.perf_counter() - t0
    report = {
        "command": command,
        "digest": scenario_digest(command, scenario, effective_seed, scale),
        "scenario": scenario,
        "seed": effective_seed,
        "scale": scale.to_json(),
        "exit_code": code,
        "body": body,
        "timings": {"elapsed_s": round(elapsed, 6)},
    }
    return code, report, lines


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            scenario = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read scenario: {exc}", file=sys.stderr)
        return 1
    try:
        code, report, lines = run(
            args.command, scenario, seed=args.seed, scale_override=args.scale
        )
    except (ScenarioError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"command        {args.command}")
    print(f"digest         {report['digest']}")
    for line in lines:
        print(line)
    print(f"exit           {code}")
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
