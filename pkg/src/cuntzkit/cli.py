"""Command-line entry point. JSON on stdout; exit 0 ok, 1 domain error, 2 usage."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import basis, intertwining as itw, lsc, metrics, unitary
from .extnat import ExtNatError, ExtNatVec, to_json_ext

SCHEMAS = """\
file formats (all carry "format": 1 on output; rationals are "p/q" strings):
  step function: {"space": {"kind": "closed"|"open"|"circle"} | {"kind": "graph",
                  "vertices": V, "edges": [[u, v], ...]},
                  "edges": [{"breakpoints": ["3/10", ...], "cells": [0, 1, ...],
                             "points": [0, ...]}, ...], "vertices": [0, ...]}
                 values are integers or "oo"; cells has one more entry than breakpoints
  spectrum:      ["1/8", "5/8"] or [["1/8", 2], ...] or inline text {1/8,5/8}
  block spectra: {"blocks": [spectrum, ...]} or a single spectrum
  AF model:      {"sizes": [[1], ...], "embeddings": [[[2]], ...]}
  intertwining:  {"S": system, "T": system, "c": [...], "d": [...], "n": [...], "m": [...]}
  system:        {"kind": "simplicial", "dims": [2], "links": [[[1, 1], [1, 0]]]}
                 or {"kind": "uhf", "q": [2], "links": [2]}
"""


class DomainError(Exception):
    pass


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _load(path_or_text: str):
    if os.path.exists(path_or_text):
        try:
            with open(path_or_text) as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read {path_or_text}: {exc}") from exc
    text = path_or_text.strip()
    if text.startswith("{") and text.endswith("}") and ":" not in text:
        # inline multiset {a,b,...}
        return [t.strip() for t in text[1:-1].split(",") if t.strip()]
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path_or_text!r} is neither a readable file nor JSON") from exc


def _supernatural(text: str) -> basis.Supernatural:
    try:
        return basis.Supernatural(tuple(int(p) for p in text.replace("*", ",").split(",")))
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def _step(path: str) -> lsc.StepFunction:
    return lsc.StepFunction.from_json(_load(path))


def _dump_grid(f: lsc.StepFunction, N: int) -> list:
    out = []
    for e in range(f.space.n_edges):
        out.append([[_q(Fraction(k, N)), to_json_ext(f.value(e, Fraction(k, N)))]
                    for k in range(1, N)])
    return out


# ---------------------------------------------------------------- commands

def cmd_decompose(a) -> dict:
    f = _step(a.f)
    ch = lsc.chain_decompose(f, a.level_cap)
    return {"format": 1, "chain": [U.ind.to_json() for U in ch], "infinite": ch.infinite,
            "text": [repr(U.ind) for U in ch]}


def cmd_epsilon(a) -> dict:
    f = _step(a.f)
    q = _supernatural(a.q)
    if a.profile:
        r, l = (int(x) for x in a.profile.split(","))
        g = basis.nccw_epsilon(f, basis.NccwProfile(r, l), q, a.n, raw=a.raw)
    else:
        g = basis.epsilon_n(f, q, a.n)
    out = {"format": 1, "function": g.to_json(), "text": repr(g)}
    if a.dump_grid:
        out["grid"] = _dump_grid(g, a.dump_grid)
    return out


def cmd_dist(a) -> dict:
    kind = a.kind
    A = metrics.SpectralMorphism.from_json(_load(a.spectra_a), kind)
    B = metrics.SpectralMorphism.from_json(_load(a.spectra_b), kind)
    if a.metric == "dd":
        res = metrics.dd_distance(A, B, _supernatural(a.q), a.n_max)
        return {"format": 1, "metric": "dd", **res.to_json()}
    v = metrics.dcu_distance(A, B)
    out = {"format": 1, "metric": "dcu", "value": "oo" if v == metrics.INF else _q(v), "attained": False}
    if v != metrics.INF:
        out["matching"] = [[_q(x), _q(y)] for x, y in metrics.bottleneck_matching(A, B)]
    return out


def cmd_verify_basis(a) -> dict:
    q = _supernatural(a.q)
    space = lsc.space_by_name(a.space)
    rng = random.Random(a.seed)
    samples = [lsc.random_step(space, rng) for _ in range(a.samples)]
    rep = basis.verify_axioms(q, space, samples, a.n)
    return {"format": 1, "q": str(q), "space": a.space, "n": a.n, "samples": a.samples,
            "passed": rep.passed, "checks": rep.summary()}


def _random_samples(system: itw.InductiveSystem, rng: random.Random, count: int) -> list:
    out = []
    for _ in range(count):
        k = rng.randint(0, 3)
        st = system.stage(k)
        if isinstance(st, itw.SimplicialStage):
            out.append(itw.Eventual(k, ExtNatVec(tuple(rng.randint(0, 5) for _ in range(st.dim)))))
        else:
            out.append(itw.Eventual(k, basis.Compact(Fraction(rng.randint(0, 8), st.q.q(2)))))
    return out


def cmd_intertwine(a) -> dict:
    data = itw.IntertwiningData.from_json(_load(a.data))
    one = itw.check_one_sided(data, a.stages)
    out = {"format": 1, "one_sided": one.to_json()}
    if data.d:
        out["two_sided"] = itw.check_two_sided(data, a.stages).to_json()
    if a.verify_iso:
        rng = random.Random(a.seed)
        rep = itw.verify_iso(data, _random_samples(data.S, rng, a.samples),
                             _random_samples(data.T, rng, a.samples), a.horizon, a.stages)
        out["iso"] = rep.to_json()
    return out


def _blocks(data) -> list:
    if isinstance(data, dict) and "blocks" in data:
        return [unitary.SpectrumMultiset.from_json(b) for b in data["blocks"]]
    return [unitary.SpectrumMultiset.from_json(data)]


def cmd_classify(a) -> dict:
    X = unitary.SpectrumMultiset.from_json(_load(a.x))
    Y = unitary.SpectrumMultiset.from_json(_load(a.y))
    return {"format": 1, **unitary.classify_step(X, Y, a.n).to_json()}


def cmd_classify_af(a) -> dict:
    model = unitary.AfUnitaryModel.from_json(_load(a.model))
    tr = unitary.af_uniqueness_demo(model, _blocks(_load(a.u)), _blocks(_load(a.v)), a.n, a.horizon)
    return tr.to_json()


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuntzkit", description="Exact computations with concrete Cuntz semigroups.",
                                epilog=SCHEMAS, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--output", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)

    s = sub.add_parser("decompose", parents=[common], help="chain of superlevel open sets of a step function")
    s.add_argument("--f", required=True)
    s.add_argument("--level-cap", type=_positive, default=32)
    s.set_defaults(run=cmd_decompose)

    s = sub.add_parser("epsilon", parents=[common], help="basis cut-down eps_n of a step function")
    s.add_argument("--f", required=True)
    s.add_argument("--q", default="2", help="comma-separated primes, cycled")
    s.add_argument("--n", type=_nonneg, required=True)
    s.add_argument("--profile", help="r,l for a pullback semigroup member")
    s.add_argument("--raw", action="store_true", help="with --profile: plain eps_n plus stability check")
    s.add_argument("--dump-grid", type=_positive, metavar="N", help="also sample values at k/N")
    s.set_defaults(run=cmd_epsilon)

    s = sub.add_parser("dist", parents=[common], help="dd or d_Cu between spectral morphisms")
    s.add_argument("--metric", choices=("dd", "dcu"), required=True)
    s.add_argument("--q", default="2")
    s.add_argument("--spectra-a", required=True)
    s.add_argument("--spectra-b", required=True)
    s.add_argument("--kind", choices=("circle", "closed"), default="circle")
    s.add_argument("--n-max", type=_positive, default=12)
    s.set_defaults(run=cmd_dist)

    s = sub.add_parser("verify-basis", parents=[common], help="randomized check of the basis axioms")
    s.add_argument("--q", default="2")
    s.add_argument("--space", default="closed", choices=("closed", "open", "circle", "theta"))
    s.add_argument("--n", "--n-max", dest="n", type=_positive, default=3)
    s.add_argument("--samples", type=_positive, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(run=cmd_verify_basis)

    s = sub.add_parser("intertwine", parents=[common], help="check approximate intertwining data")
    s.add_argument("--data", required=True)
    s.add_argument("--stages", type=_positive, default=8)
    s.add_argument("--horizon", type=_positive, default=20)
    s.add_argument("--verify-iso", action="store_true")
    s.add_argument("--samples", type=_positive, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(run=cmd_intertwine)

    s = sub.add_parser("classify", parents=[common], help="match two spectra at resolution n")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("classify-af", parents=[common], help="stage-lifting pipeline in a diagonal AF model")
    s.add_argument("--model", required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--v", required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--horizon", type=_positive, default=30)
    s.set_defaults(run=cmd_classify_af)
    return p


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        return "\n".join(f"{pad}{k}:" + ("\n" + _text(v, indent + 1) if isinstance(v, (dict, list)) and v
                                         else f" {v}") for k, v in obj.items())
    if isinstance(obj, list):
        flat = lambda v: isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v)
        return "\n".join(f"{pad}- ({', '.join(map(str, v))})" if flat(v)
                         else _text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in obj)
    return f"{pad}{obj}"


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.run(args)
    except (DomainError, ValueError, KeyError, TypeError, ExtNatError) as exc:
        err = {"format": 1, "error": type(exc).__name__, "message": str(exc)}
        out.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    if args.output == "text":
        out.write(_text(result) + "\n")
    else:
        out.write(json.dumps(result, sort_keys=True) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
