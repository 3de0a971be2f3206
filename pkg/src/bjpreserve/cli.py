"""Command line front end.

Exit codes: 0 success, 2 parse/usage error, 3 shape mismatch, 4 principled
failure (violation found, decomposition or factorization failed), 5 exceptional
shape (C, C+C, M_2) for ``decompose``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bj, jsonio
from .core import ShapeMismatch, op_norm, random_element, random_unitary
from .gallery import GALLERY, run_gallery, transpose_map
from .orthograph import build_orthograph, components, export_dot, export_json, sampled_diameters
from .preservers import (
    DECOMPOSE_TOL,
    DecompositionError,
    ExceptionalShape,
    NotSurjective,
    from_canonical,
    decompose,
    is_surjection,
    map_distance,
    random_canonical,
    reconstruction_error,
    verify_mutual_preserver,
    verify_singularity_preserver,
)
from .singularity import factor_singularity_preserver, random_factorization

EXIT_OK, EXIT_PARSE, EXIT_SHAPE, EXIT_FAIL, EXIT_EXCEPTIONAL = 0, 2, 3, 4, 5

GEN_KINDS = ("element", "unitary", "pair", "canonical", "canonical-map", "factorization-map", "transpose-map")


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    shape: str | None = None
    seed: int = 0
    trials: int = 1000
    tol: float | None = None
    name: str | None = None
    kind: str | None = None
    samples: int = 20
    structured: bool = True
    skip_surjectivity: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - names)
        if unknown:
            raise ValueError(f"unknown config fields: {unknown}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self):
        if self.trials < 0 or self.samples < 1:
            raise ValueError("trials must be >= 0 and samples >= 1")
        if self.tol is not None and not 0 < self.tol < 1:
            raise ValueError("tol must lie in (0, 1)")
        if self.command in ("gen", "orthograph") and self.shape is None and self.kind != "transpose-map":
            raise ValueError(f"{self.command} needs --shape")


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _emit(obj, out=None):
    text = jsonio.dumps(obj)
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def _read(path, parser):
    try:
        return parser(jsonio.load(path))
    except (OSError, json.JSONDecodeError, jsonio.SchemaError, ShapeMismatch) as e:
        raise CliError(EXIT_PARSE, f"cannot parse {path}: {e}") from e


def cmd_check(cfg: RunConfig):
    a, b = (_read(p, jsonio.element_from_json) for p in cfg.inputs)
    if a.shape != b.shape:
        raise CliError(EXIT_SHAPE, f"shapes {a.shape} and {b.shape} differ")
    tol = cfg.tol or bj.BJ_TOL
    w = bj.strong_bj_witness(a, b, tol) if op_norm(a) > 0 else None
    _emit({
        "strong_ab": bj.strong_bj(a, b, tol),
        "strong_ba": bj.strong_bj(b, a, tol),
        "mutual": bj.mutual_strong_bj(a, b, tol),
        "dist_ab": bj.dist_to_right_ideal(a, b),
        "dist_ba": bj.dist_to_right_ideal(b, a),
        "norm_a": op_norm(a),
        "norm_b": op_norm(b),
        "witness": w.to_dict() if w is not None else None,
    }, cfg.out)


def cmd_dist(cfg: RunConfig):
    a, b = (_read(p, jsonio.element_from_json) for p in cfg.inputs)
    if a.shape != b.shape:
        raise CliError(EXIT_SHAPE, f"shapes {a.shape} and {b.shape} differ")
    _emit({"dist_ab": bj.dist_to_right_ideal(a, b), "norm_a": op_norm(a)}, cfg.out)


def _violation_json(w):
    if w is None:
        return None
    return {"a": w.a, "b": w.b, "image_a": w.image_a, "image_b": w.image_b, **w.diagnostics()}


def cmd_decompose(cfg: RunConfig):
    m = _read(cfg.inputs[0], jsonio.map_from_json)
    tol = cfg.tol or DECOMPOSE_TOL
    try:
        c = decompose(m, tol)
    except ExceptionalShape as e:
        _emit({"status": "exceptional-shape", "reason": e.reason}, cfg.out)
        return EXIT_EXCEPTIONAL
    except DecompositionError as e:
        w = verify_mutual_preserver(m, cfg.trials, cfg.seed) if is_surjection(m) else None
        _emit({"status": "failed", "step": e.step, "reason": e.reason, "violation": _violation_json(w)}, cfg.out)
        return EXIT_FAIL
    _emit({"status": "ok", "canonical": jsonio.canonical_to_json(c),
           "reconstruction_error": reconstruction_error(m, c)}, cfg.out)
    return EXIT_OK


def cmd_factor(cfg: RunConfig):
    m = _read(cfg.inputs[0], jsonio.map_from_json)
    tol = cfg.tol or DECOMPOSE_TOL
    try:
        f = factor_singularity_preserver(m, tol)
    except DecompositionError as e:
        sw = verify_singularity_preserver(m, seed=cfg.seed)
        _emit({"status": "failed", "step": e.step, "reason": e.reason,
               "singularity_witness": None if sw is None else
               {"element": sw.element, "image": sw.image, "kind": sw.kind}}, cfg.out)
        return EXIT_FAIL
    err = map_distance(f.to_map(), m) / m.op_norm()
    _emit({"status": "ok", "factorization": jsonio.factorization_to_json(f),
           "reconstruction_error": err}, cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig):
    m = _read(cfg.inputs[0], jsonio.map_from_json)
    try:
        w = verify_mutual_preserver(m, cfg.trials, cfg.seed, require_surjective=not cfg.skip_surjectivity,
                                    tol=cfg.tol or bj.BJ_TOL)
    except NotSurjective:
        _emit({"status": "not-surjective"}, cfg.out)
        return EXIT_FAIL
    sw = verify_singularity_preserver(m, seed=cfg.seed)
    _emit({
        "mutual_preserver": w is None,
        "violation": _violation_json(w),
        "singularity_preserver": sw is None,
        "singularity_witness": None if sw is None else {"element": sw.element, "image": sw.image, "kind": sw.kind},
        "trials": cfg.trials,
        "seed": cfg.seed,
    }, cfg.out)
    return EXIT_OK if w is None else EXIT_FAIL


def cmd_gen(cfg: RunConfig):
    shape = jsonio.as_shape_arg(cfg.shape) if cfg.shape else None
    kind = cfg.kind
    if kind == "element":
        obj = jsonio.element_to_json(random_element(shape, cfg.seed))
    elif kind == "unitary":
        obj = jsonio.element_to_json(random_unitary(shape, cfg.seed))
    elif kind == "pair":
        a, b = bj.gen_mutual_pair(shape, cfg.seed)
        if cfg.out:
            stem = Path(cfg.out)
            for tag, x in (("a", a), ("b", b)):
                stem.with_name(f"{stem.stem}_{tag}.json").write_text(jsonio.dumps(x))
        _emit({"a": a, "b": b})
        return EXIT_OK
    elif kind == "canonical":
        obj = jsonio.canonical_to_json(random_canonical(shape, cfg.seed))
    elif kind == "canonical-map":
        obj = jsonio.map_to_json(from_canonical(random_canonical(shape, cfg.seed)))
    elif kind == "factorization-map":
        obj = jsonio.map_to_json(random_factorization(shape, cfg.seed).to_map())
    elif kind == "transpose-map":
        obj = jsonio.map_to_json(transpose_map(shape or (3,)))
    else:
        raise CliError(EXIT_PARSE, f"unknown kind {kind!r}; choose from {', '.join(GEN_KINDS)}")
    _emit(obj, cfg.out)
    return EXIT_OK


def cmd_gallery(cfg: RunConfig):
    if cfg.name not in GALLERY:
        raise CliError(EXIT_PARSE, f"unknown gallery fixture {cfg.name!r}; choose from {', '.join(GALLERY)}")
    _emit(run_gallery(cfg.name, cfg.seed, cfg.trials), cfg.out)
    return EXIT_OK


def cmd_orthograph(cfg: RunConfig):
    shape = jsonio.as_shape_arg(cfg.shape)
    g = build_orthograph(shape, cfg.samples, cfg.seed, cfg.structured, cfg.tol or bj.BJ_TOL)
    summary = {
        "shape": list(shape.dims),
        "seed": cfg.seed,
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "components": len(components(g)),
        "isolated": sum(d == 0 for d in g.degrees()),
        "sampled_diameters": sampled_diameters(g),
    }
    if cfg.out:
        d = Path(cfg.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{g.basename()}.dot").write_text(export_dot(g))
        (d / f"{g.basename()}.json").write_text(export_json(g))
        summary["files"] = [f"{g.basename()}.dot", f"{g.basename()}.json"]
    sys.stdout.write(jsonio.dumps(summary))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "dist": cmd_dist,
    "decompose": cmd_decompose,
    "factor": cmd_factor,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "gallery": cmd_gallery,
    "orthograph": cmd_orthograph,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bjpreserve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials=True):
        sp.add_argument("--out", help="also write the output here")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=None, help="override the default tolerance")
        if trials:
            sp.add_argument("--trials", type=int, default=1000)

    helps = {
        "check": "strong orthogonality in both directions, with a witness",
        "dist": "distance from a to the right ideal generated by b",
        "decompose": "recover the canonical form of a preserver",
        "factor": "factor a singularity preserver as P op(A) Q",
        "verify": "search for pairs whose orthogonality the map breaks",
    }
    for name in ("check", "dist"):
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("inputs", nargs=2, metavar="ELEMENT.json")
        common(sp, trials=False)
    for name in ("decompose", "factor", "verify"):
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("inputs", nargs=1, metavar="MAP.json")
        common(sp)
        if name == "verify":
            sp.add_argument("--skip-surjectivity", action="store_true")
    sp = sub.add_parser("gen", help="generate random objects")
    sp.add_argument("kind", choices=GEN_KINDS)
    sp.add_argument("--shape")
    common(sp, trials=False)
    sp = sub.add_parser("gallery", help="run an exceptional-case fixture")
    sp.add_argument("name", choices=GALLERY)
    common(sp)
    sp = sub.add_parser("orthograph", help="sample an orthograph and export DOT/JSON")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--no-structured", dest="structured", action="store_false")
    common(sp, trials=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_dict(vars(args))
        return COMMANDS[cfg.command](cfg) or EXIT_OK
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ShapeMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SHAPE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
