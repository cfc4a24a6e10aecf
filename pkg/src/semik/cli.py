"""``semik`` command line: load a JSON input, run one decision, print a report."""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from dataclasses import dataclass, field

from semik import __version__, kernels
from semik import bratteli as br
from semik import io
from semik import kflow, lab, lattice, tropical
from semik.core import (
    SemiMatrix,
    is_idempotent_matrix,
    is_weakly_cancellative,
    kernel_flags,
    strong_idempotent_complement,
    table_flags,
    trop_str,
)
from semik.errors import MalformedFile, SemikError


@dataclass
class RunReport:
    subcommand: str
    inputs: dict
    flags: dict
    result: dict
    versions: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def to_json(self):
        return {"subcommand": self.subcommand, "inputs": self.inputs, "flags": self.flags,
                "result": self.result, "versions": self.versions, "elapsed_s": self.elapsed_s}


def versions() -> dict:
    return {"semik": __version__, "python": platform.python_version(), "backend": kernels.BACKEND}


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        if not value and prefix:
            out.append((prefix, "{}"))
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    else:
        out.append((prefix, json.dumps(value, sort_keys=True)))


def emit_report(report: RunReport, fmt: str = "json") -> str:
    doc = json.loads(io.dumps(report.to_json()))
    if fmt == "json":
        return io.dumps(doc)
    rows = []
    _flatten("", doc, rows)
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _load(path, parser, inputs):
    doc, raw = io.read_json(path)
    inputs[str(path)] = hashlib.sha256(raw).hexdigest()
    return parser(doc)


def _element(text: str) -> kflow.LimitElement:
    """``"k:a,b,..."`` -> element at stage ``k``."""
    try:
        stage, vec = text.split(":", 1)
        return kflow.LimitElement(int(stage), tuple(int(x) for x in vec.split(",")))
    except ValueError:
        raise MalformedFile(f"element {text!r} is not of the form stage:v1,v2,...") from None


# ---- subcommand bodies: (args, inputs) -> result dict

def cmd_bmod_analyze(args, inputs):
    M = _load(args.file, io.module_from_json, inputs)
    return {"projective": lattice.is_projective(M), "free_rank": lattice.is_free_bool(M),
            "cardinality": lattice.cardinality_class(M), "atoms": list(M.atoms),
            "weak_dimension": lattice.weak_dimension_bool(M)}


def cmd_trop_span(args, inputs):
    sp = _load(args.file, io.span_from_json, inputs)
    ext = tropical.extremal_generators(sp)
    free = tropical.is_free_trop(sp, depth=args.probe_depth)
    out = {"extremals": [] if ext is None else [io.trop_entries(g) for g in ext.generators],
           "dim_w": tropical.weak_dimension(sp), "freeness": free.verdict}
    if free.rank is not None:
        out["rank"] = free.rank
    if free.witness is not None:
        out["witness"] = [[trop_str(c) for c in lam] for lam in free.witness]
    return out


def cmd_bratteli_sk0(args, inputs):
    B = _load(args.file, io.diagram_from_json, inputs)
    sys_ = br.sk0_ultramatricial(B)
    out = {"system": sys_.to_json(),
           "stages": [g.to_json() for g in sys_.groups]}
    r = br.stable_rank(sys_)
    if r is not None:
        out["stable_rank"] = r
    return out


def cmd_bratteli_iso(args, inputs):
    B1 = _load(args.a, io.diagram_from_json, inputs)
    B2 = _load(args.b, io.diagram_from_json, inputs)
    return br.iso_ultramatricial(B1, B2, depth=args.depth).to_json()


def cmd_limit_eq(args, inputs):
    sys_ = _load(args.file, io.system_from_json, inputs)
    return kflow.limit_equal(sys_, _element(args.e1), _element(args.e2), depth=args.depth).to_json()


def cmd_limit_pos(args, inputs):
    sys_ = _load(args.file, io.system_from_json, inputs)
    return kflow.limit_positive(sys_, _element(args.e), depth=args.depth).to_json()


def cmd_semiring_classify(args, inputs):
    t = _load(args.file, io.table_from_json, inputs)
    bad = lab.validate_table(t)
    if bad is not None:
        return {"valid": False, "violation": {"axiom": bad.axiom, "witness": list(bad.witness)}}
    dec = lab.congruence_semisimple_decompose(t, max_order=args.max_order)
    factors = lab.classify_matrix_products(t, max_order=args.max_order)
    units = lab.primitive_orthogonal_units(t, max_order=args.max_order)
    return {"valid": True, "flags": table_flags(t).as_dict(),
            "congruence_semisimple": dec is not None,
            "decomposition": None if dec is None else dec.to_json(),
            "factors": None if factors is None else [list(f) for f in factors],
            "primitive_orthogonal_units": None if units is None else list(units)}


def cmd_matrix_check(args, inputs):
    A = _load(args.file, io.matrix_from_json, inputs)
    wc, witness = is_weakly_cancellative(A.kernel)
    out = {"kernel": A.kernel.label, "flags": kernel_flags(A.kernel).as_dict(),
           "weakly_cancellative": wc, "square": A.is_square}
    if witness is not None:
        out["cancellation_witness"] = [io.matrix_to_json(_scalar(A, x))["entries"][0] for x in witness]
    if A.is_square:
        idem = is_idempotent_matrix(A)
        out["idempotent"] = idem
        if idem:
            F = strong_idempotent_complement(A)
            out["complement"] = None if F is None else io.matrix_to_json(F)
    return out


def _scalar(A, x):
    return SemiMatrix(A.kernel, 1, 1, (x,))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semik", description="Semiring K-theory workbench.")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--version", action="version", version=f"semik {__version__}")
    sub = p.add_subparsers(dest="group", required=True, metavar="COMMAND")

    def leaf(parent, name, func, help_):
        q = parent.add_parser(name, help=help_)
        q.set_defaults(func=func, command=name)
        q.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
        return q

    bmod = sub.add_parser("bmod", help="finite Boolean semimodules").add_subparsers(dest="cmd", required=True)
    leaf(bmod, "analyze", cmd_bmod_analyze, "projectivity, freeness, cardinality").add_argument("file")

    trop = sub.add_parser("trop", help="tropical spans").add_subparsers(dest="cmd", required=True)
    q = leaf(trop, "span", cmd_trop_span, "extremals, weak dimension, freeness")
    q.add_argument("file")
    q.add_argument("--probe-depth", type=int, default=tropical.DEFAULT_PROBE_DEPTH)

    bra = sub.add_parser("bratteli", help="Bratteli presentations").add_subparsers(dest="cmd", required=True)
    leaf(bra, "sk0", cmd_bratteli_sk0, "stage groups of a presentation").add_argument("file")
    q = leaf(bra, "iso", cmd_bratteli_iso, "isomorphism of two limits")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--depth", type=int, default=br.DEFAULT_ISO_DEPTH)

    lim = sub.add_parser("limit", help="direct limit queries").add_subparsers(dest="cmd", required=True)
    q = leaf(lim, "eq", cmd_limit_eq, "equality of two limit classes")
    q.add_argument("file")
    q.add_argument("e1", help="stage:v1,v2,...")
    q.add_argument("e2", help="stage:v1,v2,...")
    q.add_argument("--depth", type=int, default=kflow.DEFAULT_DEPTH)
    q = leaf(lim, "pos", cmd_limit_pos, "positivity of a limit class")
    q.add_argument("file")
    q.add_argument("e", help="stage:v1,v2,...")
    q.add_argument("--depth", type=int, default=kflow.DEFAULT_DEPTH)

    sr = sub.add_parser("semiring", help="finite semiring tables").add_subparsers(dest="cmd", required=True)
    q = leaf(sr, "classify", cmd_semiring_classify, "congruence-semisimple classification")
    q.add_argument("file")
    q.add_argument("--max-order", type=int, default=lab.ORDER_CAP)

    mx = sub.add_parser("matrix", help="semiring matrices").add_subparsers(dest="cmd", required=True)
    leaf(mx, "check", cmd_matrix_check, "idempotency and complement").add_argument("file")
    return p


_NOT_FLAGS = {"func", "group", "cmd", "command", "format", "file", "a", "b", "e", "e1", "e2"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_FLAGS}
    inputs = {}
    start = time.perf_counter()
    try:
        result = args.func(args, inputs)
    except (SemikError, OSError) as exc:
        print(f"semik: error: {exc}", file=sys.stderr)
        return 2
    report = RunReport(f"{args.group} {args.command}", inputs, flags, result, versions(),
                       round(time.perf_counter() - start, 6))
    sys.stdout.write(emit_report(report, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
