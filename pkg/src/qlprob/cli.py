"""Command-line front end: build or parse a lattice, classify it,
derive and solve its state constraints, check valuations, run the
projector-lattice and combination-rule pipelines.

Every command prints one JSON document to standard output (always with
"schema": 1, even on failure) and signals through its exit code:
0 success, 1 semantic failure (infeasible, check failed, cap), 2 bad
usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import builders
from .core import CapExceeded, LatticeError, NotOrthomodular, OrthoLattice
from .classify import classify, ClassificationReport
from .io import (
    ParseError,
    document_from_lattice,
    emit_report,
    lattice_from_document,
    parse_lattice,
    parse_valuation,
    serialize_lattice,
    to_dot,
)
from . import funceq, hilbert, states


class SourceError(Exception):
    pass


def load_source(spec: str):
    """Resolve `powerset:3`-style builder specs or `.lat` paths to a
    built structure.  Returns (canonical name, lattice)."""
    if spec.endswith(".lat") or Path(spec).is_file():
        try:
            text = Path(spec).read_text()
        except OSError as err:
            raise SourceError(f"cannot read {spec}: {err}")
        doc = parse_lattice(text)
        return doc.name, lattice_from_document(doc)
    name, _, arg = spec.partition(":")
    try:
        if name == "powerset":
            return spec, builders.powerset(int(arg or 3))
        if name == "mo":
            return spec, builders.mo(int(arg or 2))
        if name == "l12" and not arg:
            return spec, builders.firefly_l12()
        if name == "n5" and not arg:
            return spec, builders.n5()
        if name == "o6" and not arg:
            return spec, builders.o6()
    except ValueError as err:
        raise SourceError(f"bad builder argument in {spec!r}: {err}")
    raise SourceError(
        f"unknown lattice source {spec!r}; expected powerset:<n>, mo:<n>, "
        "l12, n5, o6, or a .lat file"
    )


def _classification_payload(name: str, report: ClassificationReport) -> dict:
    return {
        "source": name,
        "elements": list(report.names),
        "is_lattice": report.is_lattice,
        "is_ortholattice": report.is_ortholattice,
        "is_distributive": report.is_distributive,
        "is_modular": report.is_modular,
        "is_orthomodular": report.is_orthomodular,
        "is_boolean": report.is_boolean,
        "is_atomic": report.is_atomic,
        "is_atomistic": report.is_atomistic,
        "witnesses": {law: list(report.witness_names(law)) for law in report.witnesses},
        "blocks": (
            None
            if report.blocks is None
            else [[report.names[e] for e in block] for block in report.blocks]
        ),
    }


def cmd_classify(args) -> int:
    name, obj = load_source(args.source)
    report = classify(obj)
    payload = _classification_payload(name, report)
    if args.dot:
        payload["dot"] = to_dot(obj, name)
    _emit(payload)
    return 0


def _valuation_payload(valuation: states.Valuation) -> dict:
    return dict(zip(valuation.lattice.names, valuation.values))


def cmd_states(args) -> int:
    name, obj = load_source(args.source)
    if not isinstance(obj, OrthoLattice):
        _emit({"source": name, "error": "source has no orthocomplement"})
        return 2
    payload = {"source": name, "mode": args.mode}
    if args.mode == "relations":
        relations = states.implied_affine_relations(obj)
        payload["atoms"] = [obj.names[a] for a in obj.lattice.atoms]
        payload["relations"] = [
            {
                "display": rel.display(),
                "coeffs": dict(zip(rel.atoms, rel.coeffs)),
                "rhs": rel.rhs,
            }
            for rel in relations
        ]
    elif args.mode == "extremes":
        vertices = states.extreme_states(obj, cap=args.cap or 1024)
        payload["count"] = len(vertices)
        payload["vertices"] = [_valuation_payload(v) for v in vertices]
    else:
        valuation = states.find_state(obj)
        payload["valuation"] = _valuation_payload(valuation)
        payload["verified"] = states.is_state(obj, valuation).passed
    _emit(payload)
    return 0


def cmd_check(args) -> int:
    name, obj = load_source(args.source)
    if not isinstance(obj, OrthoLattice):
        _emit({"source": name, "error": "source has no orthocomplement"})
        return 2
    vdoc = parse_valuation(Path(args.valuation).read_text(), exact=args.exact)
    if vdoc.lattice_name != name:
        _emit({
            "source": name,
            "error": f"valuation is for {vdoc.lattice_name!r}, not {name!r}",
        })
        return 2
    entries = vdoc.entries
    if args.float:
        entries = tuple((k, float(v)) for k, v in entries)
    valuation = states.valuation_from_document(obj, entries)
    report = states.is_state(obj, valuation, args.tolerance)
    _emit({
        "source": name,
        "valuation": args.valuation,
        "passed": report.passed,
        "violations": [
            {"kind": v.kind, "elements": list(v.elements), "residual": v.residual}
            for v in report.violations
        ],
        "complement_residual": report.complement_residual,
    })
    return 0 if report.passed else 1


def _parse_vector(text: str) -> list[complex]:
    tokens = text.strip().strip("()").split(",")
    return [complex(tok.strip().replace(" ", "")) for tok in tokens if tok.strip()]


def _entry_to_complex(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, list) and len(entry) == 2:
        return complex(entry[0], entry[1])
    raise ValueError(f"bad complex entry {entry!r}; use a number or [re, im]")


def _load_seeds(path: str) -> list[hilbert.Subspace]:
    """Each entry of the JSON list is one vector (entries as numbers or
    [re, im] pairs) seeding the line it spans; multidimensional seeds
    arise from joins during closure."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list) or not data:
        raise ValueError("seeds JSON must be a nonempty list of vectors")
    subspaces = []
    dimension = None
    for vector in data:
        vec = [_entry_to_complex(entry) for entry in vector]
        if dimension is None:
            dimension = len(vec)
        subspaces.append(hilbert.subspace_from_vectors(dimension, [vec]))
    return subspaces


def _load_rho(spec: str, d: int, seed: int) -> hilbert.DensityMatrix:
    if spec == "maxmixed":
        return hilbert.max_mixed(d)
    if spec == "random":
        return hilbert.random_density(d, np.random.default_rng(seed))
    if spec.startswith("pure:"):
        return hilbert.pure(_parse_vector(spec[len("pure:"):]))
    matrix = json.loads(Path(spec).read_text())
    rows = [[_entry_to_complex(entry) for entry in row] for row in matrix]
    return hilbert.DensityMatrix(np.array(rows, dtype=np.complex128))


def cmd_hilbert(args) -> int:
    seeds = _load_seeds(args.seeds)
    d = seeds[0].d
    ortho, embedding = hilbert.generate_sublattice(seeds, cap=args.cap or 256)
    rho = _load_rho(args.rho, d, args.seed)
    valuation = hilbert.born_valuation(rho, ortho, embedding)
    tolerance = args.tolerance if args.tolerance is not None else 1e-8
    report = states.is_state(ortho, valuation, tolerance)
    classification = classify(ortho)
    payload = {
        "dimension": d,
        "elements": len(embedding),
        "lattice": serialize_lattice(document_from_lattice(ortho, "generated")),
        "classification": {
            "is_orthomodular": classification.is_orthomodular,
            "is_modular": classification.is_modular,
            "is_distributive": classification.is_distributive,
            "is_boolean": classification.is_boolean,
        },
        "embedding": {
            name: {
                "dim": sub.dim,
                "basis": [
                    [[float(z.real), float(z.imag)] for z in sub.basis[:, k]]
                    for k in range(sub.dim)
                ],
            }
            for name, sub in zip(ortho.names, embedding)
        },
        "rho": args.rho,
        "valuation": _valuation_payload(valuation),
        "state_check": {
            "passed": report.passed,
            "violations": len(report.violations),
        },
    }
    if args.scan:
        scan = (
            states.inclusion_exclusion_scan
            if args.scan == "ie"
            else states.subadditivity_scan
        )
        hits = scan(ortho, valuation, tolerance)
        payload["scan"] = {
            "kind": args.scan,
            "pairs": [
                {
                    "pair": list(hit.pair),
                    "defect": hit.defect,
                    **(
                        {"strict_decomposition": hit.strict_decomposition}
                        if hit.strict_decomposition is not None
                        else {}
                    ),
                }
                for hit in hits
            ],
        }
    if args.dot:
        payload["dot"] = to_dot(ortho, "generated")
    _emit(payload)
    return 0


def _load_rule(spec: str, want_arity: int) -> funceq.CoxFunction:
    if spec in funceq._BUILTINS:
        return funceq.builtin(spec)
    path = Path(spec)
    if not path.is_file():
        raise SourceError(f"unknown rule {spec!r} and no such sample file")
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([float(part) for part in line.split(",")])
    if want_arity == 1:
        return funceq.from_samples_unary([(r[0], r[1]) for r in rows])
    return funceq.from_samples_binary([(r[0], r[1], r[2]) for r in rows])


def cmd_cox(args) -> int:
    tolerance = args.tolerance if args.tolerance is not None else 1e-9
    if args.check == "involution":
        rule = _load_rule(args.rule, 1)
        report = funceq.check_involution(rule, tolerance=tolerance)
        _emit({
            "rule": args.rule,
            "check": "involution",
            "passed": report.passed,
            "max_residual": report.max_residual,
            "worst_x": report.worst_x,
            "identity": report.identity,
        })
        return 0 if report.passed else 1
    if args.check == "assoc":
        rule = _load_rule(args.rule, 2)
        report = funceq.check_associativity(rule, tolerance=tolerance)
        _emit({
            "rule": args.rule,
            "check": "assoc",
            "passed": report.passed,
            "max_residual": report.max_residual,
            "worst_triple": list(report.worst_triple) if report.worst_triple else None,
            "evaluated": report.evaluated,
            "skipped": report.skipped,
        })
        return 0 if report.passed else 1
    rule = _load_rule(args.rule, 2)
    try:
        result = funceq.regraduate(rule)
    except funceq.NotRegraduable as err:
        _emit({
            "rule": args.rule,
            "check": "regraduate",
            "passed": False,
            "reason": err.reason,
        })
        return 1
    _emit({
        "rule": args.rule,
        "check": "regraduate",
        "passed": True,
        "max_residual": result.max_residual,
        "anchor": result.anchor,
        "table": [{"x": x, "w": w} for x, w in zip(result.grid, result.values)],
    })
    return 0


def _emit(payload: dict):
    sys.stdout.write(emit_report(payload) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlprob",
        description="orthomodular lattices, their states, and where classical probability breaks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=None)
        p.add_argument("--dot", action="store_true")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--exact", action="store_true")
        group.add_argument("--float", action="store_true")

    p = sub.add_parser("classify", help="order and law analysis of a lattice")
    p.add_argument("source")
    common(p)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("states", help="state polytope artifacts")
    p.add_argument("source")
    p.add_argument("mode", choices=["find", "extremes", "relations"])
    common(p)
    p.set_defaults(run=cmd_states)

    p = sub.add_parser("check", help="verify a valuation file against a lattice")
    p.add_argument("source")
    p.add_argument("valuation")
    common(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("hilbert", help="generate a projector lattice and its Born valuation")
    p.add_argument("seeds", help="JSON file of seed subspaces")
    p.add_argument("--rho", default="maxmixed",
                   help="maxmixed | random | pure:<vector> | matrix JSON path")
    p.add_argument("--scan", choices=["ie", "subadd"], default=None)
    common(p)
    p.set_defaults(run=cmd_hilbert)

    p = sub.add_parser("cox", help="combination-rule checks and regraduation")
    p.add_argument("rule", help="builtin name or samples CSV")
    p.add_argument("check", choices=["involution", "assoc", "regraduate"])
    common(p)
    p.set_defaults(run=cmd_cox)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ParseError, SourceError, states.DomainMismatch,
            hilbert.DimensionMismatch, json.JSONDecodeError, OSError,
            ValueError, TypeError) as err:
        _emit({"error": str(err), "kind": type(err).__name__})
        return 2
    except NotOrthomodular as err:
        _emit({"error": str(err), "kind": "NotOrthomodular"})
        return 2
    except (states.Infeasible, CapExceeded, states.NotAState,
            funceq.TooManySkips, funceq.DomainEscape,
            hilbert.NumericalBreakdown) as err:
        _emit({"error": str(err), "kind": type(err).__name__})
        return 1
    except LatticeError as err:
        _emit({"error": str(err), "kind": type(err).__name__})
        return 2


if __name__ == "__main__":
    sys.exit(main())
