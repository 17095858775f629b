"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 budget exceeded, 4 no
certificate exists. Errors are written to stderr as JSON
``{"code", "message", "context"}``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import _accel
from .groups import AbelianGroup, Group, GroupError, HeisenbergGroup, load_group, parse_tuple, tuple_from_words, tuple_to_json
from .moves import Certificate, CertificateError, MoveError
from .words import WordSyntaxError

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_NONE = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str, context: dict | None = None):
        super().__init__(message)
        self.code = code
        self.context = context or {}


def _builtin(name: str) -> Group:
    from .groups.library import heisenberg_table, standard_corpus

    corpus = standard_corpus()
    if name in corpus:
        return corpus[name]
    if name.startswith("Heis") and name[4:].isdigit():
        return heisenberg_table(int(name[4:]))
    raise CliError(EXIT_INVALID, f"unknown builtin group {name!r}", {"known": sorted(corpus)})


def _group(args) -> Group:
    spec = args.group
    if spec.startswith("builtin:"):
        return _builtin(spec.split(":", 1)[1])
    try:
        return load_group(spec)
    except FileNotFoundError as exc:
        raise CliError(EXIT_INVALID, f"group file not found: {spec}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INVALID, f"group file is not valid JSON: {exc}", {"file": spec}) from exc


def _tuple(g: Group, literal: str | None, words: str | None, what: str = "tuple") -> tuple:
    if words:
        return g.check_tuple(tuple_from_words(g, words))
    if literal:
        return g.check_tuple(parse_tuple(g, literal))
    raise CliError(EXIT_INVALID, f"missing {what}: pass a literal or a word list")


def _emit(doc, args):
    text = doc if isinstance(doc, str) else json.dumps(doc, sort_keys=True)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _query(g, args):
    from .explorer import GraphQuery

    conj = None
    if getattr(args, "conjugators", None):
        conj = parse_tuple(g, args.conjugators)
    return GraphQuery(g, args.n, args.mode, conj)


# commands


def cmd_components(args):
    from .explorer import components

    g = _group(args)
    rep = components(_query(g, args), budget=args.budget, backend=args.backend)
    doc = rep.to_json()
    doc["metadata"].pop("backend", None)
    _emit(doc, args)


def cmd_path(args):
    from .explorer import find_path

    g = _group(args)
    src = _tuple(g, args.source, args.source_words, "source")
    dst = _tuple(g, args.target, args.target_words, "target")
    q = _query(g, argparse.Namespace(n=len(src), mode=args.mode, conjugators=args.conjugators))
    cert = find_path(q, src, dst, budget=args.budget, backend=args.backend)
    if cert is None:
        raise CliError(EXIT_NONE, "no certificate exists: the tuples lie in different components",
                       {"source": tuple_to_json(g, src), "target": tuple_to_json(g, dst)})
    _emit(cert.to_json(), args)


def _certify(g: Group, t: tuple, mode: str, basis, extend_to=None) -> Certificate:
    from . import abelian, certify, structure

    if isinstance(g, HeisenbergGroup) and mode == "nielsen" and len(t) == 2 * g.k:
        return certify.heisenberg_canonicalize(g, t)
    if isinstance(g, AbelianGroup) and mode == "nielsen":
        return abelian.abelian_reduce(g, t)
    if not g.is_finite():
        raise CliError(EXIT_INVALID, f"no certificate recipe for this {g.kind} group in {mode} mode")
    if mode == "ac":
        if len(t) == 2:
            basis = basis or tuple(g.generators())
            return certify.ac_normalize_2gen_nilpotent(g, t, basis)
        raise CliError(EXIT_INVALID, "ac certificates are built for pairs; use `path --mode ac` otherwise")
    rank = structure.rank_and_weight(g)[0]
    if len(t) >= rank + 1:
        return certify.frattini_lift(g, len(t), t, basis)
    raise CliError(EXIT_INVALID, f"nielsen recipe needs n >= rank + 1 = {rank + 1}; use `path` for n = {len(t)}")


def cmd_certify(args):
    g = _group(args)
    t = _tuple(g, args.tuple, args.words)
    basis = _tuple(g, args.basis, None, "basis") if args.basis else None
    cert = _certify(g, t, args.mode, basis)
    _emit(cert.to_json(), args)


def cmd_canonicalize(args):
    from .explorer import GraphQuery, components, find_path

    g = _group(args)
    t = _tuple(g, args.tuple, args.words)
    if isinstance(g, (AbelianGroup, HeisenbergGroup)) and args.mode == "nielsen":
        try:
            cert = _certify(g, t, "nielsen", None)
        except CertificateError:
            cert = None
        if cert is not None:
            _emit({"canonical": tuple_to_json(g, cert.target), "certificate": cert.to_json()}, args)
            return
    if not g.is_finite():
        raise CliError(EXIT_INVALID, "canonical forms for this infinite group are not available")
    q = GraphQuery(g, len(t), args.mode)
    rep = components(q, budget=args.budget, backend=args.backend)
    cid = rep.component_id(t)
    if cid is None:
        raise CliError(EXIT_INVALID, f"tuple is not a vertex of the {args.mode} graph")
    canon = rep.representatives[cid]
    cert = find_path(q, t, canon, budget=args.budget, backend=args.backend)
    _emit({"canonical": tuple_to_json(g, canon), "certificate": cert.to_json()}, args)


def cmd_predict(args):
    from .abelian import euler_phi, predicted_components

    g = _group(args)
    if isinstance(g, AbelianGroup):
        form = g.form
    else:
        raise CliError(EXIT_INVALID, "predict needs an abelian group spec", {"kind": g.kind})
    pred = predicted_components(form, args.n)
    doc = {"components": pred, "group": str(form), "n": args.n, "rank": form.rank}
    if form.torsion:
        doc["m1"] = form.torsion[0]
        doc["phi_m1"] = euler_phi(form.torsion[0])
    _emit(doc, args)


def cmd_verify(args):
    if args.certificate:
        with open(args.certificate) as fh:
            obj = json.load(fh)
        try:
            cert = Certificate.from_json(obj)
        except CertificateError as exc:
            raise CliError(EXIT_INVALID, f"certificate does not replay: {exc}", {"file": args.certificate}) from exc
        _emit({"replay": True, "kind": cert.kind, "length": len(cert)}, args)
        return
    if args.what is None:
        raise CliError(EXIT_INVALID, "verify needs one of preimage, abelian-count, corpus or --certificate")
    if args.what == "corpus":
        from .groups.library import standard_corpus
        from .structure import is_class_C, is_nilpotent

        rows = {}
        for name, g in standard_corpus().items():
            c, nil = is_class_C(g), is_nilpotent(g)
            rows[name] = {"order": g.n, "class_C": c, "nilpotent": nil, "agree": c == nil}
        _emit({"groups": rows, "mismatches": sum(not r["agree"] for r in rows.values())}, args)
        return
    g = _group(args)
    if args.n is None:
        raise CliError(EXIT_INVALID, f"verify {args.what} needs --n")
    if args.what == "preimage":
        from .explorer import verify_preimage_theorem

        _emit(verify_preimage_theorem(g, args.n, args.mode, budget=args.budget, backend=args.backend), args)
        return
    from .abelian import predicted_components
    from .explorer import GraphQuery, components

    if not isinstance(g, AbelianGroup):
        raise CliError(EXIT_INVALID, "abelian-count needs an abelian group spec")
    pred = predicted_components(g.form, args.n)
    rep = components(GraphQuery(g, args.n, "nielsen"), budget=args.budget, backend=args.backend)
    observed = rep.component_count if rep.vertex_count else "empty"
    _emit({"predicted": pred, "observed": observed, "holds": pred == observed, "vertices": rep.vertex_count}, args)


def cmd_export(args):
    from .explorer import export_graph

    g = _group(args)
    _emit(export_graph(_query(g, args), args.format, budget=args.budget, backend=args.backend), args)


def cmd_inspect(args):
    g = _group(args)
    form, _ = g.abelianization()
    doc = {
        "kind": g.kind,
        "finite": g.is_finite(),
        "order": g.order() if g.is_finite() else "infinite",
        "abelianization": str(form),
        "generators": tuple_to_json(g, g.generators()),
    }
    if g.is_finite():
        from . import structure

        rank, weight = structure.rank_and_weight(g)
        doc.update(
            rank=rank,
            weight=weight,
            nilpotent=structure.is_nilpotent(g),
            class_C=structure.is_class_C(g),
            frattini_order=structure.frattini(g).order,
            derived_order=structure.derived_subgroup(g).order,
            maximal_subgroups=[{"order": m.order, "normal": m.is_normal} for m in structure.maximal_subgroups(g)],
        )
    _emit(doc, args)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acnielsen", description="Nielsen and Andrews-Curtis graphs of groups")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, group=True):
        if group:
            sp.add_argument("--group", required=True, help="group spec JSON file, or builtin:NAME (e.g. builtin:Q8)")
        if graph:
            sp.add_argument("--mode", choices=("nielsen", "ac"), default="nielsen")
            sp.add_argument("--budget", type=int, default=10**7, help="max tuple slots |G|^n")
            sp.add_argument("--workers", type=int, default=None)
            sp.add_argument("--backend", choices=("numba", "numpy"), default=None)
        sp.add_argument("-o", "--output", help="write the document here instead of stdout")

    sp = sub.add_parser("components", help="component partition of the Nielsen/AC graph")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--conjugators", help="AC conjugator set as a tuple literal 'a;b;...'")
    sp.set_defaults(func=cmd_components)

    sp = sub.add_parser("path", help="shortest certificate between two tuples")
    common(sp)
    sp.add_argument("--from", dest="source")
    sp.add_argument("--from-words", dest="source_words")
    sp.add_argument("--to", dest="target")
    sp.add_argument("--to-words", dest="target_words")
    sp.add_argument("--conjugators")
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("certify", help="constructive certificate to the canonical tuple")
    common(sp)
    sp.add_argument("--tuple")
    sp.add_argument("--words", help="tuple as words over the distinguished generators, 'w1;w2'")
    sp.add_argument("--basis", help="target basis for ac/frattini recipes")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("canonicalize", help="canonical representative of a tuple's component")
    common(sp)
    sp.add_argument("--tuple")
    sp.add_argument("--words")
    sp.set_defaults(func=cmd_canonicalize)

    sp = sub.add_parser("predict", help="closed-form component count for abelian groups")
    common(sp, graph=False)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("verify", help="theorem harnesses and certificate replay")
    sp.add_argument("what", nargs="?", choices=("preimage", "abelian-count", "corpus"))
    sp.add_argument("--group")
    sp.add_argument("--n", type=int)
    sp.add_argument("--mode", choices=("nielsen", "ac"), default="ac")
    sp.add_argument("--budget", type=int, default=10**7)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--backend", choices=("numba", "numpy"), default=None)
    sp.add_argument("--certificate", help="certificate JSON file to replay")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export", help="whole graph as DOT or JSON")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--format", choices=("dot", "json"), default="json")
    sp.add_argument("--conjugators")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("inspect", help="structural summary of a group")
    common(sp, graph=False)
    sp.set_defaults(func=cmd_inspect)
    return p


def _fail(code: int, message: str, context: dict | None = None) -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message, "context": context or {}}, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    from .certify import NoCertificate
    from .explorer import BudgetExceeded

    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", None):
        _accel.set_workers(args.workers)
    if getattr(args, "group", None) is None and args.command != "verify":
        return _fail(EXIT_INVALID, "--group is required")
    t0 = time.perf_counter()
    try:
        args.func(args)
    except CliError as exc:
        return _fail(exc.code, str(exc), exc.context)
    except BudgetExceeded as exc:
        return _fail(EXIT_BUDGET, str(exc), {"required": exc.required, "budget": exc.budget})
    except NoCertificate as exc:
        return _fail(EXIT_NONE, f"no certificate exists: {exc}")
    except (GroupError, MoveError, CertificateError, WordSyntaxError, KeyError, ValueError) as exc:
        return _fail(EXIT_INVALID, str(exc), {"type": type(exc).__name__})
    logging.getLogger(__name__).info("%s finished in %.3fs", args.command, time.perf_counter() - t0)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
