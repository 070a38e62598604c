"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invariant violation or conjecture
counterexample.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

from . import context as _context
from .atoms import ConnectionSet, atom_system
from .classify import (
    DEFAULT_LIMIT, MODES, catalog, classify, describe, exhaustive_sweep, format_spectrum, summarize,
)
from .errors import InvariantViolation, NormcayError
from .group_core import DEFAULT_MAX_ORDER, FAMILIES, Group, is_ambivalent
from .integrality import (
    conjecture_scan, decompose_check, hs_integrality_report, is_eisenstein_integral,
    eisenstein_from_hs_check,
)
from .spectra import (
    Spectrum, adjacency_eigenvalues, build_a_matrix, build_h_matrix, hs_spectrum_by_characters,
    hs_spectrum_direct, moment_check,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
MOMENT_LIMIT = 400
_FAMILY_SPLIT = re.compile(r",(?=(?:%s):)" % "|".join(FAMILIES))
_ITEM_SPLIT = re.compile(r"\s*;\s*|\s+\+\s+")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def split_groups(text: str) -> list[str]:
    """Split a group list on ';', or on commas that start a new family spec.

    A product takes any number of factors, so in a comma list it absorbs every
    spec after it; use ';' to list products alongside other groups.
    """
    if ";" in text:
        parts = text.split(";")
    else:
        parts = _FAMILY_SPLIT.split(text)
        for i, p in enumerate(parts):
            if p.strip().startswith("product:"):
                parts = parts[:i] + [",".join(parts[i:])]
                break
    return [p.strip() for p in parts if p.strip()]


def parse_set(G: Group, cd, text: str) -> ConnectionSet:
    """Parse ``Cl(label)`` / ``Cl[label]`` class items and bare element labels.

    Items are separated by ';' or ' + '; a trailing orientation arrow is
    ignored since orientation follows from which inverse classes are present.
    """
    members: set[int] = set()
    text = text.strip()
    if text in ("", "∅", "{}"):
        return ConnectionSet.of(G, ())
    for item in _ITEM_SPLIT.split(text):
        item = item.strip()
        for arrow in ("→", "->"):
            if item.endswith(arrow):
                item = item[: -len(arrow)].strip()
        if not item:
            continue
        if item[:3] in ("Cl(", "Cl[") and item[-1] in ")]":
            g = G.index(item[3:-1])
            members.update(cd.class_set(int(cd.class_of[g])))
        else:
            members.add(G.index(item))
    return ConnectionSet.of(G, members)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(args, default: str) -> str:
    return args.format or default


def _groups_from(args) -> list[str]:
    groups = list(getattr(args, "group", None) or [])
    if getattr(args, "groups", None):
        groups += split_groups(args.groups)
    if getattr(args, "all_upto", None):
        groups += catalog(args.all_upto)
    if not groups:
        raise UsageError("no groups given (use --group, --groups or --all-upto)")
    return groups


def _load(args, spec: str):
    return _context.load(spec, args.max_order)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_group(args) -> int:
    ctx = _load(args, args.group)
    G, cd = ctx.group, ctx.classes
    classes = [{"index": c, "label": cd.class_label(c), "size": int(cd.sizes[c]),
                "order": int(cd.rep_orders[c]), "inverse": int(cd.inverse_class[c])}
               for c in range(cd.h)]
    info = {"group": G.name, "order": G.n, "classes": cd.h, "abelian": G.is_abelian,
            "ambivalent": is_ambivalent(G), "exponent": G.exponent}
    fmt = _fmt(args, "json")
    if fmt == "json":
        _emit(args, _json({**info, "conjugacy_classes": classes}))
    elif fmt == "csv":
        _emit(args, _csv(["index", "label", "size", "order", "inverse"],
                         [[c[k] for k in ("index", "label", "size", "order", "inverse")] for c in classes]))
    else:
        lines = [f"{k}: {v}" for k, v in info.items()]
        lines += [f"Cl[{c['label']}] size={c['size']} order={c['order']}" for c in classes]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_chartable(args) -> int:
    ctx = _load(args, args.group)
    ct = ctx.table
    header, *rows = ct.to_rows()
    fmt = _fmt(args, "csv")
    if fmt == "json":
        _emit(args, _json({"group": ctx.spec, "classes": header[1:], "degrees": [int(d) for d in ct.degrees],
                           "conj_pair": [int(k) for k in ct.conj_pair], "rows": [r[1:] for r in rows]}))
    else:
        _emit(args, _csv(header, rows))
    return EXIT_OK


def cmd_atoms(args) -> int:
    ctx = _load(args, args.group)
    G = ctx.group
    system = atom_system(G)

    def labels(block):
        return [G.label(g) for g in sorted(block)]

    fmt = _fmt(args, "text")
    if fmt == "json":
        _emit(args, _json({"group": G.name, "atoms": [labels(b) for b in system.atoms],
                           "approx_classes": [labels(b) for b in system.atoms3],
                           "gamma3": labels(system.gamma3)}))
    elif fmt == "csv":
        rows = [["atom", i, " ".join(labels(b))] for i, b in enumerate(system.atoms)]
        rows += [["approx", i, " ".join(labels(b))] for i, b in enumerate(system.atoms3)]
        _emit(args, _csv(["kind", "index", "elements"], rows))
    else:
        lines = [f"[{G.label(min(b))}] = {{{', '.join(labels(b))}}}" for b in system.atoms]
        lines += [f"<<{G.label(min(b))}>> = {{{', '.join(labels(b))}}}" for b in system.atoms3]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _spectrum_entries(spec: Spectrum, per_character: bool):
    if per_character and spec.per_character is not None:
        return [{"character_index": j, "value_re": v.real, "value_im": v.imag, "multiplicity": m}
                for j, v, m in spec.per_character]
    return spec.to_json()


def cmd_spectrum(args) -> int:
    if args.matrix == "A" and args.method != "chars":
        raise UsageError("the 0/1 adjacency matrix is not Hermitian; only --method chars is supported")
    ctx = _load(args, args.group)
    G, cd, ct = ctx.parts
    S = parse_set(G, cd, args.set)
    chars = direct = None
    if args.matrix == "H":
        M = build_h_matrix(G, S)
        if args.method in ("chars", "both"):
            chars = hs_spectrum_by_characters(G, cd, ct, S)
        if args.method in ("direct", "both"):
            direct = hs_spectrum_direct(M)
    else:
        M = build_a_matrix(G, S)
        z = adjacency_eigenvalues(G, cd, ct, S)
        mults = ct.degrees**2
        chars = Spectrum.from_values(z, mults, per_character=[(j, complex(z[j]), int(mults[j]))
                                                              for j in range(ct.h)])
    spec = chars if chars is not None else direct
    checks = {}
    checks["agreement"] = bool(chars.matches(direct, args.tol)) if chars is not None and direct is not None else None
    checks["moments"] = bool(moment_check(M, spec, ct.h)) if G.n <= MOMENT_LIMIT else None
    out = {
        "group": G.name, "set": describe(cd, S), "matrix": args.matrix, "method": args.method,
        "entries": _spectrum_entries(spec, per_character=chars is not None),
        "spectrum": spec.to_json(),
        "checks": checks,
    }
    if direct is not None and chars is not None:
        out["direct"] = direct.to_json()
    fmt = _fmt(args, "json")
    if fmt == "json":
        _emit(args, _json(out))
    elif fmt == "csv":
        _emit(args, _csv(["value_re", "value_im", "multiplicity", "character_index"],
                         [[f"{e['value_re']:.9g}", f"{e['value_im']:.9g}", e["multiplicity"],
                           e.get("character_index", "")] for e in out["entries"]]))
    else:
        _emit(args, format_spectrum(spec) + "\n")
    if args.plot:
        from .plotting import plot_spectrum
        plot_spectrum(spec.entries, args.plot, title=f"{args.matrix}-spectrum of Cay({G.name}, {out['set']})")
    bad = checks["agreement"] is False or checks["moments"] is False
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_check(args) -> int:
    ctx = _load(args, args.group)
    G, cd, ct = ctx.parts
    S = parse_set(G, cd, args.set)
    report = hs_integrality_report(G, cd, ct, S, args.tol)
    eis = is_eisenstein_integral(G, cd, ct, S, args.tol)
    from_hs = eisenstein_from_hs_check(G, cd, ct, S, args.tol)
    try:
        decomposition = decompose_check(G, cd, ct, S, args.tol)
        decomposition_ok = True
    except InvariantViolation:
        decomposition, decomposition_ok = None, False
    out = {
        "group": G.name, "set": describe(cd, S),
        "integrality": report.to_json(),
        "eisenstein": eis.to_json(),
        "decomposition": {"parts_hs_integral": decomposition, "consistent": decomposition_ok},
        "eisenstein_from_hs": {
            "hypothesis_holds": from_hs.hypothesis_holds,
            "hypothesis_failures": from_hs.hypothesis_failures,
            "implication_ok": from_hs.implication_ok,
            "g_direct": from_hs.g_direct, "g_from_blocks": from_hs.g_from_blocks,
            "blocks": from_hs.blocks, "routes_agree": from_hs.routes_agree,
        },
    }
    _emit(args, _json(out))
    ok = (report.agree and eis.routes_agree and decomposition_ok and bool(from_hs)
          and not (eis.verdict and not report.spectral_verdict))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_classify(args) -> int:
    groups = _groups_from(args)
    if args.sweep:
        results = []
        for spec in groups:
            G, cd, ct = _load(args, spec).parts
            results.append(exhaustive_sweep(G, cd, ct, args.tol, limit=args.limit).to_json())
        summary = [{"group": r["group"], "sets": r["sets"], "hs_integral": r["hs_integral"],
                    "eisenstein_integral": r["eisenstein_integral"]} for r in results]
        if _fmt(args, "json") == "csv":
            keys = ["group", "sets", "hs_integral", "eisenstein_integral", "iff_disagreements",
                    "decomposition_failures", "eisenstein_not_hs", "ok"]
            _emit(args, _csv(keys, [[r[k] for k in keys] for r in results]))
        else:
            _emit(args, _json(results))
        ok = all(r["ok"] for r in results)
    else:
        rows = classify(groups, args.mode, limit=args.limit, tol=args.tol, max_order=args.max_order)
        summary = summarize(rows)
        fmt = _fmt(args, "csv")
        if args.summary:
            if fmt == "json":
                _emit(args, _json(summary))
            else:
                keys = ["group", "sets", "hs_integral", "eisenstein_integral"]
                _emit(args, _csv(keys, [[s[k] for k in keys] for s in summary]))
        elif fmt == "json":
            _emit(args, _json([r.to_json() for r in rows]))
        elif fmt == "csv":
            _emit(args, _csv(rows[0].FIELDS if rows else [], [r.to_csv_row() for r in rows]))
        else:
            _emit(args, "".join(f"{r.group}\t{r.descriptor}\tHS={r.hs_integral}\t"
                                f"Eisenstein={r.eisenstein_integral}\t{r.hs_spectrum}\n" for r in rows))
        ok = True
    if args.plot:
        from .plotting import plot_classification
        plot_classification(summary, args.plot)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_conjecture(args) -> int:
    result = conjecture_scan(_groups_from(args), args.max_order, args.tol)
    data = result.to_json()
    if _fmt(args, "json") == "csv":
        keys = ["group", "y_label", "j", "t", "c", "t_over_3_distance", "parity_ok"]
        _emit(args, _csv(keys, [[getattr(r, k) for k in keys] for r in result.records]))
    else:
        _emit(args, _json(data))
    if args.plot:
        from .plotting import plot_conjecture
        plot_conjecture(result.records, args.plot, args.tol)
    if result.counterexamples:
        print(f"counterexample: {result.counterexamples[0].to_json()}", file=sys.stderr)
    return EXIT_OK if result.verdict and not result.invariant_failures else EXIT_VIOLATION


def dot_graph(G: Group, S: ConnectionSet) -> str:
    """Mixed Cayley graph in DOT: arcs u -> su for s in S̄, plain edges for S \\ S̄."""
    labels = G.labels
    lines = [f'digraph "Cay({G.name})" {{', "  node [shape=circle];"]
    lines += [f'  "{labels[u]}";' for u in range(G.n)]
    for u in range(G.n):
        for s in sorted(S.symmetric_part):
            v = int(G.mul(s, u))
            if u < v:
                lines.append(f'  "{labels[u]}" -> "{labels[v]}" [dir=none];')
        for s in sorted(S.skew_part):
            v = int(G.mul(s, u))
            lines.append(f'  "{labels[u]}" -> "{labels[v]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_dot(args) -> int:
    ctx = _load(args, args.group)
    S = parse_set(ctx.group, ctx.classes, args.set)
    _emit(args, dot_graph(ctx.group, S))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, suppress):
        def default(value):
            return argparse.SUPPRESS if suppress else value

        parser.add_argument("--tol", type=float, default=default(1e-6), help="integer-snapping tolerance")
        parser.add_argument("--format", choices=("json", "csv", "text"), default=default(None))
        parser.add_argument("--out", default=default(None), help="write output to this file instead of stdout")
        parser.add_argument("--max-order", type=int, default=default(DEFAULT_MAX_ORDER),
                            help="largest group order accepted")

    # global flags may appear before or after the subcommand; the subcommand
    # copies must not overwrite values given before it
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, suppress=True)
    p = _Parser(prog="normcay", description="Normal mixed Cayley graphs: spectra and integrality.")
    global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_group(name, help_text, func, set_arg=False):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.add_argument("--group", required=True, help="group spec, e.g. alternating:4")
        if set_arg:
            sp.add_argument("--set", required=True, help="e.g. 'Cl((1,2,3)) + Cl((1,2)(3,4))'")
        sp.set_defaults(func=func)
        return sp

    with_group("group", "group summary and conjugacy classes", cmd_group)
    with_group("chartable", "character table as CSV", cmd_chartable)
    with_group("atoms", "atoms [x] and ≈-classes", cmd_atoms)
    sp = with_group("spectrum", "HS- or adjacency spectrum", cmd_spectrum, set_arg=True)
    sp.add_argument("--matrix", choices=("H", "A"), default="H")
    sp.add_argument("--method", choices=("chars", "direct", "both"), default="chars")
    sp.add_argument("--plot", help="write a PNG of the spectrum to this path")
    with_group("check", "integrality reports for one connection set", cmd_check, set_arg=True)
    with_group("dot", "mixed Cayley graph in DOT format", cmd_dot, set_arg=True)

    for name, func, help_text in (("classify", cmd_classify, "classify all normal connection sets"),
                                  ("conjecture", cmd_conjecture, "scan T_y(j)/3 for integrality")):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.add_argument("--group", action="append", help="group spec (repeatable)")
        sp.add_argument("--groups", help="group specs separated by ';' (or ',' before a family name)")
        sp.add_argument("--all-upto", type=int, help="every catalog group of order <= N")
        sp.add_argument("--plot", help="write a PNG figure to this path")
        sp.set_defaults(func=func)
        if name == "classify":
            sp.add_argument("--mode", choices=MODES, default="all")
            sp.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="maximum normal sets per group")
            sp.add_argument("--summary", action="store_true", help="per-group counts only")
            sp.add_argument("--sweep", action="store_true",
                            help="vectorized exhaustive check; reports counts and violations per group")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        if exc.reproducer:
            print(f"reproduce with: {exc.reproducer}", file=sys.stderr)
        return EXIT_VIOLATION
    except (UsageError, ValueError, KeyError) as exc:
        print(f"normcay: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NormcayError, ArithmeticError) as exc:
        print(f"normcay: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
