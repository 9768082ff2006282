"""Command-line front end.

One command per invocation; reports go to standard output in a
line-oriented ``key: value`` form (or JSON with --json), diagram output
goes to ``-o`` files or follows the report after a blank line.  Exit
codes encode the verdict: 0 verified or plain success, 1 refuted,
2 unknown or exhausted, 3 usage error, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import diagio, reports
from .ac import DEFAULT_MAX_STATES, ab_det, ac_search, ak_presentation
from .catalog import FIGURE_ONE, FIGURE_TWO, genus_one_diagram
from .diagram import (HeegaardDiagram, TrisectionDiagram,
                      chi_convention_note, detect_k, euler_characteristic,
                      heegaard_h1, trisection_h1, trisection_params)
from .kirby import (HeegaardKirbyDiagram, LinkingMatrix,
                    gprc_necessary_check, hk_to_trisection, surgery_h1,
                    trisection_to_hk, validate_hk)
from .moves import classify_genus_one_sum

EXIT_USAGE = 3
EXIT_IO = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _load(path, want=None, label=None):
    text = _read(path)
    obj = diagio.parse_any(text)
    if want is not None and not isinstance(obj, want):
        raise _UsageError("%s expects %s, got a %s file"
                          % (label, _KIND_NAMES.get(want, "a diagram"),
                             _kind_of(obj)))
    return text, obj


_KIND_NAMES = {
    TrisectionDiagram: "a trisection file",
    HeegaardKirbyDiagram: "a heegaard-kirby file",
    LinkingMatrix: "a linking file",
}


def _kind_of(obj):
    from .ac import BalancedPresentation
    if isinstance(obj, TrisectionDiagram):
        return "trisection"
    if isinstance(obj, HeegaardKirbyDiagram):
        return "heegaard-kirby"
    if isinstance(obj, HeegaardDiagram):
        return "heegaard"
    if isinstance(obj, LinkingMatrix):
        return "linking"
    if isinstance(obj, BalancedPresentation):
        return "presentation"
    return "unknown"


def _construction_verdict(op, args, output_text, reason):
    from .verdict import verified
    return verified(reason, {"kind": "construction", "op": op, "args": args,
                             "output_sha256": reports.sha256_text(output_text)})


# -- command handlers ----------------------------------------------------------
# each returns (inputs, payload, verdict, output_text | None)

def _cmd_validate(args):
    text, obj = _load(args.file)
    payload = [("kind", _kind_of(obj)), ("genus", obj.genus)] \
        if not isinstance(obj, LinkingMatrix) else [("kind", "linking")]
    if isinstance(obj, TrisectionDiagram):
        params, v = trisection_params(obj)
        payload.append(("params", str(params)))
    elif isinstance(obj, HeegaardKirbyDiagram):
        v = validate_hk(obj)
        payload += [("components", obj.c), ("target-m", obj.m)]
    elif isinstance(obj, HeegaardDiagram):
        k, v = detect_k(obj)
        payload.append(("k", k))
    else:
        raise _UsageError("validate expects a diagram file, got %s"
                          % _kind_of(obj))
    return [(args.file, text)], payload, v, None


def _cmd_invariants(args):
    text, obj = _load(args.file)
    if isinstance(obj, TrisectionDiagram):
        params, v = trisection_params(obj)
        payload = [("kind", "trisection"), ("genus", obj.genus),
                   ("params", str(params)),
                   ("chi", euler_characteristic(params)),
                   ("h1", str(trisection_h1(obj)))]
        note = chi_convention_note(params)
        if note is not None:
            payload.append(("note", note))
        return [(args.file, text)], payload, v, None
    if isinstance(obj, HeegaardDiagram) and \
            not isinstance(obj, HeegaardKirbyDiagram):
        k, v = detect_k(obj)
        payload = [("kind", "heegaard"), ("genus", obj.genus), ("k", k),
                   ("h1", str(heegaard_h1(obj)))]
        return [(args.file, text)], payload, v, None
    if isinstance(obj, HeegaardKirbyDiagram):
        v = validate_hk(obj)
        payload = [("kind", "heegaard-kirby"), ("genus", obj.genus),
                   ("components", obj.c), ("target-m", obj.m)]
        return [(args.file, text)], payload, v, None
    if isinstance(obj, LinkingMatrix):
        payload = [("kind", "linking"), ("size", obj.size),
                   ("framings", " ".join(str(f) for f in obj.framings())),
                   ("surgery-h1", str(surgery_h1(obj)))]
        return [(args.file, text)], payload, None, None
    payload = [("kind", "presentation"), ("generators", obj.generators),
               ("total-length", obj.total_length()),
               ("ab-det", ab_det(obj))]
    return [(args.file, text)], payload, None, None


def _cmd_classify(args):
    text, obj = _load(args.file, TrisectionDiagram, "classify")
    name, v = classify_genus_one_sum(obj)
    payload = [("genus", obj.genus)]
    if name is not None:
        payload.append(("name", name))
    return [(args.file, text)], payload, v, None


def _cmd_stabilize(args):
    text, obj = _load(args.file)
    try:
        out = reports.apply_construction("stabilize", {"type": args.type},
                                         (obj,))
    except ValueError as e:
        raise _UsageError(str(e))
    out_text = diagio.format_any(out)
    v = _construction_verdict("stabilize", {"type": args.type}, out_text,
                              "stabilization of type %s constructed"
                              % args.type)
    payload = [("genus", obj.genus), ("result-genus", out.genus)]
    return [(args.file, text)], payload, v, out_text


def _cmd_connect_sum(args):
    text1, t1 = _load(args.a, TrisectionDiagram, "connect-sum")
    text2, t2 = _load(args.b, TrisectionDiagram, "connect-sum")
    try:
        out = reports.apply_construction("connect-sum", {}, (t1, t2))
    except ValueError as e:
        raise _UsageError(str(e))
    out_text = diagio.format_any(out)
    v = _construction_verdict("connect-sum", {}, out_text,
                              "connected sum constructed")
    payload = [("genus", out.genus)]
    return [(args.a, text1), (args.b, text2)], payload, v, out_text


def _cmd_slide(args):
    text, obj = _load(args.file)
    sign = {"+": 1, "-": -1}[args.sign]
    cargs = {"system": args.system, "from": args.src, "over": args.over,
             "guide": args.guide, "sign": sign}
    try:
        out = reports.apply_construction("slide", cargs, (obj,))
    except ValueError as e:
        raise _UsageError(str(e))
    out_text = diagio.format_any(out)
    v = _construction_verdict("slide", cargs, out_text,
                              "handleslide of %s curve %d over %d applied"
                              % (args.system, args.src, args.over))
    payload = [("system", args.system), ("from", args.src),
               ("over", args.over)]
    return [(args.file, text)], payload, v, out_text


def _cmd_hk_to_tri(args):
    text, H = _load(args.file, HeegaardKirbyDiagram, "hk-to-tri")
    t, v = hk_to_trisection(H)
    payload = [("genus", H.genus), ("components", H.c), ("target-m", H.m)]
    out_text = None
    if t is not None:
        payload.append(("params", "(%d;%d,%d,%d)" %
                        ((t.genus,) + t.declared_params)))
        out_text = diagio.format_any(t)
    return [(args.file, text)], payload, v, out_text


def _parse_picks(spec):
    picks = []
    for part in spec.split(","):
        piece = part.strip()
        if not piece:
            continue
        bits = piece.split(":")
        if len(bits) != 2:
            raise _UsageError("picks must look like '1:1,2:3', got %r" % piece)
        try:
            picks.append((int(bits[0]), int(bits[1])))
        except ValueError:
            raise _UsageError("picks must be integer pairs, got %r" % piece)
    if not picks:
        raise _UsageError("at least one gamma:beta pick is required")
    return picks


def _cmd_tri_to_hk(args):
    text, t = _load(args.file, TrisectionDiagram, "tri-to-hk")
    picks = _parse_picks(args.picks)
    try:
        H, v = trisection_to_hk(t, picks)
    except ValueError as e:
        raise _UsageError(str(e))
    payload = [("picks", ",".join("%d:%d" % p for p in picks))]
    out_text = None
    if H is not None:
        payload += [("components", H.c), ("target-m", H.m)]
        out_text = diagio.format_any(H)
    return [(args.file, text)], payload, v, out_text


def _cmd_gprc_check(args):
    text, m = _load(args.file, LinkingMatrix, "gprc-check")
    v = gprc_necessary_check(m)
    payload = [("size", m.size),
               ("framings", " ".join(str(f) for f in m.framings())),
               ("surgery-h1", str(surgery_h1(m)))]
    return [(args.file, text)], payload, v, None


def _cmd_ac_search(args):
    if (args.ak is None) == (args.file is None):
        raise _UsageError("give exactly one of --ak N or a presentation file")
    if args.ak is not None:
        if args.ak < 1:
            raise _UsageError("--ak needs n >= 1")
        p = ak_presentation(args.ak)
        inputs = [("ak-%d" % args.ak, diagio.format_presentation(p))]
    else:
        text, p = _load(args.file)
        from .ac import BalancedPresentation
        if not isinstance(p, BalancedPresentation):
            raise _UsageError("ac-search expects a presentation file, got %s"
                              % _kind_of(p))
        inputs = [(args.file, text)]
    res = ac_search(p, args.max_length, args.max_depth, stable=args.stable,
                    max_states=args.max_states)
    payload = [("generators", p.generators),
               ("total-length", p.total_length()),
               ("visited", res.stats.get("visited", 0)),
               ("stored", res.stats.get("stored", 0))]
    if res.found:
        payload.append(("path-moves", len(res.path)))
    return inputs, payload, res.verdict, None


def _cmd_catalog(args):
    names = FIGURE_ONE if args.figure == "figure1" else FIGURE_TWO
    blocks = []
    for name in names:
        blocks.append("# %s\n%s" %
                      (name, diagio.format_diagram(genus_one_diagram(name))))
    out_text = "\n".join(blocks)
    payload = [("figure", args.figure), ("names", " ".join(names))]
    v = _construction_verdict("catalog", {"figure": args.figure}, out_text,
                              "catalog diagrams for %s emitted" % args.figure)
    return [], payload, v, out_text


_HK_WITNESS_KINDS = frozenset(["heegaard-kirby", "background", "framing",
                               "link-crossing", "link-extension",
                               "surgery-homology"])


def _cmd_replay(args):
    raw = _read(args.report)
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise diagio.ParseError("report is not valid JSON: %s" % e, 1)
    recorded = doc.get("inputs", [])
    given = args.inputs
    if len(given) != len(recorded):
        raise _UsageError("report lists %d inputs, %d given"
                          % (len(recorded), len(given)))
    objs = []
    for path, rec in zip(given, recorded):
        text = _read(path)
        if reports.sha256_text(text) != rec["sha256"]:
            raise _UsageError("input %s does not match the recorded digest "
                              "for %s" % (path, rec["name"]))
        objs.append(diagio.parse_any(text))
    vdict = doc.get("verdict")
    if vdict is None:
        raise _UsageError("report carries no verdict to replay")
    payload = [("replayed-operation", doc.get("operation", "?")),
               ("recorded-status", vdict["status"])]
    if vdict["status"] == "unknown":
        from .verdict import unknown
        v = unknown("unknown verdicts carry no witness to replay")
        return [(args.report, raw)], payload, v, None
    objs = _reconstruct_for_replay(doc, tuple(objs), vdict)
    try:
        reports.replay_verdict(objs, vdict)
    except reports.ReplayError as e:
        raise _ReplayFailure(str(e))
    except KeyError as e:
        raise _UsageError("unsupported witness kind %s" % e)
    from .verdict import Verdict
    v = Verdict(vdict["status"], "replay confirms: %s" % vdict["reason"],
                vdict["witness"])
    return [(args.report, raw)], payload, v, None


class _ReplayFailure(Exception):
    pass


def _reconstruct_for_replay(doc, objs, vdict):
    """Rebuild the object a verdict actually talks about, when the command
    derived it from the input file (hk-to-tri, tri-to-hk)."""
    op = doc.get("operation")
    w = vdict.get("witness") or {}
    kind = w.get("kind")
    try:
        if op == "hk-to-tri" and kind not in _HK_WITNESS_KINDS \
                and kind != "construction":
            return (reports.apply_construction("hk-to-tri", {}, objs),) \
                + objs[1:]
        if op == "tri-to-hk" and kind in _HK_WITNESS_KINDS:
            payload = doc.get("payload", {})
            picks = [[int(a), int(b)] for a, b in
                     (piece.split(":") for piece in payload["picks"].split(","))]
            H = reports.apply_construction(
                "tri-to-hk", {"picks": picks, "m": int(payload["target-m"])},
                objs)
            return (H,) + objs[1:]
    except (ValueError, KeyError) as e:
        raise _ReplayFailure("cannot rebuild the derived object: %s" % e)
    return objs


# -- parser and dispatch -------------------------------------------------------

def _build_parser():
    parser = _Parser(prog="trisect",
                     description="calculus on trisection, Heegaard, and "
                                 "Heegaard-Kirby diagrams")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true",
                       help="emit the report as JSON")
        return p

    p = add("validate", _cmd_validate, "check a diagram file's verdict")
    p.add_argument("file")

    p = add("invariants", _cmd_invariants,
            "parameters, chi, and homology of a diagram")
    p.add_argument("file")

    p = add("classify", _cmd_classify,
            "name a trisection as a sum of genus-one pieces")
    p.add_argument("file")

    p = add("stabilize", _cmd_stabilize, "stabilize a diagram")
    p.add_argument("file")
    p.add_argument("--type", required=True,
                   choices=["1", "2", "3", "heegaard", "balanced"])
    p.add_argument("-o", "--output")

    p = add("connect-sum", _cmd_connect_sum, "connected sum of two trisections")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")

    p = add("slide", _cmd_slide, "handleslide one curve over another")
    p.add_argument("file")
    p.add_argument("--system", required=True,
                   choices=["alpha", "beta", "gamma"])
    p.add_argument("--from", dest="src", required=True, type=int,
                   metavar="I", help="1-based index of the curve to slide")
    p.add_argument("--over", required=True, type=int, metavar="J",
                   help="1-based index of the curve slid over")
    p.add_argument("--guide", default="", metavar="WORD",
                   help="guide word, e.g. 'x1 Y2'")
    p.add_argument("--sign", default="+", choices=["+", "-"])
    p.add_argument("-o", "--output")

    p = add("hk-to-tri", _cmd_hk_to_tri,
            "assemble a trisection from a heegaard-kirby diagram")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = add("tri-to-hk", _cmd_tri_to_hk,
            "extract a heegaard-kirby diagram along gamma:beta picks")
    p.add_argument("file")
    p.add_argument("--picks", required=True,
                   help="comma list of gamma:beta index pairs, e.g. '1:1,2:3'")
    p.add_argument("-o", "--output")

    p = add("gprc-check", _cmd_gprc_check,
            "necessary zero-matrix check on a linking matrix")
    p.add_argument("file")

    p = add("ac-search", _cmd_ac_search,
            "bounded trivialization search on a balanced presentation")
    p.add_argument("file", nargs="?")
    p.add_argument("--ak", type=int, metavar="N",
                   help="use the standard two-generator family member N")
    p.add_argument("--max-length", type=int, default=32, dest="max_length")
    p.add_argument("--max-depth", type=int, default=20, dest="max_depth")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                   dest="max_states")
    p.add_argument("--stable", action="store_true",
                   help="allow adding and deleting trivial pairs")

    p = add("catalog", _cmd_catalog, "emit the built-in genus-one diagrams")
    p.add_argument("figure", choices=["figure1", "figure2"])
    p.add_argument("-o", "--output")

    p = add("replay", _cmd_replay,
            "re-derive a recorded verdict from its witness")
    p.add_argument("report", help="a JSON report produced with --json")
    p.add_argument("inputs", nargs="*",
                   help="the original input files, in command order")

    return parser


def run_command(argv):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return 0 if not e.code else int(e.code)
    start = time.monotonic()
    try:
        inputs, payload, verdict, out_text = args.func(args)
    except _UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except _ReplayFailure as e:
        print("replay: FAILED: %s" % e, file=sys.stderr)
        return EXIT_IO
    except diagio.ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print("io error: %s" % e, file=sys.stderr)
        return EXIT_IO
    elapsed_ms = int((time.monotonic() - start) * 1000)
    if out_text is not None:
        payload = payload + [("output-sha256", reports.sha256_text(out_text))]
    report = reports.Report(
        operation=args.command,
        inputs=tuple((label, reports.sha256_text(text))
                     for label, text in inputs),
        payload=tuple(payload),
        verdict=verdict,
        elapsed_ms=elapsed_ms)
    wrote = False
    if out_text is not None and getattr(args, "output", None):
        try:
            with open(args.output, "w", encoding="utf-8") as f:
                f.write(out_text)
        except OSError as e:
            print("io error: %s" % e, file=sys.stderr)
            return EXIT_IO
        wrote = True
    if args.json:
        sys.stdout.write(reports.report_to_json(report))
    else:
        sys.stdout.write(reports.format_report(report))
        if out_text is not None and not wrote:
            sys.stdout.write("\n" + out_text)
    return report.exit_code()


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
