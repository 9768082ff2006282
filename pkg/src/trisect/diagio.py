"""Plain-text file formats for diagrams, linking matrices, presentations.

One object per file.  The first significant line is a header naming the
kind; the rest are ``name: payload`` sections.  ``#`` starts a comment,
blank lines are skipped.  Canonical output round-trips byte-stably.

    trisection genus=2 params=(2,0,0)
    alpha: @1(1,0) ; @2(1,0)
    beta: @1(1,0) ; @2(0,1)
    gamma: @1(1,0) ; @2(0,1)

    heegaard-kirby genus=1
    alpha: @1(1,0)
    beta: @1(0,1)
    link: @1(1,0) framing=surface
    target m=1

    linking size=2
    row: 0 1
    row: 1 0

    presentation generators=2
    relator: x1 x2 X1 X2
    relator: x2
"""

from __future__ import annotations

import re

from . import words
from .ac import BalancedPresentation
from .diagram import (Curve, CutSystem, HeegaardDiagram, TrisectionDiagram,
                      curve_from_template, curve_from_word)
from .kirby import SURFACE, FramedComponent, HeegaardKirbyDiagram, LinkingMatrix


class ParseError(Exception):
    def __init__(self, message, line, col=1):
        super().__init__("line %d, col %d: %s" % (line, col, message))
        self.message = message
        self.line = line
        self.col = col


_KINDS = ("trisection", "heegaard-kirby", "heegaard", "linking", "presentation")

_HEADERS = {
    "trisection": re.compile(
        r"^trisection\s+genus=(\d+)(?:\s+params=\((\d+),(\d+),(\d+)\))?\s*$"),
    "heegaard": re.compile(r"^heegaard\s+genus=(\d+)\s*$"),
    "heegaard-kirby": re.compile(r"^heegaard-kirby\s+genus=(\d+)\s*$"),
    "linking": re.compile(r"^linking\s+size=(\d+)\s*$"),
    "presentation": re.compile(r"^presentation\s+generators=(\d+)\s*$"),
}

_TEMPLATE = re.compile(r"^@(\d+)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_SECTION = re.compile(r"^([a-z][a-z-]*):(.*)$")
_TARGET = re.compile(r"^target\s+m=(\d+)\s*$")
_FRAMED = re.compile(r"^(.*\S)\s+framing=(surface|-?\d+)\s*$")


def _significant_lines(text):
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            out.append((number, body.rstrip()))
    return out


def sniff_kind(text):
    """Header keyword of the first significant line, or None."""
    lines = _significant_lines(text)
    if not lines:
        return None
    head = lines[0][1].strip().split()[0]
    return head if head in _KINDS else None


def _parse_header(lines):
    if not lines:
        raise ParseError("empty input, expected a header line", 1)
    number, line = lines[0]
    head = line.strip().split()[0]
    if head not in _KINDS:
        raise ParseError("unknown file kind %r" % head, number)
    m = _HEADERS[head].match(line.strip())
    if m is None:
        raise ParseError("malformed %s header" % head, number)
    return head, number, m


def _chunks(payload, base_col):
    """Semicolon-separated pieces of a section payload, with columns."""
    out = []
    start = 0
    while True:
        cut = payload.find(";", start)
        piece = payload[start:cut] if cut >= 0 else payload[start:]
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), base_col + start + lead))
        if cut < 0:
            return out
        start = cut + 1


def _parse_curve(genus, text, line, col):
    if not text:
        raise ParseError("empty curve entry", line, col)
    if text.startswith("@"):
        m = _TEMPLATE.match(text)
        if m is None:
            raise ParseError("malformed slope template %r" % text, line, col)
        h, p, q = (int(m.group(i)) for i in (1, 2, 3))
        try:
            return curve_from_template(genus, h, p, q)
        except ValueError as e:
            raise ParseError(str(e), line, col)
    letters = []
    for tok in re.finditer(r"\S+", text):
        try:
            v = words.parse_surface_letter(tok.group())
        except ValueError as e:
            raise ParseError(str(e), line, col + tok.start())
        if abs(v) > 2 * genus:
            raise ParseError("letter %s exceeds genus %d" % (tok.group(), genus),
                             line, col + tok.start())
        letters.append(v)
    return curve_from_word(genus, tuple(letters))


def _parse_system(genus, payload, line, base_col):
    curves = []
    for text, col in _chunks(payload, base_col):
        curves.append(_parse_curve(genus, text, line, col))
    try:
        return CutSystem(genus, tuple(curves))
    except ValueError as e:
        raise ParseError(str(e), line, base_col)


def _parse_link(genus, payload, line, base_col):
    comps = []
    for text, col in _chunks(payload, base_col):
        m = _FRAMED.match(text)
        if m is None:
            raise ParseError("link component needs a framing=... suffix", line, col)
        curve = _parse_curve(genus, m.group(1), line, col)
        framing = SURFACE if m.group(2) == "surface" else int(m.group(2))
        try:
            comps.append(FramedComponent(curve, framing))
        except ValueError as e:
            raise ParseError(str(e), line, col)
    return tuple(comps)


def _sections(lines, allowed, line_hint):
    """Map section name -> (payload, line, col of payload start)."""
    seen = {}
    target = None
    for number, line in lines:
        t = _TARGET.match(line.strip())
        if t is not None:
            if target is not None:
                raise ParseError("duplicate target line", number)
            target = (int(t.group(1)), number)
            continue
        m = _SECTION.match(line.strip())
        if m is None:
            raise ParseError("expected a section like %r" %
                             ("%s: ..." % allowed[0]), number)
        name = m.group(1)
        if name not in allowed:
            raise ParseError("unknown section %r (expected one of %s)"
                             % (name, ", ".join(allowed)), number)
        if name in seen:
            raise ParseError("duplicate section %r" % name, number)
        indent = len(line) - len(line.strip())
        seen[name] = (m.group(2), number, indent + len(name) + 2)
    return seen, target


def parse_diagram(text):
    """Parse a trisection, Heegaard, or Heegaard-Kirby diagram file."""
    lines = _significant_lines(text)
    kind, header_line, m = _parse_header(lines)
    if kind not in ("trisection", "heegaard", "heegaard-kirby"):
        raise ParseError("expected a diagram file, got kind %r" % kind,
                         header_line)
    genus = int(m.group(1))
    body = lines[1:]
    if kind == "trisection":
        declared = None
        if m.group(2) is not None:
            declared = (int(m.group(2)), int(m.group(3)), int(m.group(4)))
        secs, target = _sections(body, ("alpha", "beta", "gamma"), header_line)
        if target is not None:
            raise ParseError("target line only belongs in heegaard-kirby files",
                             target[1])
        for name in ("alpha", "beta", "gamma"):
            if name not in secs:
                raise ParseError("missing section %r" % name, header_line)
        systems = {name: _parse_system(genus, *secs[name]) for name in secs}
        try:
            return TrisectionDiagram(genus, systems["alpha"], systems["beta"],
                                     systems["gamma"], declared)
        except ValueError as e:
            raise ParseError(str(e), header_line)
    if kind == "heegaard":
        secs, target = _sections(body, ("alpha", "beta"), header_line)
        if target is not None:
            raise ParseError("target line only belongs in heegaard-kirby files",
                             target[1])
        for name in ("alpha", "beta"):
            if name not in secs:
                raise ParseError("missing section %r" % name, header_line)
        return HeegaardDiagram(genus, _parse_system(genus, *secs["alpha"]),
                               _parse_system(genus, *secs["beta"]))
    secs, target = _sections(body, ("alpha", "beta", "link"), header_line)
    for name in ("alpha", "beta"):
        if name not in secs:
            raise ParseError("missing section %r" % name, header_line)
    if target is None:
        raise ParseError("missing 'target m=...' line", header_line)
    link = _parse_link(genus, *secs["link"]) if "link" in secs else ()
    background = HeegaardDiagram(genus, _parse_system(genus, *secs["alpha"]),
                                 _parse_system(genus, *secs["beta"]))
    try:
        return HeegaardKirbyDiagram(genus, background, link, target[0])
    except ValueError as e:
        raise ParseError(str(e), header_line)


def parse_linking(text):
    lines = _significant_lines(text)
    kind, header_line, m = _parse_header(lines)
    if kind != "linking":
        raise ParseError("expected a linking file, got kind %r" % kind,
                         header_line)
    size = int(m.group(1))
    rows = []
    for number, line in lines[1:]:
        sm = _SECTION.match(line.strip())
        if sm is None or sm.group(1) != "row":
            raise ParseError("expected a 'row: ...' line", number)
        toks = sm.group(2).split()
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise ParseError("rows must be integers", number)
        if len(row) != size:
            raise ParseError("row has %d entries, expected %d"
                             % (len(row), size), number)
        rows.append(row)
    if len(rows) != size:
        raise ParseError("got %d rows, expected %d" % (len(rows), size),
                         header_line)
    try:
        return LinkingMatrix.from_rows(rows)
    except ValueError as e:
        raise ParseError(str(e), header_line)


def parse_presentation(text):
    lines = _significant_lines(text)
    kind, header_line, m = _parse_header(lines)
    if kind != "presentation":
        raise ParseError("expected a presentation file, got kind %r" % kind,
                         header_line)
    n = int(m.group(1))
    relators = []
    for number, line in lines[1:]:
        sm = _SECTION.match(line.strip())
        if sm is None or sm.group(1) != "relator":
            raise ParseError("expected a 'relator: ...' line", number)
        letters = []
        base = (len(line) - len(line.strip())) + len("relator:") + 1
        for tok in re.finditer(r"\S+", sm.group(2)):
            try:
                v = words.parse_generator_letter(tok.group())
            except ValueError as e:
                raise ParseError(str(e), number, base + tok.start())
            if abs(v) > n:
                raise ParseError("letter %s exceeds generator count %d"
                                 % (tok.group(), n), number, base + tok.start())
            letters.append(v)
        relators.append(tuple(letters))
    try:
        return BalancedPresentation(n, tuple(relators))
    except ValueError as e:
        raise ParseError(str(e), header_line)


def parse_any(text):
    """Parse whichever kind the header announces."""
    kind = sniff_kind(text)
    if kind == "linking":
        return parse_linking(text)
    if kind == "presentation":
        return parse_presentation(text)
    return parse_diagram(text)


# -- canonical output ---------------------------------------------------------

def format_curve(c):
    if c.template is not None:
        return "@%d(%d,%d)" % (c.template.handle, c.template.p, c.template.q)
    return words.format_surface_word(c.word)


def _system_line(name, system):
    return "%s: %s" % (name, " ; ".join(format_curve(c) for c in system.curves))


def format_diagram(obj):
    if isinstance(obj, TrisectionDiagram):
        header = "trisection genus=%d" % obj.genus
        if obj.declared_params is not None:
            header += " params=(%d,%d,%d)" % obj.declared_params
        return "\n".join([header,
                          _system_line("alpha", obj.alpha),
                          _system_line("beta", obj.beta),
                          _system_line("gamma", obj.gamma)]) + "\n"
    if isinstance(obj, HeegaardKirbyDiagram):
        out = ["heegaard-kirby genus=%d" % obj.genus,
               _system_line("alpha", obj.background.alpha),
               _system_line("beta", obj.background.beta)]
        if obj.link:
            parts = []
            for comp in obj.link:
                framing = "surface" if comp.is_surface_framed else str(comp.framing)
                parts.append("%s framing=%s" % (format_curve(comp.curve), framing))
            out.append("link: %s" % " ; ".join(parts))
        out.append("target m=%d" % obj.m)
        return "\n".join(out) + "\n"
    if isinstance(obj, HeegaardDiagram):
        return "\n".join(["heegaard genus=%d" % obj.genus,
                          _system_line("alpha", obj.alpha),
                          _system_line("beta", obj.beta)]) + "\n"
    raise TypeError("not a diagram: %r" % (obj,))


def format_linking(m):
    out = ["linking size=%d" % m.size]
    for row in m.rows:
        out.append("row: %s" % " ".join(str(v) for v in row))
    return "\n".join(out) + "\n"


def format_presentation(p):
    out = ["presentation generators=%d" % p.generators]
    for r in p.relators:
        out.append("relator: %s" % words.format_generator_word(r))
    return "\n".join(out) + "\n"


def format_any(obj):
    if isinstance(obj, LinkingMatrix):
        return format_linking(obj)
    if isinstance(obj, BalancedPresentation):
        return format_presentation(obj)
    return format_diagram(obj)
