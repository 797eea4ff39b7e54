"""Text forms of maps: ``proj{ [x: a,b;c,d] ... }`` and ``circ{ [x: p,q] ... }``."""

import re

from . import moebius as mb
from .errors import ParseError, ValidationError
from .scalar import as_scalar, format_point, format_scalar, parse_point, parse_scalar

__all__ = ["FORMAT_HEADER", "format_map", "parse_map", "parse_maps", "position"]

FORMAT_HEADER = "pw1d-format 1"

_PIECE = re.compile(r"\[\s*([^:\]]*?)\s*:\s*([^\]]*?)\s*\]")


def position(text, offset):
    """1-based (line, column) of ``offset`` in ``text``."""
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def format_map(f):
    parts = []
    for l, h in f.pieces:
        if f.model == "circ":
            d = as_scalar(h.d)
            body = f"{format_scalar(h.a / d)},{format_scalar(h.b / d)}"
        else:
            body = ",".join(format_scalar(v) for v in h.entries[:2]) + ";" + \
                ",".join(format_scalar(v) for v in h.entries[2:])
        parts.append(f"[{format_point(l)}: {body}]")
    return f"{f.model}{{ {' '.join(parts)} }}"


def parse_map(text, sqrt=None, offset=0, source=None):
    """Parse one map.  ``offset``/``source`` locate errors inside a larger text."""
    from .piecewise import CIRC, PROJ, identity, make

    source = text if source is None else source

    def fail(msg, at):
        line, col = position(source, offset + at)
        raise ParseError(msg, line, col)

    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if stripped in ("id", "circ-id"):
        return identity(CIRC)
    if stripped == "proj-id":
        return identity(PROJ)
    m = re.match(r"(proj|circ)\s*\{", stripped)
    if not m:
        fail("expected 'proj{' or 'circ{'", lead)
    model = m.group(1)
    if not stripped.endswith("}"):
        fail("missing closing '}'", lead + len(stripped))
    body_start = lead + m.end()
    body = stripped[m.end():-1]
    pieces = []
    pos = 0
    while True:
        while pos < len(body) and body[pos].isspace():
            pos += 1
        if pos >= len(body):
            break
        pm = _PIECE.match(body, pos)
        if not pm:
            fail("expected '[point: map]'", body_start + pos)
        at = body_start + pm.start()
        try:
            col = position(source, offset + at)[1]
            left = parse_point(pm.group(1), sqrt, col)
            if model == CIRC:
                vals = pm.group(2).split(",")
                if len(vals) != 2:
                    fail("circ piece needs 'p,q'", body_start + pm.start(2))
                p, q = (parse_scalar(v, sqrt, col) for v in vals)
                h = mb.affine(p, q)
            else:
                h = mb.parse_homography(pm.group(2), sqrt, col)
        except ParseError as exc:
            fail(str(exc).rsplit(" (line", 1)[0], at)
        except ValidationError as exc:
            fail(str(exc), at)
        pieces.append((left, h))
        pos = pm.end()
    if not pieces:
        fail("map has no pieces", body_start)
    return make(model, pieces)


def parse_maps(text, sqrt=None):
    """Parse a generators file: one map per line; '#' comments; optional header."""
    maps = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0]
        if line.strip() and line.strip() != FORMAT_HEADER:
            maps.append(parse_map(line, sqrt, offset, text))
        offset += len(raw)
    return maps
