"""Line-oriented lattice and valuation documents, JSON reports, DOT export.

The lattice format is one directive per line:

    lattice <name>
    element <name>
    cover <lo> <hi>
    ortho <a> <b>
    bottom <name>
    top <name>

``#`` starts a comment; blank lines are ignored; names are arbitrary
whitespace-free tokens and must be declared before use.  Declaration
order fixes element indices.  Valuation documents carry a
``valuation for <lattice>`` header and ``<element> = <number>`` lines,
where a number is ``p/q`` (kept exact) or a decimal (parsed to float).
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from fractions import Fraction

from .core import Lattice, OrthoLattice, attach_ortho, build_poset, lattice_check


class ParseError(Exception):
    """Positioned syntax error; line numbers are 1-based."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class UnknownElement(ParseError):
    def __init__(self, line: int, name: str):
        self.name = name
        super().__init__(line, f"unknown element {name!r}")


class DuplicateDeclaration(ParseError):
    def __init__(self, line: int, message: str):
        super().__init__(line, message)


class ValueOutOfRange(ParseError):
    def __init__(self, line: int, name: str, value):
        self.name = name
        self.value = value
        super().__init__(line, f"value {value} for {name!r} outside [0, 1]")


@dataclass(frozen=True)
class LatticeDocument:
    name: str
    elements: tuple[str, ...]
    covers: tuple[tuple[str, str], ...]
    ortho_pairs: tuple[tuple[str, str], ...]
    bottom: str | None = None
    top: str | None = None


@dataclass(frozen=True)
class ValuationDocument:
    lattice_name: str
    entries: tuple[tuple[str, Fraction | float], ...]

    def as_dict(self) -> dict[str, Fraction | float]:
        return dict(self.entries)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_lattice(text: str) -> LatticeDocument:
    """Parse a lattice document.  Total: returns a document or raises a
    positioned ParseError; never anything else."""
    name = None
    elements: list[str] = []
    known: set[str] = set()
    covers: list[tuple[str, str]] = []
    cover_set: set[tuple[str, str]] = set()
    ortho: list[tuple[str, str]] = []
    partner: dict[str, str] = {}
    bottom = top = None
    for lineno, tokens in _lines(text):
        directive, args = tokens[0], tokens[1:]
        if directive == "lattice":
            if name is not None:
                raise DuplicateDeclaration(lineno, "second lattice header")
            if len(args) != 1:
                raise ParseError(lineno, "lattice header takes one name")
            name = args[0]
            continue
        if name is None:
            raise ParseError(lineno, "first directive must be the lattice header")
        if directive == "element":
            if len(args) != 1:
                raise ParseError(lineno, "element takes one name")
            if args[0] in known:
                raise DuplicateDeclaration(lineno, f"element {args[0]!r} declared twice")
            known.add(args[0])
            elements.append(args[0])
        elif directive == "cover":
            if len(args) != 2:
                raise ParseError(lineno, "cover takes two names")
            for arg in args:
                if arg not in known:
                    raise UnknownElement(lineno, arg)
            pair = (args[0], args[1])
            if pair in cover_set:
                raise DuplicateDeclaration(lineno, f"cover {pair} declared twice")
            cover_set.add(pair)
            covers.append(pair)
        elif directive == "ortho":
            if len(args) != 2:
                raise ParseError(lineno, "ortho takes two names")
            for arg in args:
                if arg not in known:
                    raise UnknownElement(lineno, arg)
            a, b = args
            for p, q in ((a, b), (b, a)):
                if p in partner and partner[p] != q:
                    raise DuplicateDeclaration(lineno, f"{p!r} already paired with {partner[p]!r}")
            if a in partner:
                raise DuplicateDeclaration(lineno, f"ortho pair {a!r} {b!r} declared twice")
            partner[a], partner[b] = b, a
            ortho.append((a, b))
        elif directive == "bottom":
            if len(args) != 1:
                raise ParseError(lineno, "bottom takes one name")
            if args[0] not in known:
                raise UnknownElement(lineno, args[0])
            if bottom is not None:
                raise DuplicateDeclaration(lineno, "bottom declared twice")
            bottom = args[0]
        elif directive == "top":
            if len(args) != 1:
                raise ParseError(lineno, "top takes one name")
            if args[0] not in known:
                raise UnknownElement(lineno, args[0])
            if top is not None:
                raise DuplicateDeclaration(lineno, "top declared twice")
            top = args[0]
        else:
            raise ParseError(lineno, f"unknown directive {directive!r}")
    if name is None:
        raise ParseError(1, "missing lattice header")
    return LatticeDocument(
        name=name,
        elements=tuple(elements),
        covers=tuple(covers),
        ortho_pairs=tuple(ortho),
        bottom=bottom,
        top=top,
    )


def serialize_lattice(doc: LatticeDocument) -> str:
    """Canonical text form: elements in declaration order, covers and
    ortho pairs sorted by index, ortho pairs lower index first."""
    index = {name: i for i, name in enumerate(doc.elements)}
    out = [f"lattice {doc.name}"]
    out += [f"element {name}" for name in doc.elements]
    if doc.bottom is not None:
        out.append(f"bottom {doc.bottom}")
    if doc.top is not None:
        out.append(f"top {doc.top}")
    for lo, hi in sorted(doc.covers, key=lambda p: (index[p[0]], index[p[1]])):
        out.append(f"cover {lo} {hi}")
    pairs = sorted(
        (min(p, key=index.get), max(p, key=index.get)) for p in doc.ortho_pairs
    )
    seen = set()
    for a, b in sorted(pairs, key=lambda p: (index[p[0]], index[p[1]])):
        if (a, b) not in seen:
            seen.add((a, b))
            out.append(f"ortho {a} {b}")
    return "\n".join(out) + "\n"


def lattice_from_document(doc: LatticeDocument) -> Lattice | OrthoLattice:
    """Build and fully verify the structure a document describes."""
    poset = build_poset(doc.elements, doc.covers, bottom=doc.bottom, top=doc.top)
    lattice = lattice_check(poset)
    if doc.ortho_pairs:
        return attach_ortho(lattice, doc.ortho_pairs)
    return lattice


def document_from_lattice(obj: Lattice | OrthoLattice, name: str) -> LatticeDocument:
    """Extract the canonical document of a built lattice."""
    if isinstance(obj, OrthoLattice):
        lattice, neg = obj.lattice, obj.neg
    else:
        lattice, neg = obj, None
    names = lattice.names
    covers = tuple((names[a], names[b]) for a, b in lattice.poset.covers)
    pairs = ()
    if neg is not None:
        pairs = tuple(
            (names[i], names[neg[i]]) for i in range(lattice.n) if i < neg[i]
        )
    return LatticeDocument(
        name=name,
        elements=names,
        covers=covers,
        ortho_pairs=pairs,
        bottom=names[lattice.bottom],
        top=names[lattice.top],
    )


def _parse_number(lineno: int, token: str, exact: bool = False):
    if "/" in token:
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise ParseError(lineno, f"bad rational {token!r}")
    try:
        return Fraction(int(token))
    except ValueError:
        pass
    if exact:
        # read the decimal literal as the rational it denotes
        try:
            return Fraction(token)
        except ValueError:
            raise ParseError(lineno, f"bad number {token!r}")
    try:
        return float(token)
    except ValueError:
        raise ParseError(lineno, f"bad number {token!r}")


def parse_valuation(text: str, exact: bool = False) -> ValuationDocument:
    """Parse a valuation document; p/q values stay exact Fractions.
    With exact=True decimal literals become Fractions too."""
    lattice_name = None
    entries: list[tuple[str, Fraction | float]] = []
    seen: set[str] = set()
    for lineno, tokens in _lines(text):
        if lattice_name is None:
            if len(tokens) != 3 or tokens[0] != "valuation" or tokens[1] != "for":
                raise ParseError(lineno, "expected header: valuation for <lattice>")
            lattice_name = tokens[2]
            continue
        if len(tokens) != 3 or tokens[1] != "=":
            raise ParseError(lineno, "expected: <element> = <number>")
        name, value = tokens[0], _parse_number(lineno, tokens[2], exact)
        if name in seen:
            raise DuplicateDeclaration(lineno, f"value for {name!r} declared twice")
        seen.add(name)
        if not 0 <= value <= 1:
            raise ValueOutOfRange(lineno, name, value)
        entries.append((name, value))
    if lattice_name is None:
        raise ParseError(1, "missing valuation header")
    return ValuationDocument(lattice_name=lattice_name, entries=tuple(entries))


def serialize_valuation(doc: ValuationDocument) -> str:
    out = [f"valuation for {doc.lattice_name}"]
    for name, value in doc.entries:
        out.append(f"{name} = {render_number(value)}")
    return "\n".join(out) + "\n"


def render_number(value):
    """Rationals as p/q (integers bare), floats to 12 significant digits."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.12g}"


def json_ready(obj):
    """Recursively make a report JSON-serialisable: Fractions become p/q
    strings, floats are rounded to 12 significant digits."""
    if isinstance(obj, Fraction):
        return render_number(obj)
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, numbers.Integral) and not isinstance(obj, bool):
        return int(obj)
    return obj


def emit_report(payload: dict) -> str:
    """Serialise a report dict with the schema marker first and stable
    key order (insertion order is preserved)."""
    body = {"schema": 1}
    body.update(json_ready(payload))
    return json.dumps(body, indent=2, allow_nan=False)


def to_dot(obj: Lattice | OrthoLattice, name: str = "lattice") -> str:
    """Graphviz text of the Hasse diagram, edges upward."""
    lattice = obj.lattice if isinstance(obj, OrthoLattice) else obj
    out = [f'digraph "{name}" {{', "  rankdir=BT;", '  node [shape=plaintext];']
    for el in lattice.names:
        out.append(f'  "{el}";')
    for a, b in lattice.poset.covers:
        out.append(f'  "{lattice.names[a]}" -> "{lattice.names[b]}";')
    out.append("}")
    return "\n".join(out) + "\n"
