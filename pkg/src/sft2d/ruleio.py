"""Text format for SFT definitions (``.sft`` files).

Line-oriented grammar:

* ``#`` starts a comment anywhere on a line;
* section headers ``[alphabet]``, ``[horizontal]``, ``[vertical]``, ``[meta]``;
* alphabet lines hold whitespace-separated symbol names;
* pair lines are ``A B``, meaning the pair (A, B) is allowed;
* a pair section may open with the directive ``mode=forbidden`` (or
  ``mode=allowed``, the default), in which case the listed pairs are read
  against an all-allowed base.

The ``[alphabet]``, ``[horizontal]`` and ``[vertical]`` sections are required;
``[meta]`` is optional and holds a free-form provenance string (verbatim lines
joined with newlines; avoid ``#`` inside it, comments are stripped first).

Serialization is canonical and byte-exact: symbols one per line in index
order, pairs sorted by index, explicit mode directive, ``allowed`` mode iff
the allowed relation is no larger than the forbidden one.  UTF-8, ``\\n``
newlines.  ``parse(serialize(x)) == x`` for every nonempty SFT.
"""

from __future__ import annotations

from .core import Alphabet, Sft2d

__all__ = ["ParseError", "parse", "serialize", "load", "save"]

_SECTIONS = ("alphabet", "horizontal", "vertical", "meta")


class ParseError(ValueError):
    """Rule-file syntax or consistency error, carrying a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


def parse(text: str) -> Sft2d:
    if not isinstance(text, str):
        raise ParseError("input is not text", 0)
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    meta_lines: list[str] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0]
        if current == "meta" and not body.lstrip().startswith("["):
            meta_lines.append(body.rstrip())
            continue
        line = body.strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"malformed section header {line!r}", lineno)
            name = line[1:-1].strip().lower()
            if name not in _SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno)
            if name in sections or (name == "meta" and current == "meta"):
                raise ParseError(f"duplicate section [{name}]", lineno)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ParseError(f"content before any section: {line!r}", lineno)
        sections[current].append((lineno, line))

    for required in ("alphabet", "horizontal", "vertical"):
        if required not in sections:
            raise ParseError(f"missing required section [{required}]", len(text.split("\n")))

    names: list[str] = []
    seen: set[str] = set()
    for lineno, line in sections["alphabet"]:
        for tok in line.split():
            if tok in seen:
                raise ParseError(f"duplicate symbol {tok!r}", lineno)
            if tok.startswith("["):
                raise ParseError(f"bad symbol name {tok!r}", lineno)
            seen.add(tok)
            names.append(tok)
    if not names:
        raise ParseError("empty alphabet", 1)
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)

    def read_pairs(section: str) -> frozenset:
        items = sections[section]
        mode = "allowed"
        start = 0
        if items and items[0][1].replace(" ", "") in ("mode=allowed", "mode=forbidden"):
            mode = items[0][1].replace(" ", "").split("=", 1)[1]
            start = 1
        pairs: set[tuple[int, int]] = set()
        for lineno, line in items[start:]:
            toks = line.split()
            if len(toks) != 2:
                raise ParseError(f"pair line needs exactly two symbols: {line!r}", lineno)
            for tok in toks:
                if tok not in index:
                    raise ParseError(f"unknown symbol {tok!r}", lineno)
            pairs.add((index[toks[0]], index[toks[1]]))
        if mode == "allowed":
            return frozenset(pairs)
        allp = set((a, b) for a in range(n) for b in range(n))
        return frozenset(allp - pairs)

    h_allowed = read_pairs("horizontal")
    v_allowed = read_pairs("vertical")
    metadata = "\n".join(meta_lines).strip("\n") if "meta" in sections else ""
    return Sft2d(Alphabet(tuple(names)), h_allowed, v_allowed, metadata)


def _pair_section(name: str, allowed: frozenset, n: int) -> list[str]:
    total = n * n
    use_forbidden = len(allowed) > total - len(allowed)
    out = [f"[{name}]"]
    if use_forbidden:
        out.append("mode=forbidden")
        listed = sorted(set((a, b) for a in range(n) for b in range(n)) - allowed)
    else:
        out.append("mode=allowed")
        listed = sorted(allowed)
    return out, listed


def serialize(x: Sft2d) -> str:
    """Canonical text form; injective on SFTs up to metadata."""
    if x.is_empty:
        raise ValueError("cannot serialize an empty-alphabet SFT")
    n = x.alphabet.size
    lines: list[str] = ["[alphabet]"]
    lines.extend(x.alphabet.names)
    for section, rel in (("horizontal", x.h_allowed), ("vertical", x.v_allowed)):
        head, listed = _pair_section(section, rel, n)
        lines.extend(head)
        for a, b in listed:
            lines.append(f"{x.alphabet.names[a]} {x.alphabet.names[b]}")
    if x.metadata:
        lines.append("[meta]")
        lines.extend(x.metadata.split("\n"))
    return "\n".join(lines) + "\n"


def load(path) -> Sft2d:
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read())


def save(x: Sft2d, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize(x))
