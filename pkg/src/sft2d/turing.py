"""Turing machines: description format, validation, and a direct simulator.

The ``.tm`` text format is line-oriented::

    states: A B H
    tape:   0 1
    blank:  0
    init:   A
    halt:   H
    A 0 -> B 1 R
    A 1 -> B 1 L
    B 0 -> A 1 L
    B 1 -> H 1 R

Transitions must be total on (non-halting state, tape char).  The simulator
here is deliberately plain (dict tape, one step at a time); it serves as an
independent oracle for the space-time SFT compiler.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["TuringMachine", "TmParseError", "parse_tm", "load_tm", "simulate_steps"]

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")

LEFT = "L"
RIGHT = "R"


class TmParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    tape: tuple[str, ...]
    blank: str
    init: str
    halt: str
    delta: dict  # (state, char) -> (state, char, "L"|"R")

    def __post_init__(self):
        for nm in list(self.states) + list(self.tape):
            if not _NAME_RE.match(nm):
                raise ValueError(f"bad state/char name {nm!r} (alnum and _ only)")
        if self.blank not in self.tape:
            raise ValueError("blank must be a tape char")
        if self.init not in self.states or self.halt not in self.states:
            raise ValueError("init/halt must be states")
        for st in self.states:
            if st == self.halt:
                continue
            for ch in self.tape:
                if (st, ch) not in self.delta:
                    raise ValueError(f"transition missing for ({st},{ch})")
        for (st, ch), (st2, ch2, d) in self.delta.items():
            if st == self.halt:
                raise ValueError("halting state must have no outgoing transitions")
            if st2 not in self.states or ch2 not in self.tape or d not in (LEFT, RIGHT):
                raise ValueError(f"bad transition for ({st},{ch})")


def parse_tm(text: str) -> TuringMachine:
    fields: dict[str, str] = {}
    trans: dict = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line and "->" not in line:
            key, _, val = line.partition(":")
            key = key.strip().lower()
            if key not in ("states", "tape", "blank", "init", "halt"):
                raise TmParseError(f"unknown field {key!r}", lineno)
            if key in fields:
                raise TmParseError(f"duplicate field {key!r}", lineno)
            fields[key] = val.strip()
            continue
        if "->" in line:
            lhs, _, rhs = line.partition("->")
            lt = lhs.split()
            rt = rhs.split()
            if len(lt) != 2 or len(rt) != 3:
                raise TmParseError(f"transition must be 'state char -> state char L|R'", lineno)
            if rt[2] not in (LEFT, RIGHT):
                raise TmParseError(f"direction must be L or R, got {rt[2]!r}", lineno)
            key = (lt[0], lt[1])
            if key in trans:
                raise TmParseError(f"duplicate transition for {key}", lineno)
            trans[key] = (rt[0], rt[1], rt[2])
            continue
        raise TmParseError(f"unrecognized line {line!r}", lineno)
    for req in ("states", "tape", "blank", "init", "halt"):
        if req not in fields:
            raise TmParseError(f"missing field {req!r}", len(text.split("\n")))
    try:
        return TuringMachine(
            states=tuple(fields["states"].split()),
            tape=tuple(fields["tape"].split()),
            blank=fields["blank"],
            init=fields["init"],
            halt=fields["halt"],
            delta=trans,
        )
    except ValueError as e:
        raise TmParseError(str(e), 0) from e


def load_tm(path) -> TuringMachine:
    with open(path, "r", encoding="utf-8") as f:
        return parse_tm(f.read())


def simulate_steps(
    tm: TuringMachine,
    tape: dict | None,
    head: int,
    state: str,
    steps: int,
):
    """Run the machine and return the list of configurations, one per step.

    Each entry is (tape copy as dict, head position, state).  Stops early if
    the halting state is reached; unwritten cells read as blank.
    """
    t = dict(tape or {})
    out = [(dict(t), head, state)]
    for _ in range(steps):
        if state == tm.halt:
            break
        ch = t.get(head, tm.blank)
        state2, ch2, d = tm.delta[(state, ch)]
        t[head] = ch2
        head = head + (1 if d == RIGHT else -1)
        state = state2
        out.append((dict(t), head, state))
    return out
