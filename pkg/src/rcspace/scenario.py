"""Scenario records and the line-oriented scenario file format.

A file looks like::

    # two unit balls far apart
    space: niemytzki
    epsilon: 1/2
    stages: 8
    samples: 200
    seed: 7
    budget: 16
    F:
      ball 0 0 1
    G:
      ball 4 0 1

``space: sorgenfrey <d>`` switches to boxes, one per line as
``box l1 .. ld w1 .. wd`` (the half-open box with lower corner l and
widths w).  Numbers are rationals written ``p`` or ``p/q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from . import niemytzki as nz
from . import sorgenfrey as sf
from .errors import DomainError, ParseError, ScenarioError
from .exact import HALF, Q, format_rational, parse_rational

NIEMYTZKI = "niemytzki"
SORGENFREY = "sorgenfrey"

_INT_KEYS = {"stages": 1, "samples": 1, "seed": 0, "budget": 0}


@dataclass(frozen=True)
class Scenario:
    space: str
    F: tuple
    G: tuple
    d: int = 2
    epsilon: object = HALF
    stages: int = 8
    samples: int = 200
    seed: int = 0
    budget: int = 16
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.space not in (NIEMYTZKI, SORGENFREY):
            raise ScenarioError(f"unknown space {self.space!r}")
        eps = Q(self.epsilon)
        if not 0 < eps < 1:
            raise DomainError("epsilon must satisfy 0 < epsilon < 1")
        object.__setattr__(self, "epsilon", eps)
        for key, low in _INT_KEYS.items():
            if getattr(self, key) < low:
                raise DomainError(f"{key} must be at least {low}")
        if self.space == NIEMYTZKI:
            F, G = nz.validate_pair(self.F, self.G)
        else:
            F, G = sf.validate_pair(self.F, self.G)
            if F[0].d != self.d:
                raise DomainError(f"boxes have dimension {F[0].d}, scenario says {self.d}")
        object.__setattr__(self, "F", tuple(F))
        object.__setattr__(self, "G", tuple(G))

    def swapped(self):
        return replace(self, F=self.G, G=self.F, name=self.name + "~swap")


def _ball_line(b):
    a = b.anchor
    return "ball " + " ".join(format_rational(v) for v in (a.x, a.y, b.radius))


def _box_line(b):
    return "box " + " ".join(format_rational(v) for v in tuple(b.lower) + b.widths)


def serialize_scenario(s):
    lines = []
    if s.space == NIEMYTZKI:
        lines.append("space: niemytzki")
    else:
        lines.append(f"space: sorgenfrey {s.d}")
    lines.append(f"epsilon: {format_rational(s.epsilon)}")
    for key in _INT_KEYS:
        lines.append(f"{key}: {getattr(s, key)}")
    emit = _ball_line if s.space == NIEMYTZKI else _box_line
    for label, gens in (("F", s.F), ("G", s.G)):
        lines.append(f"{label}:")
        lines.extend("  " + emit(g) for g in gens)
    return "\n".join(lines) + "\n"


def _tokens(text):
    """Split on whitespace, keeping 1-based start columns."""
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((text[i:j], i + 1))
        i = j
    return out


def _rational(tok, lineno):
    text, col = tok
    try:
        return parse_rational(text)
    except DomainError:
        raise ParseError(f"malformed rational {text!r}", lineno, col) from None


def parse_scenario(text, name=""):
    """Parse scenario text into a validated :class:`Scenario`."""
    values = {}
    blocks = {"F": [], "G": []}
    where = {"F": [], "G": []}
    current = None
    space_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if stripped in ("F:", "G:"):
            current = stripped[0]
            continue
        if ":" in stripped:
            key, _, value = stripped.partition(":")
            key = key.strip()
            col = indent + 1
            vcol = line.index(":") + 2 + (len(value) - len(value.lstrip()))
            value = value.strip()
            current = None
            if key in values or (key == "space" and space_line is not None):
                raise ParseError(f"duplicate key {key!r}", lineno, col)
            if key == "space":
                parts = value.split()
                if parts == [NIEMYTZKI]:
                    values["space"], values["d"] = NIEMYTZKI, 2
                elif len(parts) == 2 and parts[0] == SORGENFREY:
                    if not parts[1].isdigit() or int(parts[1]) < 1:
                        raise ParseError(f"bad dimension {parts[1]!r}", lineno, vcol)
                    values["space"], values["d"] = SORGENFREY, int(parts[1])
                else:
                    raise ParseError(
                        f"space must be 'niemytzki' or 'sorgenfrey <d>', got {value!r}",
                        lineno, vcol)
                space_line = lineno
            elif key == "epsilon":
                values["epsilon"] = _rational((value, vcol), lineno)
                if not 0 < values["epsilon"] < 1:
                    raise ParseError("epsilon must satisfy 0 < epsilon < 1", lineno, vcol)
            elif key in _INT_KEYS:
                if not value.lstrip("+").isdigit():
                    raise ParseError(f"{key} must be a non-negative integer", lineno, vcol)
                n = int(value)
                if n < _INT_KEYS[key]:
                    raise ParseError(f"{key} must be at least {_INT_KEYS[key]}", lineno, vcol)
                values[key] = n
            else:
                raise ParseError(f"unknown key {key!r}", lineno, col)
            continue
        if current is None:
            raise ParseError("generator line outside an F: or G: block", lineno, indent + 1)
        if "space" not in values:
            raise ParseError("space: must come before the generator blocks", lineno, indent + 1)
        toks = _tokens(line)
        kind, kcol = toks[0]
        args = toks[1:]
        if values["space"] == NIEMYTZKI:
            if kind != "ball":
                raise ParseError(f"expected 'ball', got {kind!r}", lineno, kcol)
            if len(args) != 3:
                raise ParseError(f"ball needs 3 numbers, got {len(args)}", lineno, kcol)
            x, y, r = (_rational(t, lineno) for t in args)
            if r <= 0:
                raise ParseError("radius must be positive", lineno, args[2][1])
            if y < 0:
                raise ParseError("ball anchor lies below the axis", lineno, args[1][1])
            gen = nz.closed_kball((x, y), r)
        else:
            if kind != "box":
                raise ParseError(f"expected 'box', got {kind!r}", lineno, kcol)
            d = values["d"]
            if len(args) != 2 * d:
                raise ParseError(
                    f"dimension mismatch: box needs {2 * d} numbers for d={d}, got {len(args)}",
                    lineno, kcol)
            nums = [_rational(t, lineno) for t in args]
            for k, w in enumerate(nums[d:]):
                if w <= 0:
                    raise ParseError("box widths must be positive", lineno, args[d + k][1])
            gen = sf.genbox(nums[:d], nums[d:])
        blocks[current].append(gen)
        where[current].append(lineno)
    if "space" not in values:
        raise ParseError("missing 'space:' line")
    for side in ("F", "G"):
        if not blocks[side]:
            raise ParseError(f"{side} block is empty or missing")
    meets = nz.closed_meets_closed if values["space"] == NIEMYTZKI else sf.boxes_meet
    for j, g in enumerate(blocks["G"]):
        for i, f in enumerate(blocks["F"]):
            if meets(f, g):
                raise ParseError(
                    f"G generator meets F generator on line {where['F'][i]} (F and G must be disjoint)",
                    where["G"][j], 1)
    return Scenario(space=values["space"], F=tuple(blocks["F"]), G=tuple(blocks["G"]),
                    d=values["d"], epsilon=values.get("epsilon", HALF),
                    **{k: values[k] for k in _INT_KEYS if k in values}, name=name)


def load_scenario(path):
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), name=path.stem)


def corpus_dir():
    return Path(__file__).with_name("corpus")


def load_corpus(space=None):
    """All shipped scenarios (sorted by file name), optionally one space only."""
    out = []
    for path in sorted(corpus_dir().iterdir()):
        if path.suffix not in (".nsc", ".ssc"):
            continue
        s = load_scenario(path)
        if space is None or s.space == space:
            out.append(s)
    return out
