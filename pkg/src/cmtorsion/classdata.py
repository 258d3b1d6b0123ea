"""Class polynomials H_D[u](X) with coefficients in Z or Z[sqrt(-D)].

Tables are plain text, one entry per line::

    # comment
    D=20 inv=g3e12 deg=2 coeffs=-239-154*s;70-22*s;1

``s`` stands for sqrt(-D); coefficients run from the constant term up to
the (monic) leading one.
"""

from __future__ import annotations

import io
import re
from collections.abc import Mapping
from dataclasses import dataclass
from typing import IO, Iterator, NamedTuple

from .errors import InvalidModulus, NoApplicableMethod, TableFormatError
from .modarith import sqrt_mod
from .polyring import FpPoly, roots_mod_p

INVARIANTS = ("g3e12", "g5e6", "g7e4", "g11e4", "gamma2", "weber_sq")


class QuadIntCoeff(NamedTuple):
    """a + b*sqrt(-D)."""

    a: int
    b: int = 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*s"


@dataclass(frozen=True)
class ClassPolyEntry:
    D: int
    invariant: str
    coeffs: tuple[QuadIntCoeff, ...]

    def __post_init__(self):
        if self.invariant not in INVARIANTS:
            raise ValueError(f"unknown invariant tag {self.invariant!r}")
        if not self.coeffs or self.coeffs[-1] != (1, 0):
            raise ValueError(f"class polynomial for D={self.D} is not monic")

    @property
    def key(self) -> tuple[int, str]:
        return self.D, self.invariant

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_rational(self) -> bool:
        return all(c.b == 0 for c in self.coeffs)

    def to_line(self) -> str:
        body = ";".join(str(c) for c in self.coeffs)
        return f"D={self.D} inv={self.invariant} deg={self.degree} coeffs={body}"


def _entry(D, inv, *coeffs):
    return ClassPolyEntry(D, inv, tuple(QuadIntCoeff(*c) if isinstance(c, tuple) else QuadIntCoeff(c)
                                        for c in coeffs))


class ClassPolyTable(Mapping):
    """Immutable mapping (D, invariant) -> ClassPolyEntry."""

    def __init__(self, entries=()):
        data = {}
        for e in entries:
            data[e.key] = e
        self._data = data

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(sorted(self._data))

    def __len__(self):
        return len(self._data)

    def for_discriminant(self, D: int) -> list[ClassPolyEntry]:
        """Entries for D in the fixed invariant order of INVARIANTS."""
        return [self._data[(D, inv)] for inv in INVARIANTS if (D, inv) in self._data]

    def merged(self, other: "ClassPolyTable") -> "ClassPolyTable":
        """Entries of ``other`` shadow ours on key collision."""
        return ClassPolyTable(list(self.values()) + list(other.values()))

    def dumps(self) -> str:
        return "".join(self[k].to_line() + "\n" for k in self)

    def __eq__(self, other):
        if isinstance(other, ClassPolyTable):
            return self._data == other._data
        return NotImplemented

    __hash__ = None


_BUILTIN = ClassPolyTable([
    _entry(15, "g3e12", 729, 81, 1),
    _entry(20, "g3e12", (-239, -154), (70, -22), 1),
    _entry(40, "gamma2", 20880, -780, 1),
    _entry(35, "g5e6", 125, 50, 1),
    _entry(91, "g5e6", (-99, -8), (130, -40), 1),
    _entry(91, "g7e4", 49, 77, 1),
    _entry(20, "g7e4", (41, -6), (15, -1), 1),
    _entry(88, "g11e4", 121, -66, 1),
])


def builtin_table() -> ClassPolyTable:
    return _BUILTIN


# -- parsing ------------------------------------------------------------------

_LINE_RE = re.compile(r"D=(?P<D>\d+)\s+inv=(?P<inv>\S+)\s+deg=(?P<deg>\d+)\s+coeffs=(?P<coeffs>\S+)\s*$")
_COEFF_RE = re.compile(r"(?P<a>[+-]?\d+)(?:(?P<sign>[+-])(?P<b>\d+)\*s)?$")


def _parse_coeff(text, lineno, column):
    m = _COEFF_RE.match(text)
    if not m:
        raise TableFormatError(f"malformed coefficient {text!r}", lineno, column)
    b = int(m["b"]) if m["b"] else 0
    if m["sign"] == "-":
        b = -b
    return QuadIntCoeff(int(m["a"]), b)


def parse_table(text: str) -> ClassPolyTable:
    """Parse table text strictly; no merging with the builtins."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise TableFormatError("expected 'D=<int> inv=<tag> deg=<int> coeffs=<list>'", lineno, 1)
        col = raw.index(m["inv"]) + 1
        if m["inv"] not in INVARIANTS:
            raise TableFormatError(f"unknown invariant tag {m['inv']!r}", lineno, col)
        D = int(m["D"])
        if D == 0:
            raise TableFormatError("D must be positive", lineno, raw.index("D=") + 3)
        coeff_col = raw.index("coeffs=") + 8
        coeffs = []
        offset = 0
        for piece in m["coeffs"].split(";"):
            coeffs.append(_parse_coeff(piece, lineno, coeff_col + offset))
            offset += len(piece) + 1
        deg = int(m["deg"])
        if len(coeffs) != deg + 1:
            raise TableFormatError(f"deg={deg} but {len(coeffs)} coefficients given", lineno, coeff_col)
        if coeffs[-1] != (1, 0):
            raise TableFormatError("leading coefficient must be 1 (monic)", lineno, coeff_col)
        key = (D, m["inv"])
        if key in entries:
            raise TableFormatError(f"duplicate entry for D={D} inv={m['inv']}", lineno, 1)
        entries[key] = ClassPolyEntry(D, m["inv"], tuple(coeffs))
    return ClassPolyTable(entries.values())


def load_table(source: bytes | str | IO | None) -> ClassPolyTable:
    """Builtins overlaid with the entries read from ``source``."""
    if source is None:
        return builtin_table()
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    return builtin_table().merged(parse_table(text))


def load_table_file(path) -> ClassPolyTable:
    with open(path, "rb") as fh:
        return load_table(fh)


def serialize_table(table: ClassPolyTable) -> str:
    return table.dumps()


# -- reduction mod p ----------------------------------------------------------


def reduce_entry_mod_p(e: ClassPolyEntry, p: int, sqrtD: int | None) -> FpPoly:
    """Map each a + b*sqrt(-D) to (a + b*sqrtD) mod p."""
    if p < 3 or p % 2 == 0:
        raise InvalidModulus(f"p must be an odd prime, got {p}")
    if not e.is_rational():
        if sqrtD is None:
            raise ValueError(f"entry D={e.D} needs a square root of -{e.D} mod {p}")
        if (sqrtD * sqrtD + e.D) % p:
            raise ValueError(f"{sqrtD}^2 != -{e.D} mod {p}")
    s = sqrtD or 0
    return FpPoly([c.a + c.b * s for c in e.coeffs], p)


def invariant_roots(e: ClassPolyEntry, p: int, seed: int = 0) -> list[tuple[int | None, int]]:
    """All (sqrtD, root) pairs of the reduced entry, ordered by root.

    Rational entries carry sqrtD = None.  For entries over Z[sqrt(-D)]
    both square roots of -D are used.
    """
    if e.is_rational():
        return [(None, r) for r in roots_mod_p(reduce_entry_mod_p(e, p, None), seed)]
    s = sqrt_mod(-e.D, p)
    if s is None:
        return []
    branches = [s] if s == 0 else [s, p - s]
    out = []
    for branch in branches:
        out.extend((branch, r) for r in roots_mod_p(reduce_entry_mod_p(e, p, branch), seed))
    return sorted(out, key=lambda t: (t[1], t[0]))


def find_invariant_root(D: int, inv: str, p: int, table: ClassPolyTable | None = None,
                        seed: int = 0) -> int:
    """The smallest root mod p of H_D[inv], over both branches of sqrt(-D)."""
    table = builtin_table() if table is None else table
    try:
        e = table[(D, inv)]
    except KeyError:
        raise NoApplicableMethod(f"no class polynomial for D={D} inv={inv}") from None
    roots = invariant_roots(e, p, seed)
    if not roots:
        raise NoApplicableMethod(f"H_{-D}[{inv}] has no root mod {p}")
    return roots[0][1]
