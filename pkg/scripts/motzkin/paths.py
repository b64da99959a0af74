"""Motzkin paths: parsing, factorization, pattern counts and path statistics.

A path is stored as its step word over the alphabet U (up), F (flat), D (down).
Every constructed `MotzkinPath` is validated, so any instance in hand stays at or
above ground level and ends there.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union


class Step(str, Enum):
    U = 'U'
    F = 'F'
    D = 'D'

    @property
    def delta(self) -> int:
        return _DELTA[self.value]


_DELTA = {'U': 1, 'F': 0, 'D': -1}


class Pattern(str, Enum):
    """Consecutive step patterns that path classes may avoid."""
    UU = 'UU'
    UD = 'UD'
    DU = 'DU'
    DD = 'DD'
    UFU = 'UFU'

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        key = (text or '').strip().upper()
        try:
            return cls(key)
        except ValueError:
            raise InvalidPattern(text) from None


# --------------- Errors ---------------

class PathError(ValueError):
    """Base class for text that does not describe a Motzkin path."""


class InvalidCharacter(PathError):
    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"invalid step {char!r} at position {position} (expected U, F or D)")


class NegativeHeight(PathError):
    def __init__(self, position: int):
        self.position = position
        self.prefix_length = position + 1
        super().__init__(
            f"path dips below ground level at position {position} "
            f"(prefix of length {self.prefix_length})"
        )


class UnbalancedPath(PathError):
    def __init__(self, height: int):
        self.height = height
        super().__init__(f"path ends at height {height}, expected 0")


class MissingLeadingFlat(PathError):
    def __init__(self, segment: str):
        self.segment = segment
        super().__init__(f"segment {segment!r} does not start with a flatstep")


class InvalidPattern(ValueError):
    def __init__(self, text: str):
        self.text = text
        names = ', '.join(p.value for p in Pattern)
        super().__init__(f"unknown pattern {text!r} (expected one of {names})")


def _check_word(word: str) -> None:
    height = 0
    for i, ch in enumerate(word):
        delta = _DELTA.get(ch)
        if delta is None:
            raise InvalidCharacter(ch, i)
        height += delta
        if height < 0:
            raise NegativeHeight(i)
    if height != 0:
        raise UnbalancedPath(height)


# --------------- Paths ---------------

@dataclass(frozen=True)
class MotzkinPath:
    word: str = ''

    def __post_init__(self) -> None:
        if not isinstance(self.word, str):
            raise TypeError(f"MotzkinPath expects a step word, got {type(self.word).__name__}")
        _check_word(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return self.word

    def __add__(self, other: "MotzkinPath") -> "MotzkinPath":
        return MotzkinPath(self.word + other.word)

    @property
    def steps(self) -> Tuple[Step, ...]:
        return tuple(Step(ch) for ch in self.word)

    @classmethod
    def flats(cls, k: int) -> "MotzkinPath":
        return cls('F' * k)

    def arch(self) -> "MotzkinPath":
        """Wrap the path in an upstep and its matching downstep."""
        return MotzkinPath('U' + self.word + 'D')

    def heights(self) -> List[int]:
        """Height after each step (the starting height 0 is not listed)."""
        out: List[int] = []
        h = 0
        for ch in self.word:
            h += _DELTA[ch]
            out.append(h)
        return out


EMPTY = MotzkinPath()


def parse_path(text: str) -> MotzkinPath:
    """Parse a U/F/D word; the empty string is the empty path."""
    return MotzkinPath(text)


def format_path(p: MotzkinPath) -> str:
    return p.word


# --------------- Factorizations ---------------

@dataclass(frozen=True)
class Empty:
    def reassemble(self) -> MotzkinPath:
        return EMPTY


@dataclass(frozen=True)
class Flat:
    rest: MotzkinPath

    def reassemble(self) -> MotzkinPath:
        return MotzkinPath('F' + self.rest.word)


@dataclass(frozen=True)
class Arch:
    """U·inside·D·rest where the D is the first return to ground level."""
    inside: MotzkinPath
    rest: MotzkinPath

    def reassemble(self) -> MotzkinPath:
        return self.inside.arch() + self.rest


Factorization = Union[Empty, Flat, Arch]


def first_return_split(p: MotzkinPath) -> Factorization:
    word = p.word
    if not word:
        return Empty()
    if word[0] == 'F':
        return Flat(MotzkinPath(word[1:]))
    height = 0
    for i, ch in enumerate(word):
        height += _DELTA[ch]
        if height == 0:
            return Arch(MotzkinPath(word[1:i]), MotzkinPath(word[i + 1:]))
    raise UnbalancedPath(height)


@dataclass(frozen=True)
class AllFlat:
    k: int

    def reassemble(self) -> MotzkinPath:
        return MotzkinPath.flats(self.k)


@dataclass(frozen=True)
class Framed:
    """F^a · s · F^b with s strict (starts U, ends D)."""
    a: int
    s: MotzkinPath
    b: int

    def reassemble(self) -> MotzkinPath:
        return MotzkinPath('F' * self.a + self.s.word + 'F' * self.b)


StrictFactorization = Union[AllFlat, Framed]


def strict_factor(segment: Union[MotzkinPath, str], require_leading_flat: bool = False) -> StrictFactorization:
    """Split a balanced segment into F^a · s · F^b, s spanning the first to the last non-F step."""
    word = segment.word if isinstance(segment, MotzkinPath) else str(segment)
    core = word.strip('F')
    if not core:
        return AllFlat(len(word))
    a = len(word) - len(word.lstrip('F'))
    b = len(word) - len(word.rstrip('F'))
    if require_leading_flat and a == 0:
        raise MissingLeadingFlat(word)
    return Framed(a, MotzkinPath(core), b)


# --------------- Patterns and statistics ---------------

PatternLike = Union[Pattern, str]


def count_pattern(p: MotzkinPath, pattern: PatternLike) -> int:
    """Number of (overlapping) occurrences of pattern as consecutive steps."""
    pat = pattern.value if isinstance(pattern, Pattern) else Pattern.parse(pattern).value
    word = p.word
    return sum(1 for i in range(len(word) - len(pat) + 1) if word.startswith(pat, i))


def avoids(p: MotzkinPath, patterns: Iterable[PatternLike]) -> bool:
    return all(count_pattern(p, q) == 0 for q in patterns)


def parse_patterns(text: str) -> FrozenSet[Pattern]:
    """Parse a comma separated pattern list such as "UU,DD"; blank means no pattern."""
    items = [t for t in (text or '').replace(' ', '').split(',') if t]
    return frozenset(Pattern.parse(t) for t in items)


@dataclass(frozen=True)
class PathStatistics:
    """Pattern counts and positional statistics of one path.

    The tree side (see trees.tree_stats) leaves the path-only fields
    (ufu, low_peaks, final_descent, mpl) unset.
    """
    initial_flats: int
    doublerises: int
    peaks: int
    valleys: int
    doublefalls: int
    ground_returns: int
    first_peak_plateau_height: Optional[int]
    plateau_lengths: Tuple[int, ...]
    ufu: Optional[int] = None
    low_peaks: Optional[int] = None
    final_descent: Optional[int] = None
    mpl: Optional[int] = None

    TABLE_FIELDS = (
        'initial_flats', 'doublerises', 'peaks', 'valleys', 'doublefalls',
        'ground_returns', 'first_peak_plateau_height', 'plateau_lengths',
    )

    @property
    def mpl_counting_peaks(self) -> int:
        """Minimum plateau length when every peak counts as a plateau of length 0."""
        if self.peaks:
            return 0
        return min(self.plateau_lengths) if self.plateau_lengths else 0

    def table_view(self) -> Tuple[object, ...]:
        return tuple(getattr(self, name) for name in self.TABLE_FIELDS)

    def to_record(self) -> dict:
        return {
            'initial_flats': self.initial_flats,
            'uu': self.doublerises,
            'ud': self.peaks,
            'du': self.valleys,
            'dd': self.doublefalls,
            'ufu': self.ufu,
            'low_peaks': self.low_peaks,
            'final_descent': self.final_descent,
            'ground_returns': self.ground_returns,
            'first_height': self.first_peak_plateau_height,
            'plateaus': list(self.plateau_lengths),
            'mpl': self.mpl,
        }


def _plateaus(word: str) -> Tuple[int, ...]:
    if 'U' not in word:
        return (len(word),)
    out: List[int] = []
    i = 0
    n = len(word)
    while i < n:
        if word[i] != 'F':
            i += 1
            continue
        j = i
        while j < n and word[j] == 'F':
            j += 1
        if i > 0 and word[i - 1] == 'U' and j < n and word[j] == 'D':
            out.append(j - i)
        i = j
    return tuple(out)


def statistics(p: MotzkinPath) -> PathStatistics:
    word = p.word
    heights = p.heights()
    plateaus = _plateaus(word)
    first_down = word.find('D')
    first_height = 0 if first_down < 0 else word.count('U', 0, first_down)
    low_peaks = sum(
        1 for i in range(len(word) - 1)
        if word[i] == 'U' and word[i + 1] == 'D' and heights[i + 1] == 0
    )
    return PathStatistics(
        initial_flats=len(word) - len(word.lstrip('F')),
        doublerises=count_pattern(p, Pattern.UU),
        peaks=count_pattern(p, Pattern.UD),
        valleys=count_pattern(p, Pattern.DU),
        doublefalls=count_pattern(p, Pattern.DD),
        ground_returns=sum(1 for ch, h in zip(word, heights) if ch == 'D' and h == 0),
        first_peak_plateau_height=first_height,
        plateau_lengths=plateaus,
        ufu=count_pattern(p, Pattern.UFU),
        low_peaks=low_peaks,
        final_descent=len(word) - len(word.rstrip('D')),
        mpl=min(plateaus) if plateaus else 0,
    )


# --------------- Rendering ---------------

_GLYPH = {'U': '/', 'F': '-', 'D': '\\'}


def render_ascii(p: MotzkinPath) -> str:
    """Plot the height profile, one column per step, highest row first.

    Output is plain ASCII: U is '/', D is '\\' and F is '-' (hyphen-minus, not
    U+2212). A step is drawn in the row of its higher endpoint, so U F D sits on
    row 1 as "/-\\" above an empty ground row.
    """
    word = p.word
    rows: List[int] = []
    height = 0
    for ch in word:
        if ch == 'U':
            height += 1
            rows.append(height)
        elif ch == 'D':
            rows.append(height)
            height -= 1
        else:
            rows.append(height)
    top = max(rows, default=0)
    grid = [[' '] * len(word) for _ in range(top + 1)]
    for col, (ch, row) in enumerate(zip(word, rows)):
        grid[top - row][col] = _GLYPH[ch]
    return '\n'.join(''.join(line) for line in grid)
