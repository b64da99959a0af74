"""Exhaustive generation and counting of Motzkin path classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Union

# Support running as a module or as a script
try:
    from .paths import MotzkinPath, Pattern  # type: ignore
except Exception:  # pragma: no cover - fallback when executed directly
    import sys
    from pathlib import Path as _P
    sys.path.append(str(_P(__file__).parent))
    from paths import MotzkinPath, Pattern  # type: ignore

# Depth-first branch order; paths come out lexicographic under U < D < F.
GENERATION_ORDER = ('U', 'D', 'F')


@dataclass(frozen=True)
class ClassSpec:
    n: int
    avoid: FrozenSet[Pattern] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"path length must be >= 0, got {self.n}")
        object.__setattr__(self, 'avoid', frozenset(Pattern(p) for p in self.avoid))

    def label(self) -> str:
        if not self.avoid:
            return f"M_{self.n}"
        return f"M_{self.n}({','.join(sorted(p.value for p in self.avoid))})"


def _generate(n: int, forbidden: FrozenSet[str], alphabet: Iterable[str]) -> Iterator[str]:
    letters = tuple(ch for ch in GENERATION_ORDER if ch in alphabet)
    buf: List[str] = []
    # per depth: height reached and index of the next letter to try
    heights = [0]
    tried = [0]
    while tried:
        height = heights[-1]
        if len(buf) == n:
            if height == 0:
                yield ''.join(buf)
            i = len(letters)
        else:
            i = tried[-1]
        advanced = False
        while i < len(letters):
            ch = letters[i]
            i += 1
            h = height + (1 if ch == 'U' else -1 if ch == 'D' else 0)
            if h < 0 or h > n - len(buf) - 1:
                continue
            buf.append(ch)
            # only windows ending at the new step can be new occurrences
            if any(''.join(buf[-len(pat):]) == pat for pat in forbidden if len(buf) >= len(pat)):
                buf.pop()
                continue
            tried[-1] = i
            heights.append(h)
            tried.append(0)
            advanced = True
            break
        if not advanced:
            tried.pop()
            heights.pop()
            if buf:
                buf.pop()


def all_paths(n: int) -> Iterator[MotzkinPath]:
    return all_avoiding(ClassSpec(n))


def all_avoiding(spec: Union[ClassSpec, int], avoid: Iterable[Union[Pattern, str]] = ()) -> Iterator[MotzkinPath]:
    """Lazily yield the class in generation order, pruning forbidden prefixes."""
    if not isinstance(spec, ClassSpec):
        spec = ClassSpec(spec, frozenset(Pattern(p) for p in avoid))
    forbidden = frozenset(p.value for p in spec.avoid)
    for word in _generate(spec.n, forbidden, 'UDF'):
        yield MotzkinPath(word)


def dyck_paths(n: int) -> Iterator[MotzkinPath]:
    """Flat-free Motzkin paths of length n (none when n is odd)."""
    if n < 0:
        raise ValueError(f"path length must be >= 0, got {n}")
    for word in _generate(n, frozenset(), 'UD'):
        yield MotzkinPath(word)


_MOTZKIN: List[int] = [1]


def motzkin_number(n: int) -> int:
    """M_0 = 1, M_{n+1} = M_n + sum_k M_k M_{n-1-k}; exact, filled in bottom-up."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    table = _MOTZKIN
    while len(table) <= n:
        m = len(table) - 1
        table.append(table[m] + sum(table[k] * table[m - 1 - k] for k in range(m)))
    return table[n]


def count_avoiding(spec: Union[ClassSpec, int], avoid: Iterable[Union[Pattern, str]] = ()) -> int:
    return sum(1 for _ in all_avoiding(spec, avoid))
