"""Labeled full binary (Motzkin) trees and their preorder correspondence with paths.

Vertices are addressed by `VertexRef`, the tuple of 'L'/'R' turns taken from the
root; the root is the empty tuple. A non-root interior vertex is a node, a childless
non-root vertex a leaf; the root is neither, so the trivial tree has no leaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Collection, Dict, Iterator, List, Mapping, Optional, Tuple

# Support running as a module or as a script
try:
    from .paths import MotzkinPath, PathStatistics, Arch, first_return_split  # type: ignore
except Exception:  # pragma: no cover - fallback when executed directly
    import sys
    from pathlib import Path as _P
    sys.path.append(str(_P(__file__).parent))
    from paths import MotzkinPath, PathStatistics, Arch, first_return_split  # type: ignore

VertexRef = Tuple[str, ...]
ROOT: VertexRef = ()


class TreeError(ValueError):
    """Base class for malformed or unsuitable trees."""


class TreeSyntaxError(TreeError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class NegativeLabel(TreeError):
    def __init__(self, label: int, position: Optional[int] = None):
        self.label = label
        self.position = position
        where = f" at position {position}" if position is not None else ''
        super().__init__(f"vertex label {label} is negative{where}")


class TrivialTree(TreeError):
    def __init__(self) -> None:
        super().__init__("the root-only tree has no leaves")


@dataclass(frozen=True, eq=False, repr=False)
class MotzkinTree:
    label: int = 0
    children: Optional[Tuple["MotzkinTree", "MotzkinTree"]] = None

    def __post_init__(self) -> None:
        if self.label < 0:
            raise NegativeLabel(self.label)

    @classmethod
    def node(cls, label: int, left: "MotzkinTree", right: "MotzkinTree") -> "MotzkinTree":
        return cls(label, (left, right))

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def left(self) -> "MotzkinTree":
        if self.children is None:
            raise TreeError("a childless vertex has no left child")
        return self.children[0]

    @property
    def right(self) -> "MotzkinTree":
        if self.children is None:
            raise TreeError("a childless vertex has no right child")
        return self.children[1]

    def vertices(self) -> Iterator[Tuple[VertexRef, "MotzkinTree"]]:
        """Yield (ref, subtree) pairs in preorder."""
        stack: List[Tuple[VertexRef, MotzkinTree]] = [(ROOT, self)]
        while stack:
            ref, v = stack.pop()
            yield ref, v
            if v.children is not None:
                stack.append((ref + ('R',), v.children[1]))
                stack.append((ref + ('L',), v.children[0]))

    @property
    def edges(self) -> int:
        return sum(1 for ref, _ in self.vertices() if ref)

    @property
    def weight(self) -> int:
        """#edges + sum of labels; equals the length of the corresponding path."""
        return sum((1 if ref else 0) + v.label for ref, v in self.vertices())

    def at(self, ref: VertexRef) -> "MotzkinTree":
        v = self
        for turn in ref:
            v = v.left if turn == 'L' else v.right
        return v

    def relabel(self, labels: Mapping[VertexRef, int]) -> "MotzkinTree":
        """Copy of the tree with labels replaced at the given addresses."""
        return _rebuild(self, labels, _never)

    def swap_children(self, refs: Collection[VertexRef]) -> "MotzkinTree":
        """Swap the two subtrees of every listed vertex.

        Addresses refer to this tree, and all swaps happen in one pass, so the
        result does not depend on the order of `refs`.
        """
        return _rebuild(self, {}, frozenset(refs).__contains__)

    # compared and hashed by preorder path, which determines the tree
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MotzkinTree):
            return NotImplemented
        return tree_to_path(self) == tree_to_path(other)

    def __hash__(self) -> int:
        return hash(tree_to_path(self).word)

    def __repr__(self) -> str:
        return f"MotzkinTree({format_tree(self)!r})"

    def __str__(self) -> str:
        return format_tree(self)


def _rebuild(t: MotzkinTree, labels: Mapping[VertexRef, int],
             swap: Callable[[VertexRef], bool]) -> MotzkinTree:
    """Postorder copy with new labels and with children swapped where `swap(ref)` holds."""
    built: List[MotzkinTree] = []
    stack: List[Tuple[VertexRef, MotzkinTree, bool]] = [(ROOT, t, False)]
    while stack:
        ref, v, expanded = stack.pop()
        label = labels.get(ref, v.label)
        if v.children is None:
            built.append(MotzkinTree(label))
        elif not expanded:
            stack.append((ref, v, True))
            stack.append((ref + ('R',), v.children[1], False))
            stack.append((ref + ('L',), v.children[0], False))
        else:
            right = built.pop()
            left = built.pop()
            if swap(ref):
                left, right = right, left
            built.append(MotzkinTree(label, (left, right)))
    return built[0]


def _never(ref: VertexRef) -> bool:
    return False


def _always(ref: VertexRef) -> bool:
    return True


TRIVIAL = MotzkinTree(0)


# --------------- Path correspondence ---------------

def path_to_tree(p: MotzkinPath) -> MotzkinTree:
    """F^k·U·L·D·R  <->  root labelled k with subtrees for L and R."""
    word = p.word
    pos = 0
    # open vertices: label and the subtrees finished so far
    open_: List[Tuple[int, List[MotzkinTree]]] = []
    while True:
        start = pos
        while pos < len(word) and word[pos] == 'F':
            pos += 1
        if pos < len(word) and word[pos] == 'U':
            open_.append((pos - start, []))
            pos += 1
            continue
        tree = MotzkinTree(pos - start)
        while open_:
            label, done = open_[-1]
            done.append(tree)
            if len(done) == 1:
                break
            open_.pop()
            tree = MotzkinTree(label, (done[0], done[1]))
        if not open_:
            return tree
        pos += 1  # the D closing the left subtree


def tree_to_path(t: MotzkinTree) -> MotzkinPath:
    out: List[str] = []
    pending: List[object] = [t]
    while pending:
        item = pending.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        assert isinstance(item, MotzkinTree)
        out.append('F' * item.label)
        if item.children is not None:
            pending.extend((item.children[1], 'D', item.children[0], 'U'))
    return MotzkinPath(''.join(out))


def flip(t: MotzkinTree) -> MotzkinTree:
    """Mirror the tree in the vertical; labels stay with their vertices."""
    return _rebuild(t, {}, _always)


def mirror_ref(ref: VertexRef) -> VertexRef:
    """Address of the same vertex after `flip`."""
    return tuple('R' if turn == 'L' else 'L' for turn in ref)


# --------------- Vertex classes ---------------

class Side(str, Enum):
    ROOT = 'root'
    LEFT = 'left'
    RIGHT = 'right'


class Kind(str, Enum):
    NODE = 'node'
    LEAF = 'leaf'


@dataclass(frozen=True)
class VertexClass:
    side: Side
    kind: Optional[Kind]
    label: int

    def is_(self, side: Side, kind: Kind, label: Optional[int] = None) -> bool:
        return self.side == side and self.kind == kind and (label is None or self.label == label)


def _class_of(ref: VertexRef, v: MotzkinTree) -> VertexClass:
    if not ref:
        return VertexClass(Side.ROOT, None, v.label)
    side = Side.LEFT if ref[-1] == 'L' else Side.RIGHT
    return VertexClass(side, Kind.LEAF if v.is_leaf else Kind.NODE, v.label)


def classify(t: MotzkinTree) -> List[Tuple[VertexRef, VertexClass]]:
    return [(ref, _class_of(ref, v)) for ref, v in t.vertices()]


def leftmost_leaf(t: MotzkinTree, ref: VertexRef = ROOT) -> VertexRef:
    v = t.at(ref)
    while v.children is not None:
        ref = ref + ('L',)
        v = v.children[0]
    return ref


def rightmost_leaf(t: MotzkinTree, ref: VertexRef = ROOT) -> VertexRef:
    v = t.at(ref)
    while v.children is not None:
        ref = ref + ('R',)
        v = v.children[1]
    return ref


def first_leaf(t: MotzkinTree) -> Optional[VertexRef]:
    return None if t.is_leaf else leftmost_leaf(t)


def last_leaf(t: MotzkinTree) -> Optional[VertexRef]:
    return None if t.is_leaf else rightmost_leaf(t)


def _up_to_last(ref: VertexRef, turn: str) -> VertexRef:
    for i in range(len(ref) - 1, -1, -1):
        if ref[i] == turn:
            return ref[:i + 1]
    return ROOT


def left_leaf_correspondence(t: MotzkinTree) -> Dict[VertexRef, VertexRef]:
    """{left leaves} -> {right nodes} ∪ {root}.

    A non-first left leaf goes to its nearest ancestor that is a right child; the
    first leaf goes to the root. The inverse takes a right node (or the root) to
    the leftmost leaf of its subtree.
    """
    if t.is_leaf:
        raise TrivialTree()
    return {
        ref: _up_to_last(ref, 'R')
        for ref, v in t.vertices()
        if ref and ref[-1] == 'L' and v.is_leaf
    }


def right_leaf_correspondence(t: MotzkinTree) -> Dict[VertexRef, VertexRef]:
    """{right leaves} -> {left nodes} ∪ {root}; mirror image of the left map."""
    if t.is_leaf:
        raise TrivialTree()
    return {
        ref: _up_to_last(ref, 'L')
        for ref, v in t.vertices()
        if ref and ref[-1] == 'R' and v.is_leaf
    }


def tree_stats(t: MotzkinTree) -> PathStatistics:
    """Path statistics read off the tree alone, one table row per field."""
    if t.is_leaf:
        return PathStatistics(
            initial_flats=t.label, doublerises=0, peaks=0, valleys=0, doublefalls=0,
            ground_returns=0, first_peak_plateau_height=0, plateau_lengths=(t.label,),
        )
    classes = classify(t)
    last = last_leaf(t)
    first = first_leaf(t)
    assert first is not None and last is not None

    def count(side: Side, kind: Kind, label: int) -> int:
        return sum(1 for _, c in classes if c.is_(side, kind, label))

    right_zero_leaves = sum(
        1 for ref, c in classes if c.is_(Side.RIGHT, Kind.LEAF, 0) and ref != last
    )
    plateaus = tuple(
        c.label for _, c in classes if c.is_(Side.LEFT, Kind.LEAF) and c.label > 0
    )
    return PathStatistics(
        initial_flats=t.label,
        doublerises=count(Side.LEFT, Kind.NODE, 0),
        peaks=count(Side.LEFT, Kind.LEAF, 0),
        valleys=count(Side.RIGHT, Kind.NODE, 0),
        doublefalls=right_zero_leaves,
        ground_returns=len(last),
        first_peak_plateau_height=len(first),
        plateau_lengths=plateaus,
    )


# --------------- Serialization ---------------

_DIGITS = frozenset('0123456789')


def format_tree(t: MotzkinTree) -> str:
    out: List[str] = []
    pending: List[object] = [t]
    while pending:
        item = pending.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, MotzkinTree) and item.children is not None:
            out.append(f"({item.label}")
            pending.extend((')', item.children[1], ' ', item.children[0], ' '))
        else:
            assert isinstance(item, MotzkinTree)
            out.append(str(item.label))
    return ''.join(out)


class _TreeParser:
    """Parser for  Tree := Label | "(" Label " " Tree " " Tree ")"  with Label ASCII decimal."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> MotzkinTree:
        # vertices whose closing ")" is still ahead: label and finished subtrees
        open_: List[Tuple[int, List[MotzkinTree]]] = []
        while True:
            if self._peek() == '(':
                self.pos += 1
                label = self._label()
                self._expect(' ')
                open_.append((label, []))
                continue
            tree = MotzkinTree(self._label())
            while open_:
                label, done = open_[-1]
                done.append(tree)
                if len(done) == 1:
                    break
                self._expect(')')
                open_.pop()
                tree = MotzkinTree(label, (done[0], done[1]))
            if not open_:
                break
            self._expect(' ')
        if self.pos != len(self.text):
            raise TreeSyntaxError(f"unexpected {self.text[self.pos]!r} after tree", self.pos)
        return tree

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def _expect(self, ch: str) -> None:
        got = self._peek()
        if got != ch:
            found = repr(got) if got else 'end of input'
            raise TreeSyntaxError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def _digits(self) -> None:
        while self._peek() in _DIGITS:
            self.pos += 1

    def _label(self) -> int:
        start = self.pos
        if self._peek() == '-':
            self.pos += 1
            self._digits()
            if self.pos - start > 1:
                raise NegativeLabel(int(self.text[start:self.pos]), start)
            raise TreeSyntaxError("expected a label", start)
        self._digits()
        if self.pos == start:
            found = repr(self._peek()) if self._peek() else 'end of input'
            raise TreeSyntaxError(f"expected a label, found {found}", start)
        return int(self.text[start:self.pos])


def parse_tree(text: str) -> MotzkinTree:
    return _TreeParser(text).parse()
