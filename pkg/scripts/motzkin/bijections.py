"""The five path bijections and the UFU/DD involution.

Each bijection has a recursive form (rewrite rules on the first-return
factorization) and an explicit form (label moves on the Motzkin tree). `Mode`
selects one of them, or both with an equality check.

    b1: M_n -> M_n              b2, b3, b4: M_n(UU) -> M_{n+1}(UD)
    b5: M_n(DU) -> M_{n+1}(UD)  involution: M_n(UU) -> M_n(UU)
"""
from __future__ import annotations

from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

# Support running as a module or as a script
try:
    from .paths import (  # type: ignore
        AllFlat, Arch, MotzkinPath, Pattern, count_pattern, first_return_split, strict_factor,
    )
    from .trees import (  # type: ignore
        Kind, MotzkinTree, NegativeLabel, Side, VertexRef, ROOT, classify, first_leaf, flip,
        left_leaf_correspondence, path_to_tree, right_leaf_correspondence, tree_to_path,
    )
except Exception:  # pragma: no cover - fallback when executed directly
    import sys
    from pathlib import Path as _P
    sys.path.append(str(_P(__file__).parent))
    from paths import (  # type: ignore
        AllFlat, Arch, MotzkinPath, Pattern, count_pattern, first_return_split, strict_factor,
    )
    from trees import (  # type: ignore
        Kind, MotzkinTree, NegativeLabel, Side, VertexRef, ROOT, classify, first_leaf, flip,
        left_leaf_correspondence, path_to_tree, right_leaf_correspondence, tree_to_path,
    )


class BijectionId(str, Enum):
    B1 = '1'
    B2 = '2'
    B3 = '3'
    B4 = '4'
    B5 = '5'
    INVOL = 'invol'


class Mode(str, Enum):
    RECURSIVE = 'recursive'
    EXPLICIT = 'explicit'
    CHECKED = 'checked'


class InvolutionForm(str, Enum):
    SEGMENT = 'segment'
    COMPOSITION = 'composition'


DOMAIN: Dict[BijectionId, FrozenSet[Pattern]] = {
    BijectionId.B1: frozenset(),
    BijectionId.B2: frozenset({Pattern.UU}),
    BijectionId.B3: frozenset({Pattern.UU}),
    BijectionId.B4: frozenset({Pattern.UU}),
    BijectionId.B5: frozenset({Pattern.DU}),
    BijectionId.INVOL: frozenset({Pattern.UU}),
}

CODOMAIN: Dict[BijectionId, FrozenSet[Pattern]] = {
    BijectionId.B1: frozenset(),
    BijectionId.B2: frozenset({Pattern.UD}),
    BijectionId.B3: frozenset({Pattern.UD}),
    BijectionId.B4: frozenset({Pattern.UD}),
    BijectionId.B5: frozenset({Pattern.UD}),
    BijectionId.INVOL: frozenset({Pattern.UU}),
}

# Output length minus input length.
LENGTH_SHIFT: Dict[BijectionId, int] = {
    BijectionId.B1: 0,
    BijectionId.B2: 1,
    BijectionId.B3: 1,
    BijectionId.B4: 1,
    BijectionId.B5: 1,
    BijectionId.INVOL: 0,
}


# --------------- Errors ---------------

class DomainViolation(ValueError):
    def __init__(self, bijection: Union[BijectionId, str], path: str, reason: str):
        self.bijection = BijectionId(bijection)
        self.path = path
        self.reason = reason
        super().__init__(f"bijection {self.bijection.value}: {path!r} {reason}")


class ModeMismatch(RuntimeError):
    """Two computations that must agree produced different paths."""

    def __init__(self, bijection: Union[BijectionId, str], path: str, candidates: Mapping[str, str]):
        self.bijection = BijectionId(bijection)
        self.path = path
        self.candidates = dict(candidates)
        shown = ', '.join(f"{name}={value!r}" for name, value in self.candidates.items())
        super().__init__(f"bijection {self.bijection.value} on {path!r} disagrees: {shown}")


def check_domain(bij: Union[BijectionId, str], p: MotzkinPath) -> None:
    bij = BijectionId(bij)
    for pattern in sorted(DOMAIN[bij], key=lambda q: q.value):
        if count_pattern(p, pattern):
            raise DomainViolation(bij, p.word, f"contains {pattern.value}")


def check_codomain(bij: Union[BijectionId, str], q: MotzkinPath) -> None:
    bij = BijectionId(bij)
    if LENGTH_SHIFT[bij] and len(q) < LENGTH_SHIFT[bij]:
        raise DomainViolation(bij, q.word, "is too short to be an image")
    for pattern in sorted(CODOMAIN[bij], key=lambda r: r.value):
        if count_pattern(q, pattern):
            raise DomainViolation(bij, q.word, f"contains {pattern.value}")


# --------------- Recursive forms ---------------

# A rewrite rule maps a path to its image as a sequence of literal steps and
# subpaths still to be rewritten; `_unfold` drives it with an explicit stack.
Piece = Union[str, MotzkinPath]


def _unfold(p: MotzkinPath, rule: Callable[[MotzkinPath], Sequence[Piece]]) -> MotzkinPath:
    out: List[str] = []
    pending: List[Piece] = [p]
    while pending:
        piece = pending.pop()
        if isinstance(piece, str):
            out.append(piece)
        else:
            pending.extend(reversed(rule(piece)))
    return MotzkinPath(''.join(out))


def _leading_flats(p: MotzkinPath) -> Tuple[int, MotzkinPath]:
    rest = p.word.lstrip('F')
    return len(p.word) - len(rest), MotzkinPath(rest)


def _arch_split(p: MotzkinPath) -> Arch:
    split = first_return_split(p)
    assert isinstance(split, Arch)
    return split


def _b1_rule(p: MotzkinPath) -> Sequence[Piece]:
    k, rest = _leading_flats(p)
    if not rest.word:
        return ['F' * k]
    arch = _arch_split(rest)
    return ['F' * k + 'U', arch.rest, 'D', arch.inside]


def b1_recursive(p: MotzkinPath) -> MotzkinPath:
    """phi(F R) = F phi(R);  phi(U R D S) = U phi(S) D phi(R)."""
    return _unfold(p, _b1_rule)


def _b2_rule(p: MotzkinPath) -> Sequence[Piece]:
    k, rest = _leading_flats(p)
    if not rest.word:
        return ['F' * (k + 1)]
    arch = _arch_split(rest)
    head: List[Piece] = ['F' * k + 'U', arch.rest, 'D']
    inside = strict_factor(arch.inside, require_leading_flat=True)
    if isinstance(inside, AllFlat):
        return head + ['F' * inside.k]
    return head + [MotzkinPath('F' * inside.b + inside.s.word + 'F' * (inside.a - 1))]


def b2_recursive(p: MotzkinPath) -> MotzkinPath:
    """phi(e) = F;  phi(U F^a D R) = U phi(R) D F^a;  phi(U F^a S F^b D R) = U phi(R) D phi(F^b S F^(a-1))."""
    return _unfold(p, _b2_rule)


def _b3_b4_rule(bij: BijectionId, inner_first: bool) -> Callable[[MotzkinPath], Sequence[Piece]]:
    def rule(p: MotzkinPath) -> Sequence[Piece]:
        k, rest = _leading_flats(p)
        if not rest.word:
            return ['F' * (k + 1)]
        arch = _arch_split(rest)
        if not arch.inside.word:
            return ['F' * k + 'U', arch.rest, 'D']
        if arch.inside.word[0] != 'F':
            raise DomainViolation(bij, p.word, "contains UU")
        inner = MotzkinPath(arch.inside.word[1:])
        if inner_first:
            return ['F' * k + 'U', inner, 'D', arch.rest]
        return ['F' * k + 'U', arch.rest, 'D', inner]
    return rule


def b3_recursive(p: MotzkinPath) -> MotzkinPath:
    """phi(e) = F;  phi(U D R) = U phi(R) D;  phi(U F R D S) = U phi(R) D phi(S)."""
    return _unfold(p, _b3_b4_rule(BijectionId.B3, inner_first=True))


def b4_recursive(p: MotzkinPath) -> MotzkinPath:
    """phi(e) = F;  phi(U D R) = U phi(R) D;  phi(U F R D S) = U phi(S) D phi(R)."""
    return _unfold(p, _b3_b4_rule(BijectionId.B4, inner_first=False))


def _b5_rule(p: MotzkinPath) -> Sequence[Piece]:
    k, rest = _leading_flats(p)
    if not rest.word:
        return ['F' * (k + 1)]
    arch = _arch_split(rest)
    head: List[Piece] = ['F' * k + 'U', arch.inside, 'D']
    if not arch.rest.word:
        return head
    if arch.rest.word[0] != 'F':
        raise DomainViolation(BijectionId.B5, p.word, "contains DU")
    return head + [MotzkinPath(arch.rest.word[1:])]


def b5_recursive(p: MotzkinPath) -> MotzkinPath:
    """phi(e) = F;  phi(U R D) = U phi(R) D;  phi(U R D F S) = U phi(R) D phi(S)."""
    return _unfold(p, _b5_rule)


# --------------- Explicit forms (tree label moves) ---------------

def _labels(t: MotzkinTree) -> Dict[VertexRef, int]:
    return {ref: v.label for ref, v in t.vertices()}


def bump_root(t: MotzkinTree, delta: int) -> MotzkinTree:
    return t.relabel({ROOT: t.label + delta})


def bump_first_leaf(t: MotzkinTree, delta: int) -> MotzkinTree:
    """Add `delta` to the first leaf; the trivial tree's root stands in for it."""
    ref = first_leaf(t)
    if ref is None:
        ref = ROOT
    return t.relabel({ref: t.at(ref).label + delta})


def _leaf_node_pairs(t: MotzkinTree) -> List[Tuple[VertexRef, VertexRef]]:
    """Left-leaf correspondence without the (first leaf, root) pair."""
    return [(leaf, node) for leaf, node in left_leaf_correspondence(t).items() if node != ROOT]


def exchange_labels(t: MotzkinTree, pairs: Iterable[Tuple[VertexRef, VertexRef]]) -> MotzkinTree:
    """Swap the labels of each (a, b) pair; pairs must be disjoint."""
    labels = _labels(t)
    out = dict(labels)
    for a, b in pairs:
        out[a], out[b] = labels[b], labels[a]
    return t.relabel(out)


def transfer_tokens(t: MotzkinTree, moves: Iterable[Tuple[VertexRef, VertexRef]]) -> MotzkinTree:
    """Move one token from donor to receiver for each (donor, receiver) pair."""
    labels = _labels(t)
    for donor, receiver in moves:
        labels[donor] -= 1
        labels[receiver] += 1
    negative = [ref for ref, value in labels.items() if value < 0]
    if negative:
        raise NegativeLabel(labels[negative[0]])
    return t.relabel(labels)


def b5_token_step(t: MotzkinTree) -> MotzkinTree:
    """Root gains a token; root and every right node then slide one token to their left leaf."""
    t = bump_root(t, 1)
    if t.is_leaf:
        return t
    correspondence = left_leaf_correspondence(t)
    return transfer_tokens(t, ((node, leaf) for leaf, node in correspondence.items()))


def _b5_token_step_inverse(t: MotzkinTree) -> MotzkinTree:
    if not t.is_leaf:
        t = transfer_tokens(t, left_leaf_correspondence(t).items())
    return bump_root(t, -1)


def b1_explicit(p: MotzkinPath) -> MotzkinPath:
    return tree_to_path(flip(path_to_tree(p)))


def b2_explicit(p: MotzkinPath) -> MotzkinPath:
    """Flip, exchange each non-first left leaf with its right node, then give the first leaf a token.

    The root label (the initial flat count) is unchanged.
    """
    t = flip(path_to_tree(p))
    if not t.is_leaf:
        t = exchange_labels(t, _leaf_node_pairs(t))
    return tree_to_path(bump_first_leaf(t, 1))


def b3_explicit(p: MotzkinPath) -> MotzkinPath:
    t = bump_root(path_to_tree(p), 1)
    if t.is_leaf:
        return tree_to_path(t)
    correspondence = right_leaf_correspondence(t)
    t = transfer_tokens(t, ((node, leaf) for leaf, node in correspondence.items()))
    parents = [ref[:-1] for ref, c in classify(t) if c.is_(Side.LEFT, Kind.LEAF, 0)]
    return tree_to_path(t.swap_children(parents))


def b4_explicit(p: MotzkinPath) -> MotzkinPath:
    return tree_to_path(b5_token_step(flip(path_to_tree(p))))


def b5_explicit(p: MotzkinPath) -> MotzkinPath:
    return tree_to_path(b5_token_step(path_to_tree(p)))


# --------------- Inverses ---------------

def _not_an_image(bij: BijectionId, q: MotzkinPath, exc: Exception) -> DomainViolation:
    return DomainViolation(bij, q.word, f"is not an image ({exc})")


def b2_inverse(q: MotzkinPath) -> MotzkinPath:
    check_codomain(BijectionId.B2, q)
    try:
        t = bump_first_leaf(path_to_tree(q), -1)
    except NegativeLabel as exc:
        raise _not_an_image(BijectionId.B2, q, exc) from exc
    if not t.is_leaf:
        t = exchange_labels(t, _leaf_node_pairs(t))
    return tree_to_path(flip(t))


def b3_inverse(q: MotzkinPath) -> MotzkinPath:
    check_codomain(BijectionId.B3, q)
    t = path_to_tree(q)
    try:
        if not t.is_leaf:
            parents = [ref[:-1] for ref, c in classify(t) if c.is_(Side.RIGHT, Kind.LEAF, 0)]
            t = t.swap_children(parents)
            t = transfer_tokens(t, right_leaf_correspondence(t).items())
        t = bump_root(t, -1)
    except NegativeLabel as exc:
        raise _not_an_image(BijectionId.B3, q, exc) from exc
    return tree_to_path(t)


def b4_inverse(q: MotzkinPath) -> MotzkinPath:
    check_codomain(BijectionId.B4, q)
    try:
        t = _b5_token_step_inverse(path_to_tree(q))
    except NegativeLabel as exc:
        raise _not_an_image(BijectionId.B4, q, exc) from exc
    return tree_to_path(flip(t))


def b5_inverse(q: MotzkinPath) -> MotzkinPath:
    check_codomain(BijectionId.B5, q)
    try:
        t = _b5_token_step_inverse(path_to_tree(q))
    except NegativeLabel as exc:
        raise _not_an_image(BijectionId.B5, q, exc) from exc
    return tree_to_path(t)


def drop_final_flat(q: MotzkinPath) -> MotzkinPath:
    """Delete the final F of a b3 image; lands in M_n(UD) when p had no low peaks."""
    if not q.word.endswith('F'):
        raise DomainViolation(BijectionId.B3, q.word, "does not end with F")
    return MotzkinPath(q.word[:-1])


# --------------- Involution ---------------

SegmentRule = Callable[[int, int], Tuple[int, int]]


def corrected_segment_rule(a: int, b: int) -> Tuple[int, int]:
    """F^a S F^b -> F^(b+1) S F^(a-1)."""
    return b + 1, a - 1


def literal_segment_rule(a: int, b: int) -> Tuple[int, int]:
    """F^a S F^b -> F^b S F^(a-1); loses a flatstep, kept as a negative control."""
    return b, a - 1


def critical_upsteps(p: MotzkinPath) -> List[int]:
    """Positions of upsteps immediately followed by a flatstep."""
    w = p.word
    return [i for i in range(len(w) - 1) if w[i] == 'U' and w[i + 1] == 'F']


def _matching_down(steps: Sequence[Tuple[int, str]], start: int) -> int:
    height = 0
    for j in range(start, len(steps)):
        ch = steps[j][1]
        height += 1 if ch == 'U' else -1 if ch == 'D' else 0
        if height == 0:
            return j
    raise ValueError(f"upstep at {start} has no matching downstep")


def involution_segment(p: MotzkinPath, rule: SegmentRule = corrected_segment_rule,
                       order: Optional[Sequence[int]] = None) -> MotzkinPath:
    """Rewrite the segment under every critical upstep with `rule`.

    `order` lists the critical upstep positions of `p` in processing order
    (left to right by default). Steps keep their identity while segments are
    rearranged, so each upstep is found again wherever earlier rewrites moved it.
    """
    critical = critical_upsteps(p)
    if order is None:
        order = critical
    elif sorted(order) != critical:
        raise ValueError(f"order {list(order)} is not a permutation of critical upsteps {critical}")
    steps: List[Tuple[int, str]] = list(enumerate(p.word))
    for up_id in order:
        i = next(idx for idx, (sid, _) in enumerate(steps) if sid == up_id)
        j = _matching_down(steps, i)
        segment = steps[i + 1:j]
        word = ''.join(ch for _, ch in segment)
        core = word.strip('F')
        if not core:
            continue
        a = len(word) - len(word.lstrip('F'))
        b = len(word) - len(word.rstrip('F'))
        new_a, new_b = rule(a, b)
        flats = segment[:a] + segment[len(segment) - b:]
        middle = segment[a:len(segment) - b]
        # flatsteps are interchangeable; extra ones get fresh ids past the input
        while len(flats) < new_a + new_b:
            flats.append((len(p.word) + len(flats), 'F'))
        flats = flats[:new_a + new_b]
        steps[i + 1:j] = flats[:new_a] + middle + flats[new_a:]
    return MotzkinPath(''.join(ch for _, ch in steps))


def involution_composition(p: MotzkinPath) -> MotzkinPath:
    return b2_inverse(b4_explicit(p))


def involution(p: MotzkinPath, form: Union[InvolutionForm, str] = InvolutionForm.SEGMENT) -> MotzkinPath:
    check_domain(BijectionId.INVOL, p)
    if InvolutionForm(form) is InvolutionForm.COMPOSITION:
        return involution_composition(p)
    return involution_segment(p)


# --------------- Dispatch ---------------

RECURSIVE: Dict[BijectionId, Callable[[MotzkinPath], MotzkinPath]] = {
    BijectionId.B1: b1_recursive,
    BijectionId.B2: b2_recursive,
    BijectionId.B3: b3_recursive,
    BijectionId.B4: b4_recursive,
    BijectionId.B5: b5_recursive,
    BijectionId.INVOL: involution_composition,
}

EXPLICIT: Dict[BijectionId, Callable[[MotzkinPath], MotzkinPath]] = {
    BijectionId.B1: b1_explicit,
    BijectionId.B2: b2_explicit,
    BijectionId.B3: b3_explicit,
    BijectionId.B4: b4_explicit,
    BijectionId.B5: b5_explicit,
    BijectionId.INVOL: involution_segment,
}

INVERSE: Dict[BijectionId, Callable[[MotzkinPath], MotzkinPath]] = {
    BijectionId.B2: b2_inverse,
    BijectionId.B3: b3_inverse,
    BijectionId.B4: b4_inverse,
    BijectionId.B5: b5_inverse,
}


def _candidate_names(bij: BijectionId) -> Tuple[str, str]:
    if bij is BijectionId.INVOL:
        return InvolutionForm.COMPOSITION.value, InvolutionForm.SEGMENT.value
    return Mode.RECURSIVE.value, Mode.EXPLICIT.value


def apply(bij: Union[BijectionId, str], p: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    """Apply a bijection; for the involution, recursive means the composition form."""
    bij, mode = BijectionId(bij), Mode(mode)
    check_domain(bij, p)
    if mode is Mode.RECURSIVE:
        return RECURSIVE[bij](p)
    if mode is Mode.EXPLICIT:
        return EXPLICIT[bij](p)
    first, second = RECURSIVE[bij](p), EXPLICIT[bij](p)
    if first != second:
        names = _candidate_names(bij)
        raise ModeMismatch(bij, p.word, {names[0]: first.word, names[1]: second.word})
    return second


def invert(bij: Union[BijectionId, str], q: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    """Inverse image of q; in checked mode the result is mapped forward again and must give q."""
    bij, mode = BijectionId(bij), Mode(mode)
    if bij not in INVERSE:
        return apply(bij, q, mode)
    p = INVERSE[bij](q)
    if mode is Mode.CHECKED:
        forward = apply(bij, p, Mode.CHECKED)
        if forward != q:
            raise ModeMismatch(bij, q.word, {'input': q.word, 'inverse then forward': forward.word})
    return p


def b1(p: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    return apply(BijectionId.B1, p, mode)


def b2(p: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    return apply(BijectionId.B2, p, mode)


def b3(p: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    return apply(BijectionId.B3, p, mode)


def b4(p: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    return apply(BijectionId.B4, p, mode)


def b5(p: MotzkinPath, mode: Union[Mode, str] = Mode.CHECKED) -> MotzkinPath:
    return apply(BijectionId.B5, p, mode)
