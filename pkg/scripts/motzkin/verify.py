"""Exhaustive verification suites.

Each `CheckId` re-runs one family of properties over every path of every length
up to a bound and returns a `VerificationReport`. A failing property is recorded
as data (counterexample, expected, actual, detail); it never raises.
"""
from __future__ import annotations

import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

# Support running as a module or as a script
try:
    from .paths import MotzkinPath, Pattern, PathStatistics, avoids, statistics  # type: ignore
    from .trees import (  # type: ignore
        MotzkinTree, ROOT, Kind, Side, classify, first_leaf, flip, format_tree, leftmost_leaf,
        left_leaf_correspondence, mirror_ref, parse_tree, path_to_tree, right_leaf_correspondence,
        rightmost_leaf, tree_stats, tree_to_path,
    )
    from .bijections import (  # type: ignore
        CODOMAIN, DOMAIN, EXPLICIT, INVERSE, LENGTH_SHIFT, RECURSIVE, BijectionId, SegmentRule,
        b5_token_step, corrected_segment_rule, critical_upsteps, drop_final_flat,
        involution_segment, literal_segment_rule,
    )
    from .enumeration import ClassSpec, all_avoiding, all_paths, count_avoiding, dyck_paths, motzkin_number  # type: ignore
    from .utils import log  # type: ignore
except Exception:  # pragma: no cover - fallback when executed directly
    import sys
    from pathlib import Path as _P
    sys.path.append(str(_P(__file__).parent))
    from paths import MotzkinPath, Pattern, PathStatistics, avoids, statistics  # type: ignore
    from trees import (  # type: ignore
        MotzkinTree, ROOT, Kind, Side, classify, first_leaf, flip, format_tree, leftmost_leaf,
        left_leaf_correspondence, mirror_ref, parse_tree, path_to_tree, right_leaf_correspondence,
        rightmost_leaf, tree_stats, tree_to_path,
    )
    from bijections import (  # type: ignore
        CODOMAIN, DOMAIN, EXPLICIT, INVERSE, LENGTH_SHIFT, RECURSIVE, BijectionId, SegmentRule,
        b5_token_step, corrected_segment_rule, critical_upsteps, drop_final_flat,
        involution_segment, literal_segment_rule,
    )
    from enumeration import ClassSpec, all_avoiding, all_paths, count_avoiding, dyck_paths, motzkin_number  # type: ignore
    from utils import log  # type: ignore


class CheckId(str, Enum):
    ROUNDTRIP = 'roundtrip'
    STATS_TABLE = 'stats-table'
    CORRESPONDENCE = 'correspondence'
    DYCK_FACTS = 'dyck-facts'
    BIJ1 = 'bij1'
    BIJ2 = 'bij2'
    BIJ3 = 'bij3'
    BIJ4 = 'bij4'
    BIJ5 = 'bij5'
    INVOL = 'invol'
    INVOL_LITERAL = 'invol-literal'
    COUNTS = 'counts'


# The literal involution rule is a documented expected failure, so `all` leaves it out.
SUITE_ALL: Tuple[CheckId, ...] = tuple(c for c in CheckId if c is not CheckId.INVOL_LITERAL)

DEFAULT_CAPS: Dict[CheckId, int] = {
    CheckId.ROUNDTRIP: 10,
    CheckId.STATS_TABLE: 10,
    CheckId.CORRESPONDENCE: 10,
    CheckId.DYCK_FACTS: 14,
    CheckId.BIJ1: 12,
    CheckId.BIJ2: 12,
    CheckId.BIJ3: 12,
    CheckId.BIJ4: 12,
    CheckId.BIJ5: 12,
    CheckId.INVOL: 12,
    CheckId.INVOL_LITERAL: 12,
    CheckId.COUNTS: 12,
}

_BIJECTION_CHECKS: Dict[CheckId, BijectionId] = {
    CheckId.BIJ1: BijectionId.B1,
    CheckId.BIJ2: BijectionId.B2,
    CheckId.BIJ3: BijectionId.B3,
    CheckId.BIJ4: BijectionId.B4,
    CheckId.BIJ5: BijectionId.B5,
}


# --------------- Reports ---------------

@dataclass
class Failure:
    input: str
    expected: str
    actual: str
    detail: str

    def to_dict(self) -> Dict[str, str]:
        return {'input': self.input, 'expected': self.expected, 'actual': self.actual, 'detail': self.detail}


@dataclass
class VerificationReport:
    check: CheckId
    n_range: Tuple[int, int]
    cases: int = 0
    failures: List[Failure] = field(default_factory=list)
    elapsed_ms: int = 0
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def max_n(self) -> int:
        return self.n_range[1]

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'check': self.check.value,
            'max_n': self.max_n,
            'cases': self.cases,
            'failures': [f.to_dict() for f in self.failures],
        }
        if include_timing:
            out['elapsed_ms'] = self.elapsed_ms
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), ensure_ascii=False)


class _Recorder:
    """Counts cases and keeps the first `max_failures` failures in input order."""

    def __init__(self, report: VerificationReport, max_failures: int):
        self.report = report
        self.max_failures = max_failures

    def case(self) -> None:
        self.report.cases += 1

    def fail(self, input: str, expected: Any, actual: Any, detail: str) -> None:
        self.report.failure_count += 1
        if len(self.report.failures) < self.max_failures:
            self.report.failures.append(Failure(input, str(expected), str(actual), detail))

    def expect(self, input: str, expected: Any, actual: Any, detail: str) -> bool:
        if expected != actual:
            self.fail(input, expected, actual, detail)
            return False
        return True

    def crashed(self, input: str, exc: Exception) -> None:
        self.fail(input, '', '', f"{type(exc).__name__}: {exc}")


# --------------- Implementations under test ---------------

PathMap = Callable[[MotzkinPath], MotzkinPath]


@dataclass(frozen=True)
class Toolkit:
    """The implementations a check exercises; swap one out to test the harness itself."""
    recursive: Mapping[BijectionId, PathMap]
    explicit: Mapping[BijectionId, PathMap]
    inverse: Mapping[BijectionId, PathMap]
    segment_rule: SegmentRule
    statistics: Callable[[MotzkinPath], PathStatistics]
    tree_stats: Callable[[MotzkinTree], PathStatistics]
    flip: Callable[[MotzkinTree], MotzkinTree]
    path_to_tree: Callable[[MotzkinPath], MotzkinTree]
    tree_to_path: Callable[[MotzkinTree], MotzkinPath]

    @classmethod
    def default(cls) -> "Toolkit":
        return cls(
            recursive=dict(RECURSIVE),
            explicit=dict(EXPLICIT),
            inverse=dict(INVERSE),
            segment_rule=corrected_segment_rule,
            statistics=statistics,
            tree_stats=tree_stats,
            flip=flip,
            path_to_tree=path_to_tree,
            tree_to_path=tree_to_path,
        )

    def with_explicit(self, bij: BijectionId, fn: PathMap) -> "Toolkit":
        return replace(self, explicit={**self.explicit, bij: fn})

    def with_inverse(self, bij: BijectionId, fn: PathMap) -> "Toolkit":
        return replace(self, inverse={**self.inverse, bij: fn})


# --------------- Equidistribution ---------------

@dataclass(frozen=True)
class Equidistribution:
    equal: bool
    hist_a: Counter
    hist_b: Counter


def equidistribution(stat_a: Callable[[MotzkinPath], Hashable], class_a: ClassSpec,
                     stat_b: Callable[[MotzkinPath], Hashable], class_b: ClassSpec) -> Equidistribution:
    hist_a = Counter(stat_a(p) for p in all_avoiding(class_a))
    hist_b = Counter(stat_b(q) for q in all_avoiding(class_b))
    return Equidistribution(hist_a == hist_b, hist_a, hist_b)


def _hist_text(h: Counter) -> str:
    return json.dumps({str(k): v for k, v in sorted(h.items(), key=lambda kv: str(kv[0]))})


# --------------- Checks ---------------

def _check_roundtrip(rec: _Recorder, n: int, tk: Toolkit, **_: Any) -> None:
    for p in all_paths(n):
        rec.case()
        try:
            t = tk.path_to_tree(p)
            rec.expect(p.word, p.word, tk.tree_to_path(t).word, "tree_to_path(path_to_tree(p)) != p")
            rec.expect(p.word, n, t.weight, "tree weight != path length")
            text = format_tree(t)
            rec.expect(p.word, text, format_tree(parse_tree(text)), "tree text does not parse back")
        except Exception as exc:
            rec.crashed(p.word, exc)


def _check_stats_table(rec: _Recorder, n: int, tk: Toolkit, **_: Any) -> None:
    for p in all_paths(n):
        rec.case()
        try:
            on_path = tk.statistics(p)
            on_tree = tk.tree_stats(tk.path_to_tree(p))
            for name in PathStatistics.TABLE_FIELDS:
                rec.expect(p.word, getattr(on_path, name), getattr(on_tree, name), f"{name}: path vs tree")
        except Exception as exc:
            rec.crashed(p.word, exc)


def _check_correspondence(rec: _Recorder, n: int, tk: Toolkit, **_: Any) -> None:
    for p in all_paths(n):
        t = tk.path_to_tree(p)
        if t.is_leaf:
            continue
        rec.case()
        try:
            flipped = tk.flip(t)
            rec.expect(p.word, format_tree(t), format_tree(tk.flip(flipped)), "flip is not an involution")
            classes = dict(classify(t))
            right_nodes = {r for r, c in classes.items() if c.side is Side.RIGHT and c.kind is Kind.NODE}
            left_nodes = {r for r, c in classes.items() if c.side is Side.LEFT and c.kind is Kind.NODE}
            left = left_leaf_correspondence(t)
            right = right_leaf_correspondence(t)
            rec.expect(p.word, sorted(right_nodes | {ROOT}), sorted(left.values()), "left leaves do not cover right nodes and root")
            rec.expect(p.word, sorted(left_nodes | {ROOT}), sorted(right.values()), "right leaves do not cover left nodes and root")
            rec.expect(p.word, ROOT, left.get(first_leaf(t)), "first leaf is not paired with the root")
            for leaf, node in left.items():
                rec.expect(p.word, leaf, leftmost_leaf(t, node), f"left leaf {''.join(leaf)} is not leftmost under its node")
            for leaf, node in right.items():
                rec.expect(p.word, leaf, rightmost_leaf(t, node), f"right leaf {''.join(leaf)} is not rightmost under its node")
            mirrored = {mirror_ref(leaf): mirror_ref(node) for leaf, node in right.items()}
            rec.expect(p.word, mirrored, left_leaf_correspondence(flipped), "flip does not exchange the two correspondences")
        except Exception as exc:
            rec.crashed(p.word, exc)


def _check_dyck_facts(rec: _Recorder, n: int, tk: Toolkit, **_: Any) -> None:
    for q in dyck_paths(n):
        rec.case()
        try:
            s = tk.statistics(q)
            if q.word:
                rec.expect(q.word, s.valleys + 1, s.peaks, "#peaks != #valleys + 1")
            rec.expect(q.word, s.doublefalls, s.doublerises, "#UU != #DD")
        except Exception as exc:
            rec.crashed(q.word, exc)


def _transport(bij: BijectionId, rec: _Recorder, tk: Toolkit, p: MotzkinPath, q: MotzkinPath) -> None:
    sp, sq = tk.statistics(p), tk.statistics(q)
    if bij is BijectionId.B1:
        rec.expect(p.word, (sp.doublerises, sp.valleys), (sq.valleys, sq.doublerises), "(#UU, #DU) not swapped")
    elif bij is BijectionId.B2:
        rec.expect(p.word, sp.doublefalls, sq.valleys, "#DD(p) != #DU(image)")
    elif bij is BijectionId.B3:
        rec.expect(p.word, sp.low_peaks, sq.final_descent, "low peaks(p) != final descent(image)")
        ends_flat = q.word.endswith('F')
        rec.expect(p.word, sp.low_peaks == 0, ends_flat, "image ends in F iff p has no low peaks")
        if ends_flat:
            rec.expect(p.word, True, avoids(drop_final_flat(q), [Pattern.UD]), "dropping the final F leaves a UD")
    elif bij is BijectionId.B4:
        rec.expect(p.word, sp.ufu, sq.valleys, "#UFU(p) != #DU(image)")
        via_b5 = tk.tree_to_path(b5_token_step(tk.flip(tk.path_to_tree(p))))
        rec.expect(p.word, via_b5.word, q.word, "b4 != b5 token step after flip")
    elif bij is BijectionId.B5:
        rec.expect(p.word, sp.mpl_counting_peaks + 1, sq.mpl_counting_peaks, "mpl(image) != mpl(p) + 1")


def _check_bijection(rec: _Recorder, n: int, tk: Toolkit, *, bij: BijectionId, **_: Any) -> None:
    shift = LENGTH_SHIFT[bij]
    image_spec = ClassSpec(n + shift, CODOMAIN[bij])
    images: List[str] = []
    for p in all_avoiding(ClassSpec(n, DOMAIN[bij])):
        rec.case()
        try:
            r = tk.recursive[bij](p)
            q = tk.explicit[bij](p)
            rec.expect(p.word, r.word, q.word, "recursive and explicit forms differ")
            images.append(q.word)
            rec.expect(p.word, n + shift, len(q), "image has the wrong length")
            rec.expect(p.word, True, avoids(q, image_spec.avoid), f"image leaves {image_spec.label()}")
            if bij is BijectionId.B1:
                rec.expect(p.word, p.word, tk.explicit[bij](q).word, "b1 is not an involution")
            else:
                rec.expect(p.word, p.word, tk.inverse[bij](q).word, "inverse(image) != p")
            _transport(bij, rec, tk, p, q)
        except Exception as exc:
            rec.crashed(p.word, exc)
    codomain = [q.word for q in all_avoiding(image_spec)]
    duplicates = sorted(w for w, c in Counter(images).items() if c > 1)
    if duplicates:
        rec.fail(duplicates[0], 1, Counter(images)[duplicates[0]], f"image hit more than once at n={n}")
    missed = sorted(set(codomain) - set(images))
    if missed:
        rec.fail(missed[0], 'in image', 'missed', f"{len(missed)} paths of {image_spec.label()} never hit")
    if bij in tk.inverse:
        for w in codomain:
            q = MotzkinPath(w)
            try:
                rec.expect(w, w, tk.explicit[bij](tk.inverse[bij](q)).word, "image(inverse(q)) != q")
            except Exception as exc:
                rec.crashed(w, exc)
    if bij is BijectionId.B1:
        eq = equidistribution(lambda p: tk.statistics(p).doublerises, ClassSpec(n),
                              lambda p: tk.statistics(p).valleys, ClassSpec(n))
        if not eq.equal:
            rec.fail(f"n={n}", _hist_text(eq.hist_a), _hist_text(eq.hist_b), "#UU and #DU not equidistributed")
    elif bij is BijectionId.B5:
        eq = equidistribution(lambda p: tk.statistics(p).mpl_counting_peaks + 1, ClassSpec(n, DOMAIN[bij]),
                              lambda q: tk.statistics(q).mpl_counting_peaks, image_spec)
        if not eq.equal:
            rec.fail(f"n={n}", _hist_text(eq.hist_a), _hist_text(eq.hist_b), "mpl + 1 not equidistributed")


def _check_involution(rec: _Recorder, n: int, tk: Toolkit, *, rule: SegmentRule, seed: int = 0,
                      orders: int = 20, order_max_n: int = 10, **_: Any) -> None:
    for p in all_avoiding(ClassSpec(n, {Pattern.UU})):
        rec.case()
        try:
            q = involution_segment(p, rule)
            composed = tk.inverse[BijectionId.B2](tk.explicit[BijectionId.B4](p))
            if not rec.expect(p.word, composed.word, q.word, "segment form != inverse(b2) after b4"):
                continue
            rec.expect(p.word, n, len(q), "involution changes the length")
            rec.expect(p.word, True, avoids(q, [Pattern.UU]), "image contains UU")
            rec.expect(p.word, p.word, involution_segment(q, rule).word, "not an involution")
            sp, sq = tk.statistics(p), tk.statistics(q)
            rec.expect(p.word, (sp.ufu, sp.doublefalls), (sq.doublefalls, sq.ufu), "(#UFU, #DD) not exchanged")
            if n <= order_max_n:
                critical = critical_upsteps(p)
                rng = random.Random(f"{seed}:{p.word}")
                for _ in range(orders if len(critical) > 1 else 0):
                    order = critical[:]
                    rng.shuffle(order)
                    got = involution_segment(p, rule, order)
                    if not rec.expect(p.word, q.word, got.word, f"processing order {order} changes the result"):
                        break
        except Exception as exc:
            rec.crashed(p.word, exc)


def _low_peak_free_count(n: int) -> int:
    return sum(1 for p in all_avoiding(ClassSpec(n, {Pattern.UU})) if statistics(p).low_peaks == 0)


_ORDER_KEY = {'U': 0, 'D': 1, 'F': 2}


def _check_counts(rec: _Recorder, n: int, tk: Toolkit, **_: Any) -> None:
    rec.case()
    where = f"n={n}"
    try:
        words = [p.word for p in all_paths(n)]
        rec.expect(where, motzkin_number(n), len(words), "|M_n| != Motzkin number")
        keys = [[_ORDER_KEY[ch] for ch in w] for w in words]
        rec.expect(where, True, all(a < b for a, b in zip(keys, keys[1:])), "paths not strictly increasing in U < D < F order")
        uu = count_avoiding(n, ['UU'])
        rec.expect(where, uu, count_avoiding(n, ['DU']), "|M_n(UU)| != |M_n(DU)|")
        rec.expect(where, uu, count_avoiding(n + 1, ['UD']), "|M_n(UU)| != |M_{n+1}(UD)|")
        rec.expect(where, count_avoiding(n, ['UU', 'DD']), count_avoiding(n + 1, ['UD', 'DU']),
                   "|M_n(UU,DD)| != |M_{n+1}(UD,DU)|")
        rec.expect(where, count_avoiding(n, ['UD']), _low_peak_free_count(n),
                   "low-peak-free M_n(UU) != |M_n(UD)|")
    except Exception as exc:
        rec.crashed(where, exc)


_RUNNERS: Dict[CheckId, Callable[..., None]] = {
    CheckId.ROUNDTRIP: _check_roundtrip,
    CheckId.STATS_TABLE: _check_stats_table,
    CheckId.CORRESPONDENCE: _check_correspondence,
    CheckId.DYCK_FACTS: _check_dyck_facts,
    CheckId.INVOL: _check_involution,
    CheckId.INVOL_LITERAL: _check_involution,
    CheckId.COUNTS: _check_counts,
}


def run_check(check: Union[CheckId, str], max_n: int, toolkit: Optional[Toolkit] = None, *,
              seed: int = 0, orders: int = 20, order_max_n: int = 10,
              max_failures: int = 100) -> VerificationReport:
    """Run one check for every n in 0..max_n."""
    check = CheckId(check)
    if max_n < 0:
        raise ValueError(f"max_n must be >= 0, got {max_n}")
    tk = toolkit or Toolkit.default()
    report = VerificationReport(check, (0, max_n))
    rec = _Recorder(report, max_failures)
    extra: Dict[str, Any] = {'seed': seed, 'orders': orders, 'order_max_n': order_max_n}
    if check in _BIJECTION_CHECKS:
        runner: Callable[..., None] = _check_bijection
        extra['bij'] = _BIJECTION_CHECKS[check]
    else:
        runner = _RUNNERS[check]
        if check is CheckId.INVOL:
            extra['rule'] = tk.segment_rule
        elif check is CheckId.INVOL_LITERAL:
            extra['rule'] = literal_segment_rule
    started = time.perf_counter()
    for n in range(max_n + 1):
        runner(rec, n, tk, **extra)
    report.elapsed_ms = int((time.perf_counter() - started) * 1000)
    return report


def _run_check_task(args: Tuple[CheckId, int, Optional[Toolkit], Dict[str, Any]]) -> VerificationReport:
    check, n, tk, kwargs = args
    return run_check(check, n, tk, **kwargs)


def run_all(max_n: int, caps: Optional[Mapping[Union[CheckId, str], int]] = None, *,
            suite: Optional[Sequence[Union[CheckId, str]]] = None, workers: int = 1,
            toolkit: Optional[Toolkit] = None, seed: int = 0, orders: int = 20,
            order_max_n: int = 10, max_failures: int = 100) -> List[VerificationReport]:
    """Run every check of the suite at min(max_n, cap); reports come back in suite order.

    With workers > 1 the checks run in a process pool, so a custom toolkit must be
    picklable (module-level functions, no lambdas).
    """
    limits = dict(DEFAULT_CAPS)
    for key, value in (caps or {}).items():
        limits[CheckId(key)] = int(value)
    checks = [CheckId(c) for c in (suite or SUITE_ALL)]
    kwargs = {'seed': seed, 'orders': orders, 'order_max_n': order_max_n, 'max_failures': max_failures}
    tasks = [(c, min(max_n, limits.get(c, max_n)), toolkit, kwargs) for c in checks]

    reports: List[VerificationReport] = []
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for report in pool.map(_run_check_task, tasks):
                _log_report(report)
                reports.append(report)
    else:
        for task in tasks:
            report = _run_check_task(task)
            _log_report(report)
            reports.append(report)

    failed = [r.check.value for r in reports if not r.passed]
    total = sum(r.cases for r in reports)
    if failed:
        log('error', f"{len(failed)} of {len(reports)} checks failed: {', '.join(failed)}")
    else:
        log('ok', f"all {len(reports)} checks passed ({total} cases)")
    return reports


def _log_report(report: VerificationReport) -> None:
    status = 'pass' if report.passed else f"{report.failure_count} failures"
    log('info', f"{report.check.value}: n<={report.max_n}, {report.cases} cases, {status}, "
                f"{report.elapsed_ms / 1000:.2f}s")
