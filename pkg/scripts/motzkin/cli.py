"""Command-line access to the path/tree toolkit.

Data goes to stdout (one record per line); diagnostics go to stderr via utils.log.
Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal
consistency failure, 130 interrupted.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

# Support running as a module or as a script
try:
    from .paths import InvalidPattern, PathError, parse_path, parse_patterns, render_ascii, statistics  # type: ignore
    from .trees import TreeError, format_tree, parse_tree, path_to_tree, tree_to_path  # type: ignore
    from .bijections import BijectionId, DomainViolation, Mode, ModeMismatch, apply, invert  # type: ignore
    from .enumeration import ClassSpec, all_avoiding, count_avoiding  # type: ignore
    from .verify import CheckId, SUITE_ALL, VerificationReport, run_all  # type: ignore
    from .config import ConfigError, Settings, load_params, resolve_settings  # type: ignore
    from .utils import json_line, log, set_quiet  # type: ignore
except Exception:  # pragma: no cover - fallback when executed directly
    sys.path.append(str(Path(__file__).parent))
    from paths import InvalidPattern, PathError, parse_path, parse_patterns, render_ascii, statistics  # type: ignore
    from trees import TreeError, format_tree, parse_tree, path_to_tree, tree_to_path  # type: ignore
    from bijections import BijectionId, DomainViolation, Mode, ModeMismatch, apply, invert  # type: ignore
    from enumeration import ClassSpec, all_avoiding, count_avoiding  # type: ignore
    from verify import CheckId, SUITE_ALL, VerificationReport, run_all  # type: ignore
    from config import ConfigError, Settings, load_params, resolve_settings  # type: ignore
    from utils import json_line, log, set_quiet  # type: ignore

ROOT = Path(__file__).resolve().parents[2]
PARAMS = ROOT / 'params.yaml'

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3
EXIT_INTERRUPTED = 130

_FORMATS = ['plain', 'json']


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='motzkin', description='Motzkin paths, trees and their bijections')
    ap.add_argument('--params', type=Path, default=PARAMS, help='Alternative params.yaml (default: repo params.yaml)')
    ap.add_argument('--quiet', action='store_true', default=None, help='Only print warnings and errors on stderr')
    sub = ap.add_subparsers(dest='command', required=True)

    p = sub.add_parser('apply', help='Apply (or invert) a bijection to a path')
    p.add_argument('--bij', required=True, choices=[b.value for b in BijectionId])
    p.add_argument('--input', required=True, help='Path word over U/F/D; pass "" for the empty path')
    p.add_argument('--inverse', action='store_true')
    p.add_argument('--mode', choices=[m.value for m in Mode])

    p = sub.add_parser('enumerate', help='List every path of a class in generation order')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--avoid', default='', help='Comma separated patterns, e.g. UU,DD')
    p.add_argument('--format', dest='output_format', choices=_FORMATS)

    p = sub.add_parser('count', help='Class sizes for n = 0..max_n')
    p.add_argument('--max-n', type=int)
    p.add_argument('--avoid', default='')

    p = sub.add_parser('stats', help='Pattern counts and plateau statistics of one path')
    p.add_argument('--input', required=True)
    p.add_argument('--format', dest='output_format', choices=_FORMATS)

    p = sub.add_parser('tree', help='Convert between path words and tree s-expressions')
    direction = p.add_mutually_exclusive_group(required=True)
    direction.add_argument('--to-tree', action='store_true')
    direction.add_argument('--to-path', action='store_true')
    p.add_argument('--input', required=True)

    p = sub.add_parser('verify', help='Run the exhaustive verification suites')
    p.add_argument('--max-n', type=int)
    p.add_argument('--suite', choices=['all'] + [c.value for c in CheckId])
    p.add_argument('--format', dest='output_format', choices=_FORMATS)
    p.add_argument('--workers', type=int)
    p.add_argument('--seed', type=int)

    p = sub.add_parser('render', help='ASCII drawing of a path')
    p.add_argument('--input', required=True)
    return ap


def _emit(line: str) -> None:
    print(line)


def cmd_apply(a: argparse.Namespace, s: Settings) -> int:
    try:
        mode = Mode(s.mode)
    except ValueError:
        log('error', f"unknown mode {s.mode!r} (expected one of {', '.join(m.value for m in Mode)})")
        return EXIT_INPUT
    p = parse_path(a.input)
    if a.inverse:
        q = invert(a.bij, p, mode)
    else:
        q = apply(a.bij, p, mode)
    _emit(q.word)
    return EXIT_OK


def cmd_enumerate(a: argparse.Namespace, s: Settings) -> int:
    if a.n < 0:
        log('error', f"--n must be >= 0, got {a.n}")
        return EXIT_INPUT
    spec = ClassSpec(a.n, parse_patterns(a.avoid))
    for p in all_avoiding(spec):
        if s.output_format == 'json':
            _emit(json_line({'path': p.word, **statistics(p).to_record()}))
        else:
            _emit(p.word)
    return EXIT_OK


def cmd_count(a: argparse.Namespace, s: Settings) -> int:
    avoid = parse_patterns(a.avoid)
    max_n = s.max_n if s.max_n is not None else 12
    if max_n < 0:
        log('error', f"--max-n must be >= 0, got {max_n}")
        return EXIT_INPUT
    for n in range(max_n + 1):
        _emit(f"{n}\t{count_avoiding(ClassSpec(n, avoid))}")
    return EXIT_OK


def _plain_value(v: object) -> str:
    if isinstance(v, list):
        return ','.join(str(x) for x in v)
    return str(v)


def cmd_stats(a: argparse.Namespace, s: Settings) -> int:
    p = parse_path(a.input)
    record = statistics(p).to_record()
    if s.output_format == 'json':
        _emit(json_line({'path': p.word, **record}))
    else:
        for key, value in record.items():
            _emit(f"{key}\t{_plain_value(value)}")
    return EXIT_OK


def cmd_tree(a: argparse.Namespace, s: Settings) -> int:
    if a.to_tree:
        _emit(format_tree(path_to_tree(parse_path(a.input))))
    else:
        _emit(tree_to_path(parse_tree(a.input)).word)
    return EXIT_OK


def _print_report(report: VerificationReport, output_format: str) -> None:
    if output_format == 'json':
        _emit(report.to_json())
        return
    status = 'pass' if report.passed else 'FAIL'
    _emit(f"{report.check.value}\t{status}\tmax_n={report.max_n}\tcases={report.cases}\tfailures={report.failure_count}")
    for f in report.failures:
        _emit(f"  input={f.input!r} expected={f.expected!r} actual={f.actual!r}: {f.detail}")


def cmd_verify(a: argparse.Namespace, s: Settings) -> int:
    max_n = s.max_n if s.max_n is not None else 10
    if max_n < 0:
        log('error', f"--max-n must be >= 0, got {max_n}")
        return EXIT_INPUT
    if s.suite == 'all':
        suite = list(SUITE_ALL)
        caps: Dict[str, int] = dict(s.caps)
    else:
        try:
            check = CheckId(s.suite)
        except ValueError:
            log('error', f"unknown suite {s.suite!r}")
            return EXIT_INPUT
        # a single named check runs at exactly max_n
        suite, caps = [check], {check.value: max_n}
    reports = run_all(
        max_n, caps, suite=suite, workers=s.workers, seed=s.seed, orders=s.orders,
        order_max_n=s.order_max_n, max_failures=s.max_failures,
    )
    for report in reports:
        _print_report(report, s.output_format)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def cmd_render(a: argparse.Namespace, s: Settings) -> int:
    _emit(render_ascii(parse_path(a.input)))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    'apply': cmd_apply,
    'enumerate': cmd_enumerate,
    'count': cmd_count,
    'stats': cmd_stats,
    'tree': cmd_tree,
    'verify': cmd_verify,
    'render': cmd_render,
}


def _overrides(a: argparse.Namespace) -> Dict[str, object]:
    return {
        'mode': getattr(a, 'mode', None),
        'format': getattr(a, 'output_format', None),
        'max_n': getattr(a, 'max_n', None),
        'suite': getattr(a, 'suite', None),
        'workers': getattr(a, 'workers', None),
        'seed': getattr(a, 'seed', None),
        'quiet': a.quiet,
    }


def main(argv: Optional[List[str]] = None) -> int:
    a = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    try:
        params = load_params(a.params)
        settings = resolve_settings(params, a.command, _overrides(a))
    except ConfigError as e:
        log('error', str(e))
        return EXIT_INPUT
    set_quiet(settings.quiet)
    try:
        return COMMANDS[a.command](a, settings)
    except (PathError, TreeError, InvalidPattern, DomainViolation) as e:
        log('error', str(e))
        return EXIT_INPUT
    except ModeMismatch as e:
        log('error', str(e))
        for name, value in e.candidates.items():
            log('error', f"  {name}: {value!r}")
        return EXIT_MISMATCH
    except KeyboardInterrupt:
        log('warn', 'Interrupted.')
        return EXIT_INTERRUPTED


if __name__ == '__main__':
    raise SystemExit(main(sys.argv[1:]))
