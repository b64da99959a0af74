#!/usr/bin/env python3
"""Entry point: `./master.py <command> [flags]`, settings layered from params.yaml.

Commands: apply, enumerate, count, stats, tree, verify, render
(see `./master.py <command> --help`).
"""
from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).parent
PARAMS = ROOT / 'params.yaml'
sys.path.insert(0, str(ROOT / 'scripts'))

from motzkin.cli import main as cli_main  # noqa: E402


def main(argv: list[str]) -> int:
    if not any(arg == '--params' or arg.startswith('--params=') for arg in argv):
        argv = ['--params', str(PARAMS), *argv]
    try:
        return cli_main(argv)
    except KeyboardInterrupt:
        print('\nInterrupted.', file=sys.stderr)
        return 130


if __name__ == '__main__':
    raise SystemExit(main(sys.argv[1:]))
