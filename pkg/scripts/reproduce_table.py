#!/usr/bin/env python3
"""
Rerun the published table of uniquely folding open chains

Each row sweeps every open HP chain of length n and prints the observed
unique count next to the published one. A folding and its reversal count
as one class for palindromic chains, which is the reading the published
counts use. Rows with n >= HP_LONG_RUN_N are skipped unless --long-run
is given.
"""
import sys
import argparse
import json
from pathlib import Path

# Add parent dir to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from tqdm import tqdm

from src.config import get_settings
from src.survey import sweep
from src.verify import PUBLISHED_UNIQUE


def main():
    parser = argparse.ArgumentParser(
        description='Reproduce the table of open HP chains with a unique optimal folding'
    )
    parser.add_argument('--rows', type=int, nargs='+', default=sorted(PUBLISHED_UNIQUE),
                        help='Chain lengths to run (default: all published rows)')
    parser.add_argument('--workers', type=int, default=None, help='Worker processes (default: HP_WORKERS)')
    parser.add_argument('--checkpoint-dir', type=str, default=None,
                        help='Directory for per-row checkpoints (resumed if present)')
    parser.add_argument('--long-run', action='store_true', help='Include rows with n >= HP_LONG_RUN_N')
    parser.add_argument('--output', type=str, help='Write the rows as JSON to this file')
    parser.add_argument('--isometry-only', action='store_true',
                        help='Count foldings related by chain reversal as separate classes')
    args = parser.parse_args()

    settings = get_settings()
    rows = []
    failed = False

    print(f"{'n':>3} {'unique':>8} {'total':>9} {'percent':>8} {'published':>10}  status")
    for n in args.rows:
        published = PUBLISHED_UNIQUE.get(n)
        if n >= settings.long_run_n and not args.long_run:
            print(f"{n:>3} {'-':>8} {'-':>9} {'-':>8} {published or '-':>10}  skipped (needs --long-run)")
            continue

        checkpoint = None
        if args.checkpoint_dir:
            Path(args.checkpoint_dir).mkdir(parents=True, exist_ok=True)
            suffix = '_iso' if args.isometry_only else ''
            checkpoint = Path(args.checkpoint_dir) / f"open_n{n}{suffix}.ckpt"

        with tqdm(total=2 ** n, unit='chain', desc=f"n={n}", file=sys.stderr, leave=False) as bar:
            record = sweep(
                n,
                'open',
                workers=args.workers,
                checkpoint=checkpoint,
                quotient_chain_automorphisms=not args.isometry_only,
                progress_callback=lambda current, total: bar.update(current - bar.n),
                settings=settings,
            )

        status = 'n/a'
        if published is not None:
            status = 'match' if record.unique_count == published else 'MISMATCH'
            failed = failed or status == 'MISMATCH'
        print(f"{n:>3} {record.unique_count:>8} {record.total_count:>9} "
              f"{record.percentage:>8.3f} {published or '-':>10}  {status}")
        rows.append({**record.to_dict(), 'published': published})

    if args.output:
        with open(args.output, 'w') as f:
            json.dump(rows, f, indent=2)
        print(f"\nRows saved to: {args.output}")

    return 1 if failed else 0


if __name__ == '__main__':
    sys.exit(main())
