#!/usr/bin/env python3
"""Reproduce the cyclic Nakayama experiment with Kupisch series (17, 18, 18).

Enumerates all 53 indecomposables, certifies the Gorenstein-projective
ones at the requested bound, prints the core summary and the bounded
injective-dimension evidence.
"""

import argparse
import sys

from smonkit import harness


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=60)
    parser.add_argument("--prime", type=int, default=2)
    parser.add_argument("--no-timing", action="store_true")
    args = parser.parse_args()
    algebra = harness.nakayama_17_18_18(p=args.prime)
    cfg = harness.SuiteConfig(algebra=algebra, bound=args.bound, context_label="kupisch-17-18-18")
    report = harness.run_suite("nakayama", cfg)
    sys.stdout.write(report.to_text(include_timing=not args.no_timing))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
