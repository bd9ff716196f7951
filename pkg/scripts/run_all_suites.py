#!/usr/bin/env python3
"""Run every verification suite over the stock contexts and print reports.

The configuration mirrors the acceptance settings (bound 8, 50 samples
per context per suite) but stays adjustable from the command line.
"""

import argparse
import sys

from smonkit import harness


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=8)
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--no-timing", action="store_true")
    parser.add_argument("--format", choices=("text", "records"), default="text")
    args = parser.parse_args()

    contexts = [
        ("kx2/chain3", harness.standard_context("kx2", "chain3")),
        ("chain3/a2", harness.standard_context("chain3", "a2")),
    ]
    failures = 0
    for name in harness.SUITE_NAMES:
        if name == "nakayama":
            cfg = harness.SuiteConfig(
                algebra=harness.nakayama_17_18_18(),
                bound=max(args.bound, 60),
                context_label="kupisch-17-18-18",
            )
            reports = [harness.run_suite(name, cfg)]
        else:
            reports = [
                harness.run_suite(
                    name,
                    harness.SuiteConfig(
                        context=ctx,
                        bound=args.bound,
                        samples=args.samples,
                        seed=args.seed,
                        context_label=label,
                    ),
                )
                for label, ctx in contexts
            ]
        for report in reports:
            if args.format == "records":
                sys.stdout.write(report.to_records())
            else:
                sys.stdout.write(report.to_text(include_timing=not args.no_timing))
                sys.stdout.write("\n")
            failures += report.failures
    print(f"total failures: {failures}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
