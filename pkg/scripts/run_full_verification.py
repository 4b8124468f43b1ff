#!/usr/bin/env python3
"""Run every verification suite and leave a JSON report per suite.

Equivalent to `hypfourier verify --suite all` but split so a failing
suite is easy to re-run in isolation:

    python3 scripts/run_full_verification.py [outdir]
"""

import json
import pathlib
import sys
import time

from hypfourier.cli import RunConfig, report_json, run_suite

SUITES = ("identities", "kernels", "resolvent", "projector", "extension", "smallfreq", "smoothing")


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "verification_reports")
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig()
    all_ok = True
    for suite in SUITES:
        t0 = time.perf_counter()
        records = run_suite(cfg, suite)
        path = outdir / f"{suite}.json"
        path.write_text(report_json(cfg, records), encoding="utf-8")
        ok = all(r.passed for r in records)
        all_ok &= ok
        n_fail = sum(1 for r in records if not r.passed)
        print(
            f"{suite:12s} {len(records):3d} records  "
            f"{'ok' if ok else f'{n_fail} FAILED':12s} {time.perf_counter() - t0:7.1f}s  -> {path}"
        )
        for rec in records:
            if not rec.passed:
                why = rec.error or (
                    f"measured {rec.measured:.4f} vs predicted {rec.predicted:.4f} "
                    f"(tolerance {rec.tolerance})"
                )
                print(f"    FAIL {rec.experiment}: {why}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
