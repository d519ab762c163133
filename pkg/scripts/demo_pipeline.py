#!/usr/bin/env python3
"""Run the full audit pipeline on the two built-in instances and print a
stage-by-stage summary: the n=100 dense cover set with its interval
progression, and the quadratic 4-cycle demo over Q(sqrt(2))."""

import json
import sys
import time

from prodap.harness import demo_instance_file, pipeline


def show(kind: str, seed: int = 0) -> bool:
    t0 = time.perf_counter()
    report = pipeline(demo_instance_file(kind, seed))
    elapsed = time.perf_counter() - t0
    status = "ok" if report["ok"] else "FALSIFIED"
    print(f"=== {kind} (seed {seed}): {status} in {elapsed:.2f}s")
    for stage, data in report["stages"].items():
        line = json.dumps(data, sort_keys=True)
        print(f"  {stage:12s} {line[:110]}")
    for f in report["falsifications"]:
        print(f"  !! {f['message']}")
    return report["ok"]


def main() -> int:
    ok = show("cover100")
    ok = show("quad", seed=0) and ok
    return 0 if ok else 4


if __name__ == "__main__":
    sys.exit(main())
