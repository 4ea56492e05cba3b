"""Compare the numba-compiled kernels with the pure-numpy fallback.

Each path runs in its own interpreter, since the toggle is read at import
time. Usage: ``python3 benchmarks/bench_kernels.py [--lifespan N] [--repeat K]``.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from copkit import _accel
from copkit.predict import AR, Kalman, Schedule
from copkit.sim import GameConfig, Intuitive, SmoothBounce, run_game

lifespan, repeat = int(sys.argv[1]), int(sys.argv[2])
cases = {
    "reactive_walk": GameConfig(lifespan=lifespan, delay_p=5, delay_q=5, seed=1),
    "ar2_bounce": GameConfig(lifespan=lifespan, delay_p=10, delay_q=10, motion=SmoothBounce(1, 1),
                             strategy_p=Intuitive(Schedule.always(AR(2))), seed=1),
    "kalman_bounce": GameConfig(lifespan=lifespan, delay_p=10, delay_q=10, motion=SmoothBounce(1, 1),
                                strategy_p=Intuitive(Schedule.always(Kalman(0.01, 1.0))), seed=1),
}
t0 = time.perf_counter()
run_game(GameConfig(lifespan=10, strategy_p=Intuitive(Schedule.always(AR(2)))))
warmup = time.perf_counter() - t0
out = {"compiled": _accel.USE_NUMBA, "warmup": warmup, "cases": {}}
for name, cfg in cases.items():
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = run_game(cfg)
        best = min(best, time.perf_counter() - t0)
    out["cases"][name] = {"seconds": best, "points": [res.points_p, res.points_q]}
print(json.dumps(out))
"""


def measure(disable: bool, lifespan: int, repeat: int) -> dict:
    env = dict(os.environ)
    env["COPKIT_DISABLE_NUMBA"] = "1" if disable else "0"
    proc = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(lifespan), str(repeat)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lifespan", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    fast = measure(False, args.lifespan, args.repeat)
    plain = measure(True, args.lifespan, args.repeat)
    print(f"lifespan={args.lifespan} repeat={args.repeat} (best of)")
    print(f"numba warmup (compile or cache load): {fast['warmup']:.3f}s")
    print(f"{'case':<16}{'numba s':>10}{'numpy s':>10}{'speedup':>10}  same result")
    for name, f in fast["cases"].items():
        p = plain["cases"][name]
        speedup = p["seconds"] / f["seconds"] if f["seconds"] else float("inf")
        same = f["points"] == p["points"]
        print(f"{name:<16}{f['seconds']:>10.4f}{p['seconds']:>10.4f}{speedup:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
