"""Run the acceptance checks with wall-clock timings, outside pytest."""
import argparse
import json
from dataclasses import asdict, dataclass, fields

from quotfib.acceptance import TIME_LIMITS, TITLES, AcceptanceConfig, run_check


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    only: tuple = tuple(range(1, 11))
    json_out: str | None = None


def parse() -> tuple[RunConfig, AcceptanceConfig]:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=int, nargs="*", default=list(range(1, 11)))
    p.add_argument("--json-out", default=None)
    for f in fields(AcceptanceConfig):
        if f.name != "seed" and f.type in ("int", int):
            p.add_argument(f"--{f.name.replace('_', '-')}", type=int, default=f.default)
    args = p.parse_args()
    overrides = {f.name: getattr(args, f.name) for f in fields(AcceptanceConfig)
                 if hasattr(args, f.name) and f.name != "seed"}
    return (RunConfig(args.seed, tuple(args.only), args.json_out),
            AcceptanceConfig(seed=args.seed, **overrides))


def main():
    run, cfg = parse()
    rows = []
    for k in run.only:
        entry, elapsed = run_check(k, cfg)
        limit = TIME_LIMITS[k]
        within = limit is None or elapsed < limit
        print(f"{k:2d} {entry['status']:5s} {elapsed:7.2f}s {'' if within else 'OVER LIMIT'} {TITLES[k]}")
        rows.append({"criterion": k, "status": entry["status"], "seconds": round(elapsed, 3),
                     "limit": limit, "detail": entry["detail"]})
    if run.json_out:
        with open(run.json_out, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "runs": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
