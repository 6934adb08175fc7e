"""Write every JSON schema to docs/schemas/<name>.json."""
import argparse
import json
from pathlib import Path

from quotfib.schemas import SCHEMAS, schema


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "docs" / "schemas"))
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(SCHEMAS):
        (out / f"{name}.json").write_text(json.dumps(schema(name), indent=2, sort_keys=True) + "\n")
        print(out / f"{name}.json")


if __name__ == "__main__":
    main()
