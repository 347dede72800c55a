"""Write the default JSON and CSV reports into a results directory."""

from __future__ import annotations

import argparse
from pathlib import Path

from ncdirac import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    out = Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    codes = [cli.main(["report", "--out", str(out / f"report.{fmt}"), "--format", fmt, "--seed", str(a.seed)]) for fmt in ("json", "csv")]
    return max(codes)


if __name__ == "__main__":
    raise SystemExit(main())
