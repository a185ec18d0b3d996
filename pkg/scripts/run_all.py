"""Run the acceptance suite, then the full test suite, and summarise.

    python scripts/run_all.py [--quick]
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="acceptance criteria only")
    args = ap.parse_args()
    cmds = [[sys.executable, "-m", "pytest", "-q", "tests/test_acceptance.py"]]
    if not args.quick:
        cmds.append([sys.executable, "-m", "pytest", "-q", "--ignore=tests/test_acceptance.py"])
    code = 0
    for cmd in cmds:
        print("$ " + " ".join(cmd[1:]), flush=True)
        code = max(code, subprocess.call(cmd, cwd=ROOT))
    sys.exit(code)


if __name__ == "__main__":
    main()
