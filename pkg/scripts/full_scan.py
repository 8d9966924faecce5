"""Scan every registered identity over its declared grid and write one CSV.

    HK_THREADS=8 python3 scripts/full_scan.py [output.csv]
"""

import sys

from hurwitz_kernels.cli import main

if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "scan_all.csv"
    sys.exit(main(["scan", "all", "--format", "csv", "--output", target]))
