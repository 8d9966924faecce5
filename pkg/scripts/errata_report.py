"""Write the errata document (markdown and JSON) for every ambiguous reading.

    python3 scripts/errata_report.py [output directory, default ./errata]
"""

import pathlib
import sys

from hurwitz_kernels.cli import main

if __name__ == "__main__":
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "errata")
    out.mkdir(parents=True, exist_ok=True)
    codes = [main(["errata", "--output", str(out / "errata.md")]),
             main(["errata", "--format", "json", "--output", str(out / "errata.json")])]
    print(f"wrote {out / 'errata.md'} and {out / 'errata.json'}")
    sys.exit(max(codes))
