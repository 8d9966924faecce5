"""Run the acceptance criteria and print one PASS/FAIL line per criterion.

    python3 scripts/run_acceptance.py [extra pytest args]
"""

import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    sys.exit(pytest.main([str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider",
                          *sys.argv[1:]]))
