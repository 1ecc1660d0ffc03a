#!/usr/bin/env python3
"""Solve the default scenario with every scheme and print the result rows.

Writes out/results.csv plus one trace_<row>.csv per iterative-solver row.
Equivalent CLI: secbeam solve --mode ue
"""

import sys

from secbeam.cli import main

if __name__ == "__main__":
    sys.exit(main(["solve", *sys.argv[1:]]))
