#!/usr/bin/env python3
"""Recompute the reference comparison table and the gamma fit in one shot.

Equivalent to `bellpair table1` followed by `bellpair fit --embedded`.
"""
import sys

from bellpair.cli import main

if __name__ == "__main__":
    code = main(["table1"])
    print()
    code |= main(["fit", "--embedded"])
    sys.exit(code)
