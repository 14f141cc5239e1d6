#!/usr/bin/env python3
"""markovia - Markov property and decay-condition verifier."""

import sys

from markovia.cli import main

if __name__ == "__main__":
    sys.exit(main())
