#!/usr/bin/env python3
"""Main entry point for jadm-bcd.

Run with: python -m jadm_bcd solve --problem problem.json
"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
