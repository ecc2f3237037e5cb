#!/usr/bin/env python
"""Compatibilidade: encaminha execuções para `cli.main`."""

import sys

from cli import main

if __name__ == "__main__":
    sys.exit(main())
