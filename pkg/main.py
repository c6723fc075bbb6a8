#!/usr/bin/env python3
"""
qhelper entry point.

Usage: python main.py <entropy|rates|frontier|audit|ri|presets> [options]
"""
import sys

from qhelper.cli import main

if __name__ == "__main__":
    sys.exit(main())
