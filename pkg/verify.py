#!/usr/bin/env python3
"""
kahler-circles - verification suites for metrics with circular geodesics

Simple usage:
    python verify.py verify geodesic-circles --metric fubini:1 --samples 50
    python verify.py verify family-exterior --out exterior.json
    python verify.py export trajectory --metric fubini:-1 --point 0.2,0,0,0 --velocity 0,1,0,0
"""

import sys
from pathlib import Path

# Add src to path for development
src_path = Path(__file__).parent / "src"
if src_path.exists():
    sys.path.insert(0, str(src_path))

from kahler_circles.cli import app

if __name__ == "__main__":
    app()
