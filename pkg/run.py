#!/usr/bin/env python3
"""
Forest Planning Workbench Runner
Run this script with a subcommand, e.g.

    python run.py plan --scenario scenarios/pine_scaled.json --out out/pine
"""

import sys

def check_requirements():
    """Check if required packages are installed"""
    required_packages = ['numpy', 'pandas', 'psutil']

    missing_packages = []

    for package in required_packages:
        try:
            __import__(package)
        except ImportError:
            missing_packages.append(package)

    if missing_packages:
        print("❌ Missing required packages:", file=sys.stderr)
        for package in missing_packages:
            print(f"   - {package}", file=sys.stderr)
        print("\n🔧 Install missing packages with:", file=sys.stderr)
        print("   pip install -r requirements.txt", file=sys.stderr)
        return False

    return True

if __name__ == "__main__":
    if not check_requirements():
        sys.exit(1)

    from cli import main
    sys.exit(main())
