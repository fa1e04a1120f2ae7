#!/usr/bin/env python3
"""
Main entry point for SALHI
"""

from salhi.cli import main

if __name__ == "__main__":
    main()
