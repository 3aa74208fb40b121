"""
monopiped - integer monoclinic parallelepipeds
Main application entry point: python main.py <command> ...
"""

import sys

from cli.main import run

if __name__ == "__main__":
    sys.exit(run())
