import sys

from sfec.cli import run

if __name__ == "__main__":
    sys.exit(run())
