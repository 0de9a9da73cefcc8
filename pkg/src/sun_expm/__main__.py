"""Main entry point for the sun-expm package."""

import sys

from sun_expm.cli import run


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
