"""Allow running the CLI as ``python -m hhrdnet``."""

from .cli import main

main()
