"""Support ``python -m leadalloc``."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
