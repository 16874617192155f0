"""Module entry point: python -m ifatuner."""

from .cli import run

run()
