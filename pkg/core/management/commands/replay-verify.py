"""`replay-verify`, the hyphenated spelling of replay_verify"""
from .replay_verify import Command  # noqa: F401
