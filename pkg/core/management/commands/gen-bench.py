"""`gen-bench`, the hyphenated spelling of gen_bench"""
from .gen_bench import Command  # noqa: F401
