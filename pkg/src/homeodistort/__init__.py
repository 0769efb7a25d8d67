"""Exact PL homeomorphisms of the line, short-word certificates and orbit systems."""

from .pl import PLMap, IntervalUnion, Window, make_pl, identity, affine, compose, invert, support
from .factorization import factorize, verify_factorization
from .distortion import distort, verify_certificate, evaluate_word, fisher_word, Word

__version__ = "0.1.0"

__all__ = [
    "PLMap",
    "IntervalUnion",
    "Window",
    "make_pl",
    "identity",
    "affine",
    "compose",
    "invert",
    "support",
    "factorize",
    "verify_factorization",
    "distort",
    "verify_certificate",
    "evaluate_word",
    "fisher_word",
    "Word",
]
