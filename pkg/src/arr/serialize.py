"""Exact-value serialization shared by the CLI and the tests.

Rationals travel as "p/q" strings (plain "p" for integers); log-extended
numbers as {"rational": "p/q", "logs": {"<prime>": "p/q", ...}}.  Decimal
strings are display annotations only and never feed a computation.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import LogNumber, lognumber_to_decimal


def frac_str(q: Fraction) -> str:
    return str(Fraction(q))


def lognumber_json(x: LogNumber) -> dict:
    return {
        "rational": frac_str(x.rational),
        "logs": {str(p): frac_str(c) for p, c in x.logs},
    }


def lognumber_text(x: LogNumber) -> str:
    return str(x)


def annotate(x: LogNumber, digits: int) -> str:
    return lognumber_to_decimal(x, digits)
