"""Scalar backends: exact rationals (gmpy2 ``mpq``) or doubles with a relative tolerance.

A single instance uses one backend throughout. Every comparison that decides
a metric or isometry property goes through the backend so that the exact
mode compares with ``==`` and the float mode with
``|a - b| <= tol * max(1, |a|, |b|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from gmpy2 import mpq

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Field:
    """Arithmetic backend for one instance.

    ``exact=True`` gives rationals; otherwise floats compared with ``tol``.
    """

    exact: bool
    tol: float = DEFAULT_TOL

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    @property
    def zero(self):
        return mpq(0) if self.exact else 0.0

    @property
    def one(self):
        return mpq(1) if self.exact else 1.0

    def convert(self, x: Any):
        """Convert an int, float, Fraction, mpq, or ``"p/q"`` / decimal string."""
        if self.exact:
            if isinstance(x, float):
                if not math.isfinite(x):
                    raise ValueError(f"non-finite value {x!r}")
                # shortest repr keeps 0.1 as 1/10 rather than its binary expansion
                return mpq(Fraction(repr(x)))
            if isinstance(x, str):
                return mpq(Fraction(x.strip()))
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            return mpq(x)
        if isinstance(x, str):
            return float(Fraction(x.strip()))
        return float(x)

    def scale(self, a, b) -> float:
        return max(1.0, abs(float(a)), abs(float(b)))

    def eq(self, a, b) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tol * self.scale(a, b)

    def le(self, a, b) -> bool:
        if self.exact:
            return a <= b
        return a <= b + self.tol * self.scale(a, b)

    def lt(self, a, b) -> bool:
        return not self.le(b, a)

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def is_pos(self, a) -> bool:
        return self.lt(self.zero, a)

    def mean(self, values) -> Any:
        values = list(values)
        total = sum(values, self.zero)
        return total / len(values)

    def format(self, a) -> str | float:
        """JSON-ready form: ``"p/q"`` strings for rationals, plain floats otherwise."""
        if self.exact:
            a = mpq(a)
            num, den = int(a.numerator), int(a.denominator)
            return str(num) if den == 1 else f"{num}/{den}"
        return float(a)


EXACT = Field(exact=True)
FLOAT = Field(exact=False)


def field_for_mode(mode: str, tol: float = DEFAULT_TOL) -> Field:
    if mode == "exact":
        return EXACT
    if mode == "float":
        return FLOAT if tol == DEFAULT_TOL else Field(exact=False, tol=tol)
    raise ValueError(f"unknown mode {mode!r}; expected 'exact' or 'float'")
