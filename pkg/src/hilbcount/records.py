"""Row type shared by every CLI table and cache payload: one verified count
with its parameters, the predicted value, and the match flag."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath


@dataclass(frozen=True)
class CountRecord:
    """One verified count.  match is |observed - predicted| <= tolerance
    (tolerance 0 for exact identities).  tolerance None marks trend-only
    rows with no finite-M target; their match flag is supplied by the
    producer (e.g. a stability flag)."""

    label: str
    params: dict
    observed: object
    predicted: object
    match: bool
    tolerance: object


def record(label, params, observed, predicted, tolerance=Fraction(0), match=None):
    if match is None:
        if isinstance(observed, (int, Fraction)) and isinstance(predicted, (int, Fraction)):
            match = abs(Fraction(observed) - Fraction(predicted)) <= tolerance
        else:
            match = abs(mpmath.mpf(str(observed)) - mpmath.mpf(str(predicted))) <= tolerance
    return CountRecord(label, dict(params), observed, predicted, match, tolerance)


def fmt_value(v, digits: int = 12) -> str:
    """Token-safe rendering: no commas, no quotes, no spaces."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, str):
        return v
    if isinstance(v, mpmath.mpf) or isinstance(v, float):
        return mpmath.nstr(mpmath.mpf(v), digits)
    raise TypeError(f"cannot format {type(v)!r} for a table")
