"""Exact rational parsing and serialization helpers."""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

DECIMAL_DIGITS = 12


def to_fraction(value) -> Fraction:
    """Convert a numeral to an exact :class:`Fraction`.

    Strings may be integers, decimals (``"0.5"`` is exactly 1/2) or
    ``"a/b"`` fractions. Floats are read through their shortest decimal
    repr, so ``0.1`` becomes 1/10 rather than the nearest binary double.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a numeral: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"non-finite numeral: {value!r}")
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"not a numeral: {value!r}")
    text = value.strip()
    if not text:
        raise ValueError("empty numeral")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid numeral {value!r}") from exc


def fraction_str(x: Fraction) -> str:
    return str(x)


def fraction_decimal(x: Fraction, digits: int = DECIMAL_DIGITS) -> float:
    """Round to ``digits`` significant digits for human-readable output."""
    with localcontext() as ctx:
        ctx.prec = digits
        return float(Decimal(x.numerator) / Decimal(x.denominator))
