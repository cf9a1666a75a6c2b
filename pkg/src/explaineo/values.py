"""Typed values shared by the model language and the rule engine.

Money is fixed-point with two decimals, rounded half-up when a value is
assigned to a money variable. Dates are calendar dates; date arithmetic
works in whole days (date - date yields a day count, date +/- days yields
a date).
"""
from __future__ import annotations

import datetime as dt
from decimal import Decimal, InvalidOperation, ROUND_HALF_UP
from enum import Enum
from typing import Union

Value = Union[bool, int, float, Decimal, dt.date, str]

_CENT = Decimal("0.01")

EQUALITY_OPS = ("=", "!=")
ORDER_OPS = ("<", "<=", ">", ">=")
COMPARATORS = EQUALITY_OPS + ORDER_OPS


class Kind(str, Enum):
    BOOLEAN = "boolean"
    NUMBER = "number"
    MONEY = "money"
    DATE = "date"
    TEXT = "text"
    ENUM = "enum"


#: kinds that support the order comparators < <= > >=
ORDERED_KINDS = frozenset({Kind.NUMBER, Kind.MONEY, Kind.DATE})


def round_money(value: Value) -> Decimal:
    """Convert to a two-decimal Decimal, rounding half-up."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a money amount")
    try:
        return Decimal(str(value)).quantize(_CENT, rounding=ROUND_HALF_UP)
    except InvalidOperation as exc:
        raise ValueError(f"not a money amount: {value!r}") from exc


def matches_kind(value: Value, kind: Kind, domain: tuple[Value, ...] | None = None) -> bool:
    if kind is Kind.BOOLEAN:
        return isinstance(value, bool)
    if kind is Kind.NUMBER:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind is Kind.MONEY:
        return isinstance(value, Decimal)
    if kind is Kind.DATE:
        return isinstance(value, dt.date) and not isinstance(value, dt.datetime)
    if kind is Kind.TEXT:
        return isinstance(value, str)
    if kind is Kind.ENUM:
        return isinstance(value, str) and (domain is None or value in domain)
    raise ValueError(f"unknown kind {kind!r}")


def decode_value(raw: object, kind: Kind, domain: tuple[Value, ...] | None = None) -> Value:
    """Decode a JSON scalar into a typed value for the given kind.

    Raises ValueError when the scalar cannot represent the kind (or, for
    enums, is outside the declared domain).
    """
    if kind is Kind.BOOLEAN:
        if isinstance(raw, bool):
            return raw
    elif kind is Kind.NUMBER:
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            return raw
    elif kind is Kind.MONEY:
        if isinstance(raw, (int, float, str)) and not isinstance(raw, bool):
            return round_money(raw)
    elif kind is Kind.DATE:
        if isinstance(raw, str):
            try:
                return dt.date.fromisoformat(raw)
            except ValueError:
                pass
    elif kind is Kind.TEXT:
        if isinstance(raw, str):
            return raw
    elif kind is Kind.ENUM:
        if isinstance(raw, str):
            if domain is not None and raw not in domain:
                raise ValueError(f"value {raw!r} is not in the enum domain")
            return raw
    raise ValueError(f"cannot read {raw!r} as a {kind.value} value")


def encode_value(value: Value) -> object:
    """Encode a typed value as a JSON scalar (money and dates as strings)."""
    if isinstance(value, bool):
        return value
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, dt.date):
        return value.isoformat()
    return value


def render_value(value: Value) -> str:
    """Human-readable rendering for prose and tables."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, dt.date):
        return value.isoformat()
    return str(value)


def literal_dsl(value: Value) -> str:
    """Render a literal exactly as it is written in model source text."""
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    return render_value(value)


def literal_kind(value: Value) -> Kind:
    if isinstance(value, bool):
        return Kind.BOOLEAN
    if isinstance(value, (int, float)):
        return Kind.NUMBER
    if isinstance(value, Decimal):
        return Kind.MONEY
    if isinstance(value, dt.date):
        return Kind.DATE
    return Kind.TEXT


def kinds_comparable(op: str, left: Kind, right: Kind) -> bool:
    """Whether a comparator may relate values of the two kinds.

    Number and money mix freely; enum values compare as text. Order
    comparators are restricted to number/money/date, and dates only order
    against dates.
    """
    numeric = {Kind.NUMBER, Kind.MONEY}
    textual = {Kind.TEXT, Kind.ENUM}
    if op in EQUALITY_OPS:
        if left == right:
            return True
        return (left in numeric and right in numeric) or (left in textual and right in textual)
    if op in ORDER_OPS:
        if left in numeric and right in numeric:
            return True
        return left is Kind.DATE and right is Kind.DATE
    raise ValueError(f"unknown comparator {op!r}")


def _align(a: Value, b: Value) -> tuple[Value, Value]:
    # Mixed Decimal/float comparisons and arithmetic go through Decimal(str(x))
    # so 0.1 compares equal to Decimal("0.1").
    if isinstance(a, Decimal) and isinstance(b, float):
        return a, Decimal(str(b))
    if isinstance(b, Decimal) and isinstance(a, float):
        return Decimal(str(a)), b
    return a, b


def compare(op: str, left: Value, right: Value) -> bool:
    """Apply a comparator to two values of compatible kinds."""
    left, right = _align(left, right)
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    for value in (left, right):
        if isinstance(value, (bool, str)):
            raise ValueError(f"order comparator {op!r} does not apply to {value!r}")
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise ValueError(f"unknown comparator {op!r}")


def arithmetic(op: str, left: Value, right: Value) -> Value:
    """Apply an arithmetic operator.

    date - date -> whole days; date +/- number -> date (whole days only);
    any money operand makes the result money (full precision here, rounding
    happens at assignment).
    """
    if isinstance(left, bool) or isinstance(right, bool):
        raise ValueError("booleans do not support arithmetic")
    if isinstance(left, str) or isinstance(right, str):
        raise ValueError("text values do not support arithmetic")

    left_date = isinstance(left, dt.date)
    right_date = isinstance(right, dt.date)
    if left_date or right_date:
        if left_date and right_date:
            if op != "-":
                raise ValueError(f"dates only support subtraction, not {op!r}")
            return (left - right).days
        if left_date:
            days = _whole_days(right)
            if op == "+":
                return left + dt.timedelta(days=days)
            if op == "-":
                return left - dt.timedelta(days=days)
            raise ValueError(f"a date cannot be used with {op!r}")
        # number + date is the only commutative form
        if op == "+":
            return right + dt.timedelta(days=_whole_days(left))
        raise ValueError(f"a date cannot be the right operand of {op!r}")

    if isinstance(left, Decimal) or isinstance(right, Decimal):
        left = left if isinstance(left, Decimal) else Decimal(str(left))
        right = right if isinstance(right, Decimal) else Decimal(str(right))

    try:
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if isinstance(left, int) and isinstance(right, int):
                return left / right  # true division: numbers, not ints
            return left / right
    except (ZeroDivisionError, InvalidOperation) as exc:
        raise ValueError("division by zero") from exc
    raise ValueError(f"unknown arithmetic operator {op!r}")


def _whole_days(value: Value) -> int:
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, Decimal) and value == value.to_integral_value():
        return int(value)
    raise ValueError(f"date arithmetic needs a whole number of days, got {value!r}")


def negate(value: Value) -> Value:
    if isinstance(value, bool) or isinstance(value, (str, dt.date)):
        raise ValueError(f"cannot negate {value!r}")
    return -value
