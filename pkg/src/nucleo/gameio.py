"""Parsing and formatting of the game text grammar.

Grammar (UTF-8 text): the first non-comment, non-blank line is

    quota ; w1 w2 ... wn

Tokens are integers, fractions ``p/q`` or decimals.  The quota may also be
a percentage ``58%``, which is resolved at parse time to an exact rational
fraction of the total weight.  Weights additionally accept a run-length
form ``k*w`` meaning ``k`` players of weight ``w``.  Lines starting with
``#`` are comments.
"""

from __future__ import annotations

from fractions import Fraction

from .games import GameError, Representation, representation


class ParseError(GameError):
    pass


def parse_rational(token: str) -> Fraction:
    token = token.strip()
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse rational token {token!r}") from exc


def parse_game(text: str) -> Representation:
    """Parse an inline game string or game file contents."""
    line = None
    for raw in text.splitlines() or [text]:
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            line = stripped
            break
    if line is None:
        raise ParseError("no game line found (only blank lines and comments)")
    if ";" not in line:
        raise ParseError("expected 'quota ; w1 w2 ...' with a ';' separator")
    quota_part, _, weights_part = line.partition(";")
    quota_part = quota_part.strip()
    if not quota_part:
        raise ParseError("missing quota before ';'")

    weights: list[Fraction] = []
    for token in weights_part.split():
        if "*" in token:
            count_str, _, weight_str = token.partition("*")
            try:
                count = int(count_str)
            except ValueError as exc:
                raise ParseError(f"bad run-length count in {token!r}") from exc
            if count < 1:
                raise ParseError(f"run-length count must be >= 1 in {token!r}")
            weights.extend([parse_rational(weight_str)] * count)
        else:
            weights.append(parse_rational(token))
    if not weights:
        raise ParseError("no weights given after ';'")

    if quota_part.endswith("%"):
        share = parse_rational(quota_part[:-1]) / 100
        quota = share * sum(weights, Fraction(0))
    else:
        quota = parse_rational(quota_part)
    return representation(quota, weights)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def format_game(rep: Representation, run_length: bool | None = None) -> str:
    """Render a representation in the game grammar (input player order).

    Run-length encoding is used automatically for games with more than 12
    players; pass ``run_length`` to force either form.
    """
    weights = rep.original_weights
    if run_length is None:
        run_length = rep.n > 12
    parts: list[str] = []
    if run_length:
        i = 0
        while i < len(weights):
            j = i
            while j < len(weights) and weights[j] == weights[i]:
                j += 1
            count = j - i
            if count > 1:
                parts.append(f"{count}*{format_rational(weights[i])}")
            else:
                parts.append(format_rational(weights[i]))
            i = j
    else:
        parts = [format_rational(w) for w in weights]
    return f"{format_rational(rep.quota)} ; " + " ".join(parts)
