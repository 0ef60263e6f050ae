"""Exact rational arithmetic, vectors, and affine functions.

Every quantity in the analysis pipeline is an arbitrary-precision
rational; there is no floating point anywhere.  Rationals are
`fractions.Fraction` values (always in canonical form: positive
denominator, reduced), vectors are plain tuples of rationals, and
affine functions are a coefficient row plus a constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RatVec = tuple[Fraction, ...]

RationalLike = Union[Fraction, int, str]


class DimensionMismatchError(ValueError):
    """Raised when vector or function dimensions do not agree."""


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, "p/q" string, or Fraction to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vec(values: Iterable[RationalLike]) -> RatVec:
    return tuple(rat(v) for v in values)


def vec_add(a: RatVec, b: RatVec) -> RatVec:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dims differ: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: RatVec, b: RatVec) -> RatVec:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dims differ: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a: RatVec, k: Fraction) -> RatVec:
    return tuple(k * x for x in a)


def vec_dot(a: RatVec, b: RatVec) -> Fraction:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dims differ: {len(a)} vs {len(b)}")
    total = Fraction(0)
    for x, y in zip(a, b):
        total += x * y
    return total


def zero_vec(dim: int) -> RatVec:
    return (Fraction(0),) * dim


@dataclass(frozen=True)
class AffineFunc:
    """An affine function f(v) = coeffs . v + const over `dim` variables."""

    coeffs: RatVec
    const: Fraction = Fraction(0)

    @staticmethod
    def make(coeffs: Iterable[RationalLike], const: RationalLike = 0) -> "AffineFunc":
        return AffineFunc(vec(coeffs), rat(const))

    @staticmethod
    def constant(dim: int, const: RationalLike) -> "AffineFunc":
        return AffineFunc(zero_vec(dim), rat(const))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, point: Sequence[RationalLike]) -> Fraction:
        return eval_affine(self, vec(point))

    def __add__(self, other: "AffineFunc") -> "AffineFunc":
        return AffineFunc(vec_add(self.coeffs, other.coeffs), self.const + other.const)

    def __sub__(self, other: "AffineFunc") -> "AffineFunc":
        return AffineFunc(vec_sub(self.coeffs, other.coeffs), self.const - other.const)

    def __neg__(self) -> "AffineFunc":
        return self.scale(Fraction(-1))

    def scale(self, k: RationalLike) -> "AffineFunc":
        k = rat(k)
        return AffineFunc(vec_scale(self.coeffs, k), k * self.const)

    def shift(self, c: RationalLike) -> "AffineFunc":
        return AffineFunc(self.coeffs, self.const + rat(c))

    def is_zero(self) -> bool:
        return self.const == 0 and all(c == 0 for c in self.coeffs)


def eval_affine(f: AffineFunc, x: RatVec) -> Fraction:
    """Evaluate f at x exactly."""
    if f.dim != len(x):
        raise DimensionMismatchError(f"function dim {f.dim} vs point dim {len(x)}")
    return vec_dot(f.coeffs, x) + f.const


def delta(f: AffineFunc, n: int | None = None) -> AffineFunc:
    """Pre/post difference of f over doubled variables.

    For f over n variables, returns g over 2n variables with
    g(x, x') = f(x) - f(x'); the constant term cancels.
    """
    if n is None:
        n = f.dim
    if f.dim != n:
        raise DimensionMismatchError(f"function dim {f.dim} vs declared n={n}")
    return AffineFunc(f.coeffs + vec_scale(f.coeffs, Fraction(-1)), Fraction(0))


def embed_pre(f: AffineFunc, n: int | None = None) -> AffineFunc:
    """Lift f over n variables to 2n variables, reading the unprimed half."""
    if n is None:
        n = f.dim
    if f.dim != n:
        raise DimensionMismatchError(f"function dim {f.dim} vs declared n={n}")
    return AffineFunc(f.coeffs + zero_vec(n), f.const)
