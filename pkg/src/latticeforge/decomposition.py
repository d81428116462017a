"""Greedy digit decomposition along successive derivatives.

Any ``m >= 0`` is written as ``g(x_0) + g'(x_1) + ... + g^(d-1)(x_{d-1}) + m_d``
with ``g(x) = (2x)^d``, choosing at step ``i`` the largest ``x_i`` with
``g^(i)(x_i) <= m_i``. The same greedy rule is available for any
polynomial whose derivatives are all positive on ``x > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .errors import DomainError, InvariantViolation


@dataclass(frozen=True)
class GreedyDecomposition:
    d: int
    m: int
    xs: tuple[int, ...]
    remainder: int
    trace: tuple[int, ...]

    def check(self, derivative: Callable[[int, int], int], remainder_bound: int) -> list[str]:
        """Return the violated invariants (empty when all hold)."""
        bad = []
        if any(a < b for a, b in zip(self.xs, self.xs[1:])) or (self.xs and self.xs[-1] < 0):
            bad.append("x_0 >= x_1 >= ... >= x_{d-1} >= 0")
        if not 0 <= self.remainder <= remainder_bound:
            bad.append(f"0 <= m_d <= {remainder_bound}")
        if sum(derivative(i, x) for i, x in enumerate(self.xs)) + self.remainder != self.m:
            bad.append("sum identity")
        t = self.trace
        if t[0] != self.m or t[-1] != self.remainder or any(
                t[i] != t[i - 1] - derivative(i - 1, self.xs[i - 1])
                for i in range(1, self.d + 1)):
            bad.append("trace recursion")
        if any(not derivative(i, x) <= t[i] < derivative(i, x + 1)
               for i, x in enumerate(self.xs)):
            bad.append("greedy bracket g^(i)(x_i) <= m_i < g^(i)(x_i + 1)")
        return bad


class DecompositionError(InvariantViolation):
    """The greedy rule broke down; ``trace`` holds the steps taken so far."""

    def __init__(self, message: str, step: int, trace: Sequence[int], xs: Sequence[int]):
        super().__init__(message, {"step": step, "trace": tuple(trace), "xs": tuple(xs)})
        self.step = step
        self.trace = tuple(trace)
        self.xs = tuple(xs)


def g_derivative(d: int, i: int, x: int) -> int:
    """``i``-th derivative of ``(2x)^d`` at ``x``: ``2^d d!/(d-i)! x^(d-i)``."""
    if not 0 <= i <= d:
        raise DomainError(f"derivative order {i} outside [0, {d}]")
    return 2**d * factorial(d) // factorial(d - i) * x ** (d - i)


def remainder_bound(d: int) -> int:
    return 2**d * factorial(d)


def _largest_below(f: Callable[[int], int], target: int) -> int:
    """Largest ``x >= 0`` with ``f(x) <= target`` for increasing ``f``."""
    hi = 1
    while f(hi) <= target:
        hi *= 2
    lo = 0
    # f(lo) <= target < f(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) <= target:
            lo = mid
        else:
            hi = mid
    return lo


def _greedy(d: int, m: int, deriv: Callable[[int, int], int]) -> GreedyDecomposition:
    trace = [m]
    xs: list[int] = []
    mi = m
    for i in range(d):
        if deriv(i, 0) > mi:
            raise DecompositionError(
                f"no x >= 0 with g^({i})(x) <= m_{i} = {mi}", i, trace, xs)
        x = _largest_below(lambda t: deriv(i, t), mi)
        xs.append(x)
        mi -= deriv(i, x)
        trace.append(mi)
    return GreedyDecomposition(d, m, tuple(xs), mi, tuple(trace))


def decompose(d: int, m: int) -> GreedyDecomposition:
    """Greedy decomposition of ``m`` for ``g(x) = (2x)^d``."""
    if d < 2:
        raise DomainError("dimension must be at least 2")
    if m < 0:
        raise DomainError("m must be non-negative")
    return _greedy(d, m, lambda i, x: g_derivative(d, i, x))


class AdmissiblePolynomial:
    """Polynomial of degree ``d`` whose derivatives are positive on ``x > 0``.

    ``coeffs`` are given highest degree first, as ints or Fractions. Every
    derivative must take integer values at integers.
    """

    def __init__(self, coeffs: Sequence[int | Fraction]):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[0] == 0:
            cs.pop(0)
        self.degree = len(cs) - 1
        if self.degree < 1:
            raise DomainError("polynomial must have degree >= 1")
        # non-negative coefficients with positive leading term give
        # g^(i)(x) > 0 on x > 0 for every i
        if cs[0] <= 0 or any(c < 0 for c in cs):
            raise DomainError(f"inadmissible polynomial {coeffs!r}: coefficients must be "
                              "non-negative with a positive leading coefficient")
        self._derivs = [cs]
        for _ in range(self.degree):
            prev = self._derivs[-1]
            n = len(prev) - 1
            self._derivs.append([c * (n - k) for k, c in enumerate(prev[:-1])])
        for i, dv in enumerate(self._derivs):
            for x in range(self.degree - i + 1):
                if _horner(dv, x).denominator != 1:
                    raise DomainError(f"g^({i}) is not integer-valued at integers")
        self.coeffs = tuple(cs)

    def __call__(self, i: int, x: int) -> int:
        if not 0 <= i <= self.degree:
            raise DomainError(f"derivative order {i} outside [0, {self.degree}]")
        return int(_horner(self._derivs[i], x))

    @classmethod
    def parse(cls, text: str) -> "AdmissiblePolynomial":
        """Parse ``"c_k,...,c_0"`` (highest degree first)."""
        return cls([Fraction(t.strip()) for t in text.split(",") if t.strip()])


def _horner(cs: Sequence[Fraction], x: int) -> Fraction:
    acc = Fraction(0)
    for c in cs:
        acc = acc * x + c
    return acc


def decompose_general(g: AdmissiblePolynomial, m: int) -> GreedyDecomposition:
    """Greedy decomposition for an admissible polynomial ``g``.

    Raises ``DecompositionError`` when a step has no admissible ``x_i`` or
    the resulting invariants fail.
    """
    if m < 0:
        raise DomainError("m must be non-negative")
    dec = _greedy(g.degree, m, g)
    bad = dec.check(g, g(g.degree, 0))
    if bad:
        raise DecompositionError("; ".join(bad), g.degree, dec.trace, dec.xs)
    return dec
