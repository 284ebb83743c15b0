"""Definable subsets of the positive integers and their sizes.

Formulas are built from ``prime``, divisibility ``k | n``, congruences
``n mod m == r`` and comparisons ``n < c`` (and friends), closed under
``!``, ``&`` and ``|``.  The domain is ``{1, 2, 3, ...}``.

Two measures are offered.  Prime-free formulas define eventually periodic
sets, so their natural density is an exact rational read off one period.
Formulas mentioning ``prime`` only get prefix ratios ``count(N) / N``
along a schedule of bounds.
"""

from __future__ import annotations

import enum
import math
import operator
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence, Union

import numpy as np

DEFAULT_MAX_SIEVE = 10**8
DEFAULT_SCHEDULE = (10**3, 10**4, 10**5, 10**6)
DEFAULT_EPSILON = 0.005
_CHUNK = 1 << 20


class ArithError(Exception):
    pass


class DomainError(ArithError, ValueError):
    pass


class BoundTooLarge(ArithError, ValueError):
    pass


class NotEventuallyPeriodic(ArithError):
    pass


# -- formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Prime:
    pass


@dataclass(frozen=True)
class Divides:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"divisor must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Congruence:
    m: int
    r: int

    def __post_init__(self):
        if self.m < 1:
            raise DomainError(f"modulus must be >= 1, got {self.m}")
        if not 0 <= self.r < self.m:
            raise DomainError(f"residue must satisfy 0 <= r < {self.m}, got {self.r}")


_COMPARATORS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Compare:
    op: str
    c: int

    def __post_init__(self):
        if self.op not in _COMPARATORS:
            raise DomainError(f"unknown comparison {self.op!r}")
        if self.c < 0:
            raise DomainError(f"comparison constant must be >= 0, got {self.c}")


@dataclass(frozen=True)
class Not:
    arg: "ArithFormula"


@dataclass(frozen=True)
class And:
    left: "ArithFormula"
    right: "ArithFormula"


@dataclass(frozen=True)
class Or:
    left: "ArithFormula"
    right: "ArithFormula"


ArithFormula = Union[Prime, Divides, Congruence, Compare, Not, And, Or]

_PRECEDENCE = {Or: 1, And: 2}


def render_formula(f: ArithFormula) -> str:
    """Concrete syntax for ``f``; re-parsing the output gives back ``f``."""
    return _render(f)


def _render(f: ArithFormula) -> str:
    if isinstance(f, Prime):
        return "prime"
    if isinstance(f, Divides):
        return f"{f.k} | n"
    if isinstance(f, Congruence):
        return f"n mod {f.m} == {f.r}"
    if isinstance(f, Compare):
        return f"n {f.op} {f.c}"
    if isinstance(f, Not):
        inner = _render(f.arg)
        return f"!({inner})" if isinstance(f.arg, (And, Or, Divides)) else f"!{inner}"
    prec = _PRECEDENCE[type(f)]
    sym = " & " if isinstance(f, And) else " | "
    left = _render(f.left)
    if isinstance(f.left, (And, Or)) and _PRECEDENCE[type(f.left)] < prec:
        left = f"({left})"
    right = _render(f.right)
    # left-associative: an equal-precedence right child needs parentheses
    if isinstance(f.right, (And, Or)) and _PRECEDENCE[type(f.right)] <= prec:
        right = f"({right})"
    return left + sym + right


def atoms(f: ArithFormula) -> Iterable[ArithFormula]:
    if isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, (And, Or)):
        yield from atoms(f.left)
        yield from atoms(f.right)
    else:
        yield f


def mentions_prime(f: ArithFormula) -> bool:
    return any(isinstance(a, Prime) for a in atoms(f))


def period_of(f: ArithFormula) -> int:
    """lcm of every modulus and divisor in ``f`` (1 if there are none)."""
    moduli = [a.m if isinstance(a, Congruence) else a.k
              for a in atoms(f) if isinstance(a, (Congruence, Divides))]
    return reduce(math.lcm, moduli, 1)


def threshold_of(f: ArithFormula) -> int:
    """Past this value every comparison in ``f`` has settled."""
    constants = [a.c for a in atoms(f) if isinstance(a, Compare)]
    return max(constants) + 1 if constants else 0


# -- pointwise semantics ----------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def eval_formula(f: ArithFormula, n: int, prime: Optional[bool] = None) -> bool:
    """Truth of ``f`` at ``n``.

    ``prime`` overrides the primality of ``n``; used to split residue
    classes by whether their members are prime.
    """
    if isinstance(f, Prime):
        return is_prime(n) if prime is None else prime
    if isinstance(f, Divides):
        return n % f.k == 0
    if isinstance(f, Congruence):
        return n % f.m == f.r
    if isinstance(f, Compare):
        return _COMPARATORS[f.op](n, f.c)
    if isinstance(f, Not):
        return not eval_formula(f.arg, n, prime)
    if isinstance(f, And):
        return eval_formula(f.left, n, prime) and eval_formula(f.right, n, prime)
    if isinstance(f, Or):
        return eval_formula(f.left, n, prime) or eval_formula(f.right, n, prime)
    raise TypeError(f"not a formula: {f!r}")


# -- sieve ------------------------------------------------------------------


def max_sieve() -> int:
    raw = os.environ.get("QUANTSCOPE_MAX_SIEVE")
    return int(raw) if raw else DEFAULT_MAX_SIEVE


def _check_bound(bound: int) -> None:
    cap = max_sieve()
    if bound > cap:
        raise BoundTooLarge(
            f"bound {bound} exceeds the sieve cap {cap} (set QUANTSCOPE_MAX_SIEVE)"
        )


_sieve_lock = threading.Lock()
_sieve_flags = np.zeros(0, dtype=bool)


def _eratosthenes(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def prime_flags(limit: int) -> np.ndarray:
    """Read-only boolean array whose index ``i`` says whether ``i`` is prime."""
    global _sieve_flags
    _check_bound(limit)
    with _sieve_lock:
        if len(_sieve_flags) <= limit:
            # grow geometrically so a rising schedule sieves only a few times
            size = max(limit, min(2 * len(_sieve_flags), max_sieve()))
            flags = _eratosthenes(size)
            flags.setflags(write=False)
            _sieve_flags = flags
        return _sieve_flags[: limit + 1]


def sieve_count(N: int) -> int:
    """Number of primes in ``[1, N]``."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    return int(np.count_nonzero(prime_flags(N)))


# -- vectorised counting ----------------------------------------------------


def _mask(f: ArithFormula, ns: np.ndarray, primes: Optional[np.ndarray]) -> np.ndarray:
    if isinstance(f, Prime):
        return primes[ns]
    if isinstance(f, Divides):
        return ns % f.k == 0
    if isinstance(f, Congruence):
        return ns % f.m == f.r
    if isinstance(f, Compare):
        return _COMPARATORS[f.op](ns, f.c)
    if isinstance(f, Not):
        return ~_mask(f.arg, ns, primes)
    if isinstance(f, And):
        return _mask(f.left, ns, primes) & _mask(f.right, ns, primes)
    return _mask(f.left, ns, primes) | _mask(f.right, ns, primes)


def counts_upto(f: ArithFormula, checkpoints: Sequence[int]) -> list[int]:
    """``|{n <= N : f(n)}|`` for each ``N`` in an increasing sequence."""
    if not checkpoints:
        return []
    top = checkpoints[-1]
    primes = prime_flags(top) if mentions_prime(f) else None
    counts = []
    running = 0
    lo = 1
    pending = list(checkpoints)
    while pending:
        hi = min(lo + _CHUNK - 1, pending[0])
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        running += int(np.count_nonzero(_mask(f, ns, primes)))
        if hi == pending[0]:
            counts.append(running)
            pending.pop(0)
        lo = hi + 1
    return counts


def first_witness(f: ArithFormula, bound: int) -> Optional[int]:
    """Smallest ``n <= bound`` satisfying ``f``, if any."""
    primes = prime_flags(bound) if mentions_prime(f) else None
    for lo in range(1, bound + 1, _CHUNK):
        ns = np.arange(lo, min(lo + _CHUNK - 1, bound) + 1, dtype=np.int64)
        hits = np.flatnonzero(_mask(f, ns, primes))
        if len(hits):
            return int(ns[hits[0]])
    return None


# -- density ----------------------------------------------------------------


class DensityKind(enum.Enum):
    EXACT = "exact"
    ESTIMATED = "estimated"
    UNDEFINED = "divergent-or-unknown"


@dataclass(frozen=True)
class DensityRow:
    N: int
    count: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count, self.N)


@dataclass(frozen=True)
class DensityResult:
    kind: DensityKind
    sample_bound: int
    exact: Optional[Fraction] = None
    rows: tuple[DensityRow, ...] = ()
    converged: bool = False
    epsilon: Optional[float] = None

    @property
    def ratios(self) -> list[Fraction]:
        return [row.ratio for row in self.rows]

    @property
    def value(self) -> Optional[Fraction]:
        """The exact density, or the last estimated ratio."""
        if self.kind is DensityKind.EXACT:
            return self.exact
        return self.rows[-1].ratio if self.rows else None


def exact_density(f: ArithFormula) -> DensityResult:
    """Natural density of a prime-free formula.

    Beyond ``threshold_of(f)`` membership depends only on ``n`` modulo
    ``period_of(f)``, so one full period decides the density.
    """
    if mentions_prime(f):
        raise NotEventuallyPeriodic("formula mentions prime; only estimates are available")
    start = threshold_of(f) + 1
    period = period_of(f)
    hits = counts_upto(f, [start - 1, start + period - 1]) if start > 1 else [0, *counts_upto(f, [period])]
    density = Fraction(hits[1] - hits[0], period)
    return DensityResult(DensityKind.EXACT, sample_bound=start + period - 1, exact=density)


def _validate_schedule(schedule: Sequence[int]) -> None:
    if not schedule:
        raise ValueError("schedule must be nonempty")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"schedule must be strictly increasing: {list(schedule)}")
    if schedule[0] < 1:
        raise ValueError("schedule bounds must be >= 1")
    _check_bound(schedule[-1])


def converged(ratios: Sequence[Fraction], epsilon: float) -> bool:
    """True iff the last three ratios pairwise differ by at most ``epsilon``.

    Fewer than three ratios never count as converged.
    """
    if len(ratios) < 3:
        return False
    tail = ratios[-3:]
    return all(abs(a - b) <= Fraction(epsilon) for i, a in enumerate(tail) for b in tail[i + 1 :])


def estimate_density(
    f: ArithFormula,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    epsilon: float = DEFAULT_EPSILON,
) -> DensityResult:
    schedule = list(schedule)
    _validate_schedule(schedule)
    rows = tuple(DensityRow(N, c) for N, c in zip(schedule, counts_upto(f, schedule)))
    return DensityResult(
        DensityKind.ESTIMATED,
        sample_bound=schedule[-1],
        rows=rows,
        converged=converged([r.ratio for r in rows], epsilon),
        epsilon=epsilon,
    )


# -- cardinality ------------------------------------------------------------


class CardinalityKind(enum.Enum):
    FINITE = "finite"
    COUNTABLY_INFINITE = "countably-infinite"
    UNKNOWN_BEYOND_PROBE = "unknown-beyond-probe"


@dataclass(frozen=True)
class CardinalityClass:
    kind: CardinalityKind
    count: Optional[int] = None

    @property
    def infinite(self) -> bool:
        return self.kind is CardinalityKind.COUNTABLY_INFINITE

    def __str__(self) -> str:
        if self.kind is CardinalityKind.FINITE:
            return f"finite({self.count})"
        if self.kind is CardinalityKind.UNKNOWN_BEYOND_PROBE:
            return f"unknown beyond probe ({self.count} found)"
        return "countably infinite"


def cardinality_class(f: ArithFormula, probe_bound: Optional[int] = None) -> CardinalityClass:
    """Decide whether ``f`` defines a finite or an infinite set.

    Past the threshold, each residue class modulo the period holds
    infinitely many composites, and infinitely many primes exactly when the
    residue is coprime to the period (Dirichlet).  So ``f`` is infinite iff
    some class admits a composite member, or a prime member with a coprime
    residue.  Otherwise every member lies at or below
    ``max(threshold, period)`` and is counted directly, provided that range
    fits under ``probe_bound``.
    """
    start = threshold_of(f) + 1
    period = period_of(f)
    has_prime = mentions_prime(f)
    for n in range(start, start + period):
        if eval_formula(f, n, prime=False):
            return CardinalityClass(CardinalityKind.COUNTABLY_INFINITE)
        if has_prime and math.gcd(n, period) == 1 and eval_formula(f, n, prime=True):
            return CardinalityClass(CardinalityKind.COUNTABLY_INFINITE)
    horizon = max(start - 1, period)
    probe = max_sieve() if probe_bound is None else probe_bound
    if horizon > probe:
        return CardinalityClass(
            CardinalityKind.UNKNOWN_BEYOND_PROBE, count=counts_upto(f, [probe])[0] if probe else 0
        )
    return CardinalityClass(CardinalityKind.FINITE, count=counts_upto(f, [horizon])[0] if horizon else 0)
