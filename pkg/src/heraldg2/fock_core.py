"""Truncated two-mode Fock representation of two weak lasers behind a beam splitter.

A single laser of mean photon number ``alpha`` split 50:50 produces, up to a
global factor, the product coherent state with per-arm mean ``alpha/2``.  This
module stores its truncated amplitude table and provides exact application of
annihilation-operator monomials and inner products.

Normalization convention: the global prefactor exp(-alpha/2) of the coherent
state and the truncated-state norm are deliberately omitted from the stored
amplitudes.  Every reported quantity downstream is a ratio in which both
cancel; where a ratio needs the truncated squared norm explicitly (R_cd), it
is supplied by ``inner_product(state, state)``.

All combinatorial factors are computed with exact 64-bit integer factorials,
which is why the truncation order is capped at 20 (20! is the largest
factorial exactly representable in 64 bits).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from math import factorial, isqrt, sqrt

import numpy as np

#: Largest admissible truncation order (20! must fit exactly in 64-bit ints).
MAX_TRUNCATION = 20


class ConfigurationError(ValueError):
    """Raised for invalid physical or numerical configuration parameters."""


class UsageError(ValueError):
    """Raised when an operation is invoked outside its contract."""


@dataclass(frozen=True)
class TruncationOrder:
    """Maximum total photon number retained from the coherent-state expansion."""

    P: int

    def __post_init__(self) -> None:
        if not isinstance(self.P, int) or not (1 <= self.P <= MAX_TRUNCATION):
            raise ConfigurationError(
                f"truncation order must be an integer in [1, {MAX_TRUNCATION}], got {self.P!r}"
            )


@cache
def falling_factorial(m: int, j: int) -> int:
    """Exact integer m!/(m-j)! (zero when j > m)."""
    if j > m:
        return 0
    out = 1
    for i in range(m - j + 1, m + 1):
        out *= i
    return out


@dataclass(frozen=True)
class OperatorMonomial:
    """A single term c * a^j b^k with a detection time attached to each factor.

    ``a_times`` and ``b_times`` list the detection times picked up by each
    annihilation factor on the a-beam and b-beam respectively; their lengths
    are exactly ``j`` and ``k``.
    """

    j: int
    k: int
    coeff: complex
    a_times: tuple[float, ...] = ()
    b_times: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.j < 0 or self.k < 0:
            raise UsageError("monomial powers must be nonnegative")
        if len(self.a_times) != self.j or len(self.b_times) != self.k:
            raise UsageError(
                "time-tag lists must match the annihilation powers "
                f"(j={self.j}, k={self.k}, got {len(self.a_times)}/{len(self.b_times)} tags)"
            )


@dataclass(frozen=True, eq=False)
class AmplitudeTable:
    """Two-mode amplitude table amp[m, n] over occupations with m, n <= P."""

    P: int
    amp: np.ndarray  # complex, shape (P+1, P+1)

    def __post_init__(self) -> None:
        if self.amp.shape != (self.P + 1, self.P + 1):
            raise UsageError("amplitude table shape must be (P+1, P+1)")


@dataclass(frozen=True, eq=False)
class JointFockState(AmplitudeTable):
    """Truncated (unnormalized) two-mode coherent state after the first BS.

    amp[m, n] = (alpha/2)^((m+n)/2) / sqrt(m! n!) for m+n <= P (joint
    truncation), zero otherwise.  The omitted global factors are documented in
    the module docstring.
    """

    alpha: float = 0.0
    joint_truncation: bool = True


def build_joint_state(
    alpha: float, P: TruncationOrder | int, *, joint_truncation: bool = True
) -> JointFockState:
    """Construct the truncated two-mode state for a laser of mean photon number alpha.

    Args:
        alpha: mean photon number of the undivided laser, >= 0.
        P: truncation order (int or TruncationOrder).
        joint_truncation: if True (default) keep occupations with m+n <= P,
            which matches truncating the single-beam expansion before the
            splitter; if False keep the full square m <= P, n <= P.  The
            default is the convention validated against the closed-form
            benchmarks (see the oracle module).

    Returns:
        JointFockState with real nonnegative amplitudes; global factors
        exp(-alpha/2) and the truncated norm are omitted (they cancel in all
        reported ratios).
    """
    if isinstance(P, int):
        P = TruncationOrder(P)
    if alpha < 0:
        raise ConfigurationError(f"alpha must be nonnegative, got {alpha}")
    n = P.P
    amp = np.zeros((n + 1, n + 1), dtype=complex)
    half = alpha / 2.0
    for m in range(n + 1):
        nmax = n - m if joint_truncation else n
        for k in range(nmax + 1):
            amp[m, k] = half ** ((m + k) / 2.0) / sqrt(factorial(m) * factorial(k))
    return JointFockState(P=n, amp=amp, alpha=alpha, joint_truncation=joint_truncation)


def apply_monomial(state: AmplitudeTable, mono: OperatorMonomial) -> AmplitudeTable:
    """Apply a^j b^k to an amplitude table.

    Uses the exact ladder algebra a^j b^k |m, n> =
    sqrt(m!/(m-j)!) sqrt(n!/(n-k)!) |m-j, n-k>; occupations below the powers
    vanish (no error).  Factorial ratios are exact integers converted to
    floating point once.
    """
    P = state.P
    out = np.zeros_like(state.amp)
    j, k = mono.j, mono.k
    for m in range(j, P + 1):
        cm = sqrt(falling_factorial(m, j))
        for n in range(k, P + 1):
            a = state.amp[m, n]
            if a != 0:
                out[m - j, n - k] += mono.coeff * cm * sqrt(falling_factorial(n, k)) * a
    return AmplitudeTable(P=P, amp=out)


def inner_product(sA: AmplitudeTable, sB: AmplitudeTable) -> complex:
    """<sA|sB> = sum conj(ampA) * ampB over all stored occupations."""
    if sA.P != sB.P:
        raise UsageError(f"truncation orders differ: {sA.P} vs {sB.P}")
    return complex(np.vdot(sA.amp, sB.amp))


def diagonal_moment(state: AmplitudeTable, j: int, k: int) -> float:
    """Normally ordered factorial moment <(a+)^j a^j (b+)^k b^k> of the
    phase-diagonal ensemble built from ``state``.

    Random-phase averaging renders the ensemble Fock-diagonal, so the moment
    is sum over (m, n) of |amp|^2 * m!/(m-j)! * n!/(n-k)!  (unnormalized, like
    the amplitudes themselves).
    """
    P = state.P
    if j > P or k > P:
        return 0.0
    total = 0.0
    prob = np.abs(state.amp) ** 2
    for m in range(j, P + 1):
        fm = falling_factorial(m, j)
        for n in range(k, P + 1):
            p = prob[m, n]
            if p != 0:
                total += p * fm * falling_factorial(n, k)
    return total
