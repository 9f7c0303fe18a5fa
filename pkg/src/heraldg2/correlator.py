"""Detector operators and stochastically averaged normally ordered moments.

Physical model: each input beam is a single monochromatic mode whose
frequency is drawn from a Gaussian spectrum of angular-frequency standard
deviation sigma and whose phase is uniformly random, independently per beam.
Every projected detector field is a time-tagged linear form in the two input
annihilation operators.  Phase averaging keeps only bra-ket monomial pairs
with matching powers per beam; frequency averaging attaches
exp(-sigma^2 T^2 / 2) per beam, where T is the net signed sum of the time
tags in that beam's frequency exponent.
"""

from __future__ import annotations

import enum
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import comb, exp, sqrt

from heraldg2.fock_core import (
    AmplitudeTable,
    JointFockState,
    OperatorMonomial,
    UsageError,
    diagonal_moment,
)


class InternalConsistencyError(RuntimeError):
    """A moment came out negative or complex beyond tolerance: bookkeeping bug."""


class ProjectionBasis(enum.Enum):
    """Polarizer settings at the two output arms: {D_c, D_d} or {A_c, D_d}."""

    DD = "dd"
    AD = "ad"

    @property
    def c_sign(self) -> int:
        """Sign of the V component in the c-side projection (+1 for D, -1 for A)."""
        return 1 if self is ProjectionBasis.DD else -1


class Detector(enum.Enum):
    Dd = "d"  # heralding detector in arm d
    Dc = "c"  # direct detector in arm c (cross-correlation setup)
    De = "e"  # HBT detector, e = c / sqrt(2)
    Df = "f"  # HBT detector, f = i c / sqrt(2)


@dataclass(frozen=True)
class DetectionOperator:
    """One projected detector field factor u_A * a + u_B * b at a given time."""

    detector: Detector
    time: float
    uA: complex
    uB: complex

    def __post_init__(self) -> None:
        if abs(self.uA) ** 2 + abs(self.uB) ** 2 == 0:
            raise UsageError("detection operator must have a nonzero coefficient")


@dataclass(frozen=True)
class SpectralModel:
    """Gaussian spectra of both beams, sigma in angular frequency (rad/s)."""

    sigma: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise UsageError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class PhaseForm:
    """Random-phase/frequency bookkeeping of a monomial.

    The windings are the net powers of each beam's random phase; the time
    lists feed the frequency exponents.  A bra-ket pair survives phase
    averaging iff the bra and ket windings match per beam.
    """

    a_times: tuple[float, ...]
    b_times: tuple[float, ...]

    @property
    def winding_a(self) -> int:
        return len(self.a_times)

    @property
    def winding_b(self) -> int:
        return len(self.b_times)


def mu(T: float, spectral: SpectralModel) -> float:
    """Mutual-coherence factor exp(-sigma^2 T^2 / 2) for a net time sum T."""
    return exp(-((spectral.sigma * T) ** 2) / 2.0)


# Coefficient table for the projected detectors.  The beam-splitter relations
# a -> (c_H + i d_H)/sqrt(2), b -> (i c_V + d_V)/sqrt(2), combined with the
# D = (H+V)/sqrt(2) and A = (H-V)/sqrt(2) polarizer projections, give
#   d (D-projected):  (i/2, 1/2)
#   c (D or A):       (1/2, +-i/2)      sign from the c-side polarizer
#   e = c/sqrt(2), f = i c/sqrt(2).
def detector_operator(
    detector: Detector, basis: ProjectionBasis, time: float
) -> DetectionOperator:
    """Coefficient pair (uA, uB) for a projected detector, with a time tag."""
    s = basis.c_sign
    if detector is Detector.Dd:
        uA, uB = 0.5j, 0.5
    elif detector is Detector.Dc:
        uA, uB = 0.5, s * 0.5j
    elif detector is Detector.De:
        uA, uB = 0.5 / sqrt(2), s * 0.5j / sqrt(2)
    elif detector is Detector.Df:
        uA, uB = 0.5j / sqrt(2), -s * 0.5 / sqrt(2)
    else:  # pragma: no cover - enum is closed
        raise UsageError(f"unknown detector {detector}")
    return DetectionOperator(detector=detector, time=time, uA=uA, uB=uB)


def expand_product(
    ops: list[DetectionOperator],
) -> list[tuple[OperatorMonomial, PhaseForm]]:
    """Expand Prod_i (uA_i a e^{-i w_a t_i} + uB_i b e^{-i w_b t_i}) literally.

    Returns all 2^L monomials with their coefficients, powers and phase
    forms.  Exponential in L; intended for small operator lists and for
    cross-checking the grouped expansion used by ``averaged_moment``.
    """
    if not ops:
        raise UsageError("operator list must be nonempty")
    out = []
    for choice in product((0, 1), repeat=len(ops)):
        coeff = 1.0 + 0.0j
        a_times: list[float] = []
        b_times: list[float] = []
        for op, pick_b in zip(ops, choice):
            if pick_b:
                coeff *= op.uB
                b_times.append(op.time)
            else:
                coeff *= op.uA
                a_times.append(op.time)
        mono = OperatorMonomial(
            j=len(a_times),
            k=len(b_times),
            coeff=coeff,
            a_times=tuple(a_times),
            b_times=tuple(b_times),
        )
        out.append((mono, PhaseForm(tuple(a_times), tuple(b_times))))
    return out


def _grouped_expansion(
    ops: list[DetectionOperator],
) -> dict[tuple[int, float], complex]:
    """Sum the literal expansion into buckets keyed by (j, sum of a-times).

    Because the bra and ket of a normally ordered moment carry the same
    multiset of operators, the total of all time tags is a common constant;
    a monomial is therefore fully characterized for averaging purposes by its
    a-power j (k = L - j follows) and the sum of its a-side time tags.
    Identical operators are expanded binomially, which keeps the bucket count
    polynomial in the operator count.
    """
    groups = Counter((op.uA, op.uB, op.time) for op in ops)
    buckets: dict[tuple[int, float], complex] = {(0, 0.0): 1.0 + 0.0j}
    for (uA, uB, t), n in groups.items():
        nxt: dict[tuple[int, float], complex] = defaultdict(complex)
        for q in range(n + 1):
            term = comb(n, q) * (uA**q) * (uB ** (n - q))
            if term == 0:
                continue
            for (j, sa), c in buckets.items():
                nxt[(j + q, sa + q * t)] += c * term
        buckets = dict(nxt)
    return buckets


@dataclass
class MomentDiagnostics:
    """Records the clamping applied to enforce realness/positivity."""

    imag_residue: float = 0.0
    negative_residue: float = 0.0


def averaged_moment(
    state: JointFockState,
    ops: list[DetectionOperator],
    spectral: SpectralModel,
    diagnostics: MomentDiagnostics | None = None,
) -> float:
    """<O+ O> averaged exactly over random phases and Gaussian frequencies.

    O is the product of ``ops``.  Phase averaging keeps exactly the bra-ket
    monomial pairs with matching (j, k) powers; each surviving pair
    contributes conj(coeff_bra) * coeff_ket * <state moments>
    * exp(-sigma^2 T_a^2 / 2) * exp(-sigma^2 T_b^2 / 2), with T_a (T_b) the
    net signed time sum in the pair's a (b) frequency exponent.

    The result is real and nonnegative up to 1e-12 relative tolerance; it is
    clamped with the residue recorded in ``diagnostics``.  A violation beyond
    tolerance raises InternalConsistencyError.
    """
    if not ops:
        raise UsageError("operator list must be nonempty")
    L = len(ops)
    total_time = sum(op.time for op in ops)
    buckets = _grouped_expansion(ops)

    by_j: dict[int, list[tuple[float, complex]]] = defaultdict(list)
    for (j, sa), c in buckets.items():
        by_j[j].append((sa, c))

    total = 0.0 + 0.0j
    scale = 0.0
    for j, items in by_j.items():
        k = L - j
        M = diagonal_moment(state, j, k)
        if M == 0.0:
            continue
        for sa_ket, c_ket in items:
            for sa_bra, c_bra in items:
                Ta = sa_ket - sa_bra
                # The b-side sums are (total_time - sa), so Tb = -Ta.
                Tb = (total_time - sa_ket) - (total_time - sa_bra)
                w = mu(Ta, spectral) * mu(Tb, spectral)
                term = c_bra.conjugate() * c_ket * M * w
                total += term
                scale += abs(term)
    if scale == 0.0:
        return 0.0
    value = total.real
    imag_rel = abs(total.imag) / scale
    neg_rel = max(0.0, -value) / scale
    if imag_rel > 1e-12 or neg_rel > 1e-12:
        raise InternalConsistencyError(
            f"moment not real-nonnegative: value={total!r}, scale={scale!r}"
        )
    if diagnostics is not None:
        diagnostics.imag_residue = max(diagnostics.imag_residue, imag_rel)
        diagnostics.negative_residue = max(diagnostics.negative_residue, neg_rel)
    return max(value, 0.0)
