"""Independent phase/frequency quadrature oracle for normally ordered moments.

This is a from-scratch second implementation path used only by the tests: it
shares no moment-evaluation code with the production engine.  The stochastic
average is computed literally:

* the uniform random relative phase between the two beams is integrated with
  a K-point uniform quadrature (exact for trigonometric polynomials of degree
  < K; the integrand has degree <= 2L for L operator factors);
* the two Gaussian random angular frequencies are integrated with
  Gauss-Hermite quadrature;
* for each quadrature node the expectation is evaluated on the explicit pure
  state by sequentially applying each detector factor to the amplitude table.

Accuracy note: Gauss-Hermite is not exact for the oscillatory factors
exp(i omega T); with the node counts below it is far beyond 1e-10 relative
as long as sigma * |T| stays below ~3 for every net time sum T.
"""

from __future__ import annotations

from math import factorial, sqrt

import numpy as np


def _state_table(alpha: float, P: int) -> np.ndarray:
    """Unnormalized truncated amplitudes (alpha/2)^((m+n)/2)/sqrt(m! n!), m+n<=P."""
    amp = np.zeros((P + 1, P + 1), dtype=complex)
    for m in range(P + 1):
        for n in range(P + 1 - m):
            amp[m, n] = (alpha / 2.0) ** ((m + n) / 2.0) / sqrt(
                factorial(m) * factorial(n)
            )
    return amp


def quadrature_moment(
    alpha: float,
    P: int,
    ops: list[tuple[complex, complex, float]],
    sigma: float,
    n_phase: int | None = None,
    n_hermite: int = 64,
) -> float:
    """<O+ O> for O = prod (uA a e^{-i wa t} + uB b e^{-i wb t}), averaged.

    ops: list of (uA, uB, time) factors.  Returns the same unnormalized
    moment convention as the production engine (state norm not divided out).
    """
    L = len(ops)
    K = n_phase if n_phase is not None else 2 * L + 3
    nodes, weights = np.polynomial.hermite.hermgauss(n_hermite)
    # omega = sqrt(2) * sigma * node integrates the N(0, sigma^2) density.
    omegas = sqrt(2.0) * sigma * nodes
    wnorm = weights / sqrt(np.pi)

    base = _state_table(alpha, P)
    wa = omegas[:, None]  # frequency of beam a, broadcast grid
    wb = omegas[None, :]
    total = 0.0
    for iphi in range(K):
        phi = 2.0 * np.pi * iphi / K
        # relative phase on beam b: |m, n> picks up e^{i n phi}
        psi = base * np.exp(1j * phi * np.arange(P + 1))[None, :]
        psi = np.broadcast_to(psi, (n_hermite, n_hermite, P + 1, P + 1)).copy()
        for uA, uB, t in ops:
            nxt = np.zeros_like(psi)
            # a-annihilation: sqrt(m+1) psi[m+1, n] with phase e^{-i wa t}
            m = np.arange(P)
            nxt[:, :, :-1, :] += (
                uA
                * np.exp(-1j * wa * t)[:, :, None, None]
                * np.sqrt(m + 1)[None, None, :, None]
                * psi[:, :, 1:, :]
            )
            n = np.arange(P)
            nxt[:, :, :, :-1] += (
                uB
                * np.exp(-1j * wb * t)[:, :, None, None]
                * np.sqrt(n + 1)[None, None, None, :]
                * psi[:, :, :, 1:]
            )
            psi = nxt
        norms = np.sum(np.abs(psi) ** 2, axis=(2, 3))
        total += float(np.sum(norms * wnorm[:, None] * wnorm[None, :]))
    return total / K
