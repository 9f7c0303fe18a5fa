"""Unit tests for the truncated two-mode Fock core."""

from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heraldg2.fock_core import (
    AmplitudeTable,
    ConfigurationError,
    JointFockState,
    OperatorMonomial,
    TruncationOrder,
    UsageError,
    apply_monomial,
    build_joint_state,
    diagonal_moment,
    falling_factorial,
    inner_product,
)


class TestTruncationOrder:
    def test_valid_range(self):
        assert TruncationOrder(1).P == 1
        assert TruncationOrder(20).P == 20

    @pytest.mark.parametrize("bad", [0, -1, 21, 100])
    def test_out_of_range_rejected(self, bad):
        with pytest.raises(ConfigurationError):
            TruncationOrder(bad)


class TestBuildJointState:
    def test_vacuum_input(self):
        s = build_joint_state(0.0, 3)
        assert s.amp[0, 0] == 1
        assert np.count_nonzero(s.amp) == 1

    def test_direct_substitution_small(self):
        s = build_joint_state(0.2, 2)
        assert s.amp[1, 0].real == pytest.approx(sqrt(0.1), rel=1e-14)
        assert s.amp[0, 1].real == pytest.approx(sqrt(0.1), rel=1e-14)
        assert s.amp[1, 1].real == pytest.approx(0.1, rel=1e-14)
        assert s.amp[2, 0].real == pytest.approx(0.1 / sqrt(2), rel=1e-14)
        assert s.amp[0, 2].real == pytest.approx(0.1 / sqrt(2), rel=1e-14)

    def test_direct_substitution_large(self):
        s = build_joint_state(1.2, 10)
        assert s.amp[5, 5].real == pytest.approx(0.6**5 / 120.0, rel=1e-12)

    def test_joint_truncation_bound(self):
        s = build_joint_state(0.5, 4)
        for m in range(5):
            for n in range(5):
                if m + n > 4:
                    assert s.amp[m, n] == 0

    def test_per_arm_truncation_flag(self):
        s = build_joint_state(0.5, 4, joint_truncation=False)
        assert s.amp[4, 4] != 0

    def test_negative_alpha_rejected(self):
        with pytest.raises(ConfigurationError):
            build_joint_state(-0.1, 3)

    @settings(max_examples=25, deadline=None)
    @given(
        alpha=st.floats(0.01, 2.0),
        P=st.integers(2, 12),
    )
    def test_truncation_monotonicity(self, alpha, P):
        big = build_joint_state(alpha, P)
        small = build_joint_state(alpha, P - 1)
        for m in range(P):
            for n in range(P - m):
                assert big.amp[m, n] == small.amp[m, n]


class TestApplyMonomial:
    def test_single_photon_annihilation(self):
        t = AmplitudeTable(P=2, amp=np.zeros((3, 3), dtype=complex))
        t.amp[1, 1] = 1.0
        out = apply_monomial(t, OperatorMonomial(j=1, k=0, coeff=1.0, a_times=(0.0,)))
        assert out.amp[0, 1] == pytest.approx(1.0)

    def test_double_annihilation_ladder(self):
        t = AmplitudeTable(P=2, amp=np.zeros((3, 3), dtype=complex))
        t.amp[2, 0] = 1.0
        out = apply_monomial(
            t, OperatorMonomial(j=2, k=0, coeff=1.0, a_times=(0.0, 0.0))
        )
        assert out.amp[0, 0] == pytest.approx(sqrt(2), rel=1e-14)

    def test_identity_monomial(self):
        s = build_joint_state(0.3, 3)
        out = apply_monomial(s, OperatorMonomial(j=0, k=0, coeff=1.0))
        assert np.array_equal(out.amp, s.amp)

    def test_mismatched_time_tags_rejected(self):
        with pytest.raises(UsageError):
            OperatorMonomial(j=2, k=0, coeff=1.0, a_times=(0.0,))

    @settings(max_examples=25, deadline=None)
    @given(alpha=st.floats(0.01, 1.5), P=st.integers(2, 8), j=st.integers(1, 2))
    def test_ladder_consistency(self, alpha, P, j):
        # applying j=1 twice equals applying j=2 once
        s = build_joint_state(alpha, P)
        one = OperatorMonomial(j=1, k=0, coeff=1.0, a_times=(0.0,))
        twice = apply_monomial(apply_monomial(s, one), one)
        once = apply_monomial(
            s, OperatorMonomial(j=2, k=0, coeff=1.0, a_times=(0.0, 0.0))
        )
        assert np.allclose(twice.amp, once.amp, rtol=1e-14, atol=0)


class TestInnerProduct:
    def test_vacuum_normalization(self):
        s = build_joint_state(0.0, 4)
        assert inner_product(s, s) == pytest.approx(1.0)

    def test_single_term(self):
        t = AmplitudeTable(P=1, amp=np.zeros((2, 2), dtype=complex))
        t.amp[1, 0] = sqrt(0.1)
        assert inner_product(t, t).real == pytest.approx(0.1, rel=1e-14)

    def test_orthogonality(self):
        a = AmplitudeTable(P=1, amp=np.zeros((2, 2), dtype=complex))
        b = AmplitudeTable(P=1, amp=np.zeros((2, 2), dtype=complex))
        a.amp[1, 0] = 1.0
        b.amp[0, 1] = 1.0
        assert inner_product(a, b) == 0

    def test_mismatched_orders_rejected(self):
        with pytest.raises(UsageError):
            inner_product(build_joint_state(0.1, 2), build_joint_state(0.1, 3))

    @settings(max_examples=25, deadline=None)
    @given(
        alpha=st.floats(0.01, 1.5),
        P=st.integers(1, 8),
        j=st.integers(0, 2),
        k=st.integers(0, 2),
    )
    def test_hermiticity(self, alpha, P, j, k):
        s = build_joint_state(alpha, P)
        mono = OperatorMonomial(
            j=j, k=k, coeff=1.0 + 0.5j, a_times=(0.0,) * j, b_times=(0.0,) * k
        )
        out = apply_monomial(s, mono)
        v = inner_product(out, out)
        assert v.real >= 0
        assert abs(v.imag) <= 1e-14 * max(v.real, 1e-300)


class TestDiagonalMoment:
    def test_matches_ladder_path(self):
        # diagonal_moment must equal <psi| (a+)^j a^j (b+)^k b^k |psi> for the
        # (real, phase-free) canonical state
        s = build_joint_state(0.7, 6)
        for j, k in [(0, 0), (1, 0), (2, 1), (1, 3)]:
            mono = OperatorMonomial(
                j=j, k=k, coeff=1.0, a_times=(0.0,) * j, b_times=(0.0,) * k
            )
            out = apply_monomial(s, mono)
            direct = inner_product(out, out).real
            assert diagonal_moment(s, j, k) == pytest.approx(direct, rel=1e-13)

    def test_beyond_truncation_zero(self):
        s = build_joint_state(0.7, 3)
        assert diagonal_moment(s, 4, 0) == 0.0


def test_falling_factorial_exact():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(3, 5) == 0
    assert falling_factorial(20, 20) == 2432902008176640000
