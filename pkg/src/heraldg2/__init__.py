"""heraldg2: second-order photon correlations of two incoherent weak lasers.

The package computes the unconditional cross-correlation R_cd(tau) and the
heralded conditional autocorrelation g2_C(tau, tau_c) for two mutually
incoherent weak laser beams interfering on a beam splitter, with the
Fock-space truncation order P as a first-class parameter.

Modules
-------
fock_core
    Truncated two-mode coherent states and exact ladder-operator algebra.
correlator
    Detector operators, operator-product expansion, and normally ordered
    moments averaged over random phases and Gaussian random frequencies.
statistics
    Assembly of R_cd, the factorial moments I_d/I_de/I_df/I_def, the
    conditional g2_C, and parameter sweeps.
oracle
    Closed-form benchmark expressions for g2_C(tau, 0) at truncation
    orders 3..10 and the engine-verification harness.
cli
    Command-line front end (sweeps, CSV emission, verification gate).
figgen
    Figure regeneration from CSV sweep outputs (optional, needs matplotlib).
"""

from heraldg2.fock_core import TruncationOrder, JointFockState, build_joint_state
from heraldg2.correlator import ProjectionBasis, SpectralModel, detector_operator
from heraldg2.statistics import CorrelationRequest, g2_conditional, r_cd

__all__ = [
    "TruncationOrder",
    "JointFockState",
    "build_joint_state",
    "ProjectionBasis",
    "SpectralModel",
    "detector_operator",
    "CorrelationRequest",
    "g2_conditional",
    "r_cd",
]

__version__ = "0.1.0"
