"""Exact load moments of q-wise independent balls-into-bins hashing,
certified anti-concentration certificates, and concrete impossibility
verdicts for min-entropy condensers, cross-validated by simulation and
exhaustive enumeration."""

from .anticonc import (AntiConcentrationCertificate, certificate_ordering,
                       lemma2_certificate, pz_bound)
from .asymptotic import (AsymptoticEstimate, bell_log_estimate,
                         estimate_residual, stirling_max_log_estimate)
from .combinat import (BellSequence, StirlingTable, binomial,
                       falling_factorial)
from .condenser import (CondenserParams, CondenserVerdict,
                        asymptotic_gap_report, impossibility_certificate,
                        necessary_independence, positive_params)
from .errors import CapacityError, CondboundError, PreconditionError
from .hashsim import (ExactLoadDistribution, HashFamilySpec,
                      SimulationConfig, SimulationReport, evaluate_hash,
                      exact_small_oracle, independent_oracle, run_trials)
from .intervals import FloatInterval, log2_interval, nth_root
from .moments import (BallsBinsInstance, MomentResult, moment_norm,
                      moment_sandwich, raw_moment)

__version__ = "0.1.0"

__all__ = [
    "AntiConcentrationCertificate", "AsymptoticEstimate",
    "BallsBinsInstance", "BellSequence", "CapacityError", "CondboundError",
    "CondenserParams", "CondenserVerdict", "ExactLoadDistribution",
    "FloatInterval", "HashFamilySpec", "MomentResult", "PreconditionError",
    "SimulationConfig", "SimulationReport", "StirlingTable",
    "asymptotic_gap_report", "bell_log_estimate", "binomial",
    "certificate_ordering", "estimate_residual", "evaluate_hash",
    "exact_small_oracle", "falling_factorial", "impossibility_certificate",
    "independent_oracle", "lemma2_certificate", "log2_interval",
    "moment_norm", "moment_sandwich", "necessary_independence", "nth_root",
    "positive_params", "pz_bound", "raw_moment", "run_trials",
    "stirling_max_log_estimate",
]
