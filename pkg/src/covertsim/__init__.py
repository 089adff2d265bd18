"""Covert satellite uplink vs UAV warden: catch-probability analytics and simulation."""

from .params import (ScenarioConfig, LinearConstants, ConfigError,
                     TABLE1_DEFAULTS, load_config, to_linear, apply_overrides,
                     config_hash)
from .geometry import DistanceLaw, slant_distance
from .detection import (DetectionCurve, regularized_lower_gamma, false_alarm,
                        miss_detection, solve_threshold,
                        sample_window_statistic)
from .channel import (FadingSample, RateEstimate, los_gain, nlos_gain,
                      sample_rician, instantaneous_rate, average_rate)
from .catch import (Stratum, CatchBreakdown, max_effective_detections,
                    stratum_interval, catch_probability, optimal_window)
from .splitting import (SplitPlan, StabilityBound, ModelValidityError,
                        postponement_probability, chunk_catch_probability,
                        overall_catch_probability, overall_from_components,
                        overall_series_truncated, optimal_chunks,
                        stability_bound)
from .simulator import (SlotOutcome, CatchEstimate, CaseStats, simulate_slot,
                        estimate_catch, estimate_overall_catch, run_case1,
                        run_case2, wilson_interval)

__version__ = "0.1.0"
