from fpme_lab.dynamics.carre import carre_du_champ, carre_du_champ_direct, carre_terms
from fpme_lab.dynamics.frequency import (
    ClassCount,
    FrequencyReport,
    class_rate_table,
    transition_frequency_check,
)
from fpme_lab.dynamics.generator import (
    MAX_EXACT_SIZE,
    GeneratorMatrix,
    StationarityReport,
    bernoulli_vector,
    dirichlet_form,
    dirichlet_pairing,
    exact_generator,
    ordered_pair_rates,
    stationarity_check,
)
from fpme_lab.dynamics.pair_sums import pair_sum, pair_sum_direct, short_range_offsets
from fpme_lab.dynamics.params import EventLog, SimParams
from fpme_lab.dynamics.simulator import envelope_rate, simulate, waiting_time_mean

__all__ = [
    "SimParams",
    "EventLog",
    "simulate",
    "envelope_rate",
    "waiting_time_mean",
    "MAX_EXACT_SIZE",
    "GeneratorMatrix",
    "StationarityReport",
    "exact_generator",
    "bernoulli_vector",
    "ordered_pair_rates",
    "stationarity_check",
    "dirichlet_form",
    "dirichlet_pairing",
    "ClassCount",
    "FrequencyReport",
    "class_rate_table",
    "transition_frequency_check",
    "pair_sum",
    "pair_sum_direct",
    "short_range_offsets",
    "carre_du_champ",
    "carre_du_champ_direct",
    "carre_terms",
]
