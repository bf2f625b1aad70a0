"""Daily soil N2O flux prediction (g N2O-N/ha/d).

Two regressor families share the feature set (recent precipitation +
irrigation, mean air temperature, days since nitrogen application): a
deterministic MLP trained with MSE and a probabilistic MLP that outputs
log-normal (mu, log sigma) parameters trained by maximum likelihood. A
closed-form surrogate model backs fast simulation and synthetic data
generation. Predictions at nitrogen inputs other than the 170 kg/ha
reference are scaled by an exponential response factor.
"""

from .features import DAYS_AF_SENTINEL, EmissionFeatures, extract_features
from .dataset import (
    EmissionDataset,
    Normalization,
    make_synthetic_dataset,
    read_dataset,
    surrogate_flux,
    write_dataset,
)
from .models import (
    N_REFERENCE_INPUT_KG_HA,
    N_RESPONSE_RATE,
    EmissionMetrics,
    EmissionModelConfig,
    EmissionModelKind,
    SurrogateEmissionModel,
    TrainedEmissionModel,
    load_emission_model,
    n_input_scale_factor,
    pi_coverage,
    predict_daily_flux,
    predict_flux_distribution,
    r_squared,
    save_emission_model,
    train_emission_model,
)

__all__ = [
    "EmissionFeatures",
    "extract_features",
    "DAYS_AF_SENTINEL",
    "EmissionDataset",
    "Normalization",
    "make_synthetic_dataset",
    "surrogate_flux",
    "read_dataset",
    "write_dataset",
    "EmissionModelKind",
    "EmissionModelConfig",
    "EmissionMetrics",
    "TrainedEmissionModel",
    "SurrogateEmissionModel",
    "train_emission_model",
    "predict_daily_flux",
    "predict_flux_distribution",
    "n_input_scale_factor",
    "N_RESPONSE_RATE",
    "N_REFERENCE_INPUT_KG_HA",
    "r_squared",
    "pi_coverage",
    "save_emission_model",
    "load_emission_model",
]
