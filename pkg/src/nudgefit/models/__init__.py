from .base import Model, SensitivityStack, otf_observed_sensitivity
from .kse import KuramotoSivashinsky
from .lorenz63 import Lorenz63, canonical_params
from .lorenz96 import Lorenz96TwoLayer

__all__ = [
    "Model",
    "SensitivityStack",
    "otf_observed_sensitivity",
    "Lorenz63",
    "Lorenz96TwoLayer",
    "KuramotoSivashinsky",
    "canonical_params",
]
