"""Exact enumeration of self-avoiding walks and bridges on Z^d, and rigorous
finite-size checks of Hammersley-Welsh type upper bounds."""

__version__ = "0.1.0"

from .walk import Walk, WalkClass, classify, is_self_avoiding  # noqa: E402
from .census import Census, enumerate_census, oracle_census, load_census, save_census  # noqa: E402
from .genfun import MuBracket, mu_bracket  # noqa: E402
from .bounds import PhiModel, big_psi, hw_explicit_log_bound, phi_empirical, psi  # noqa: E402

__all__ = [
    "Walk", "WalkClass", "classify", "is_self_avoiding",
    "Census", "enumerate_census", "oracle_census", "load_census", "save_census",
    "MuBracket", "mu_bracket",
    "PhiModel", "big_psi", "hw_explicit_log_bound", "phi_empirical", "psi",
]
