"""Retrospective (backward-in-time) reconstruction of initial data for
classical, time-fractional and hyperbolic diffusion on homogeneous and
piecewise-homogeneous axes, via generalized Hermite series, spectral
inversion and closed forms, each checked against forward oracles."""

from .dirichlet import HalfPlaneTrace, dirichlet_invert_continuation, dirichlet_invert_series, dirichlet_invert_spectral
from .errors import RetroError
from .fields import SampledField, Spectrum, rel_l2
from .forward import halfplane_forward, heat_forward_homogeneous, piecewise_heat_fd
from .genfun import EvolutionK, gen_hermite_basis, gen_hermite_eval
from .jets import Jet
from .media import Coupling, LayeredMedium, build_medium, generalized_monomials, homogeneous, ideal_contact
from .retro import ReconstructionConfig, dalembert_invert, reconstruct, reconstruct_series, spectral_invert

__version__ = "0.1.0"

__all__ = [
    "Coupling",
    "EvolutionK",
    "HalfPlaneTrace",
    "Jet",
    "LayeredMedium",
    "ReconstructionConfig",
    "RetroError",
    "SampledField",
    "Spectrum",
    "build_medium",
    "dalembert_invert",
    "dirichlet_invert_continuation",
    "dirichlet_invert_series",
    "dirichlet_invert_spectral",
    "gen_hermite_basis",
    "gen_hermite_eval",
    "generalized_monomials",
    "halfplane_forward",
    "heat_forward_homogeneous",
    "homogeneous",
    "ideal_contact",
    "piecewise_heat_fd",
    "reconstruct",
    "reconstruct_series",
    "rel_l2",
    "spectral_invert",
]
