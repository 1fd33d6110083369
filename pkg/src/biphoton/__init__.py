"""Filtered type-II SPDC photon pairs as Gaussian quadratic forms.

Computes heralded-single-photon purities, heralding efficiencies and
purity-efficiency factors for a collinear degenerate BBO source with Gaussian
spatial and spectral filters.
"""

from .crystal import (
    BBO,
    CrystalParams,
    DispersionData,
    SellmeierSet,
    dispersion_data,
    group_delay_coefficient,
    index_extraordinary,
    index_ordinary,
    phase_matching_angle,
    walkoff_angle,
)
from .model import (
    FilterMask,
    FilterSet,
    PumpParams,
    QuadraticForm,
    SourceConfig,
    assemble_quadratic_form,
    bandwidth_to_angular,
    mode_function_value,
)
from .gaussian import (
    GaussianKernel,
    detection_probability_ratio,
    gaussian_norm_integral,
    purity,
    reduce_pure_state,
)
from .observables import (
    EtaDomain,
    ObservablesReport,
    SliceGrid,
    Subsystem,
    heralding_efficiency,
    joint_spectrum_slice,
    pef,
    report,
    subsystem_purity,
)

__version__ = "0.1.0"
