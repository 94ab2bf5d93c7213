"""Mixed fractional Poisson claim processes, risk processes and ruin
analytics, with every closed form cross-checked against Monte Carlo."""

__version__ = "0.1.0"

from .compound import (
    DiscreteClaimLaw,
    compound_fde_residual,
    compound_overdispersion,
    compound_state_prob,
    simulate_compound,
)
from .ensembles import Estimate, inverse_ensemble
from .mfpp import (
    CountingPath,
    interarrival_density,
    interarrival_lt,
    mfpp_cov,
    mfpp_mean,
    mfpp_var,
    pgf,
    simulate_mfpp,
    state_prob_p0,
    state_prob_pn,
)
from .mittag_leffler import MLParams, ml2, ml3, ml3_asymptotic
from .numerics import (
    Grid,
    GridFunction,
    SamplePath,
    caputo_l1,
    convolve,
    fixed_point,
    laplace_invert,
)
from .risk import (
    ClaimModel,
    RiskConfig,
    SurplusPath,
    Variant,
    increments,
    lrd_exponent,
    martingale_check,
    mfrp2_cov,
    mfrp_cov,
    simulate_surplus,
    surplus_ensemble,
)
from .ruin import (
    RuinEstimate,
    ruin_asymptotic_subexp,
    ruin_density_exp,
    ruin_lt,
    ruin_prob_lt,
    ruin_prob_mc,
)
from .subordinators import (
    InversePath,
    MixedParams,
    SubordinatorPath,
    cov_inverse_corrected,
    cov_inverse_fixed_s,
    inverse_path,
    mean_inverse,
    mean_inverse_asymptotic,
    sample_mixed_path,
    sample_stable_increment,
    var_inverse_asymptotic,
)
