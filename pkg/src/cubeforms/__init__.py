"""Linear forms modulo p restricted to S^n: exact densities, character sums,
certified density bounds and the example constructions."""

from ._backend import COMPILED
from .constructions import (
    Claim,
    ConstructionReport,
    check_full_image_remark,
    gen_example1,
    gen_example2,
    gen_example3,
    gen_example4,
    gen_span_family,
    gen_tightness,
)
from .density import (
    DensityEstimate,
    JointDistribution,
    conditional_density,
    joint_distribution,
    marginal_distribution,
    mc_density,
    satisfying_density,
)
from .errors import (
    ConditioningOnNull,
    CubeFormsError,
    DegenerateDistribution,
    EnumerationTooLarge,
    ExactEngineTooLarge,
    InvalidInput,
    NoNontrivialWitness,
    PetalTooSmall,
    ResourceLimit,
    RetryExhausted,
)
from .forms import (
    Condition,
    ConditionSystem,
    LinearForm,
    combine,
    distance,
    meets_main_assumption,
    pairwise_min_distance,
    separation,
    support,
)
from .fourier import bias_bound, equidistribution_check, fourier_average, fourier_coefficient
from .fp import Alphabet, LWitness, TargetSet, beta, compute_L, compute_L_translates, sumset
from .structure import (
    DensityBoundReport,
    EquidistributionCertificate,
    SunflowerCertificate,
    certify_density_bound,
    extract_sunflower,
    greedy_separated_subfamily,
    parameters_from_epsilon,
    verify_certificate,
)

__version__ = "0.1.0"
