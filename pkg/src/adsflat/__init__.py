"""Flat Lorentzian surfaces in anti-de Sitter 3-space from pairs of hyperbolic fronts."""
from .checks import Check, all_pass
from .cliffalg import (
    AdSPoint,
    CausalClass,
    SplitQuat,
    algebra_suite,
    causal_character,
    conj,
    cross,
    exp_fiber,
    inner,
    mul,
    qconj,
    qinner,
    qmul,
)
from .fronts import (
    AngleFunction,
    BranchError,
    FrontCurve,
    InadmissiblePairError,
    angle_function,
    check_admissible,
    constant_curvature_front,
    geodesic_curvature,
    make_front_from_curvature,
    parallel_front,
    positive_normal,
    prepare_front,
    sasaki_reparametrize,
)
from .gallery import SCENARIOS, ScenarioResult, hopf_cylinder, run_scenario
from .hopf import BaseManifold, HopfAxis, classify_base, double_cover, hopf_map, hopf_suite, legendrian_preimage
from .lift import AsymptoticCurve, asymptotic_lift, asymptotic_reparametrize, closure_detect, verify_lift
from .surface import (
    FlatSurfacePatch,
    NonImmersionError,
    Verdict,
    closed_forms,
    completeness_check,
    coordinate_chart,
    measured_forms,
    round_trip,
    synthesize,
    torus_check,
    verify_patch,
)

__version__ = "0.1.0"
