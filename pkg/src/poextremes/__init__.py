"""Extremes of dependent proportional-odds samples: distributions, quantile
compositions and numerical dispersive / star order checks."""

__version__ = "0.1.0"

from poextremes.baselines import (
    AgingReport,
    Baseline,
    CustomBaseline,
    EvalRecord,
    classify_aging,
    evaluate,
    make_baseline,
    quantile,
)
from poextremes.errors import (
    BracketError,
    DomainError,
    EndpointError,
    ScenarioError,
    SingularityError,
    UnsupportedSamplerError,
)
from poextremes.extremes import (
    ExtremeDistribution,
    POSampleSpec,
    TransformProfile,
    compose_quantile_cdf,
    composed_density,
    extreme_cdf,
    extreme_density,
    extreme_quantile,
    transport_numeric,
)
from poextremes.generators import (
    CustomGenerator,
    Generator,
    Independence,
    Nelsen428,
    Nelsen4219,
    check_cross_generator,
    check_generator_validity,
    check_log_shape,
    check_ratio_shape,
    make_generator,
)
from poextremes.grids import Grid, support_grid, unit_grid
from poextremes.order_checks import (
    OrderCheckReport,
    ScenarioReport,
    check_dispersive,
    check_dispersive_quantile,
    check_star,
    run_scenario,
    verify_hypotheses,
)
from poextremes.po_model import POMarginal
from poextremes.scenarios import Scenario, get_scenario, load_scenario, registry
from poextremes.verdicts import ConditionReport, Status, Trend, Verdict

__all__ = [name for name in dir() if not name.startswith("_")]
