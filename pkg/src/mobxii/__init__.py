"""MOBXII-G distributions: closed forms, series expansion, fitting, censored
regression and Monte Carlo studies."""

__version__ = "0.1.0"

from .baselines import BASELINES, Baseline, Kumaraswamy, Normal, Weibull, make_baseline
from .exceptions import (
    DegenerateSeriesError,
    DomainError,
    HessianError,
    InfiniteMomentError,
    OptimizerInitError,
    ParameterError,
)
from .family import MOBXII, odds, quantile_level
from .inference import (
    FitResult,
    GLRResult,
    cvm_ad_statistics,
    fit_mle,
    glr_vuong,
    info_criteria,
    ks_statistic,
    loglik_mobxii,
)
from .models import MODELS, Model, get_model
from .moments import bowley_moors, incomplete_moment, lorenz_bonferroni, moment
from .montecarlo import StudyConfig, StudySummary, run_iid_study, run_regression_study, summarize
from .numerics import OptimizerConfig, RandomStream, minimize
from .regression import (
    CensoredSample,
    RegressionFit,
    censored_loglik,
    fit_regression,
    kaplan_meier,
    quantile_residuals,
)
from .series import SeriesCoefficients, series_cdf, series_coefficients, series_pdf

__all__ = [name for name in dir() if not name.startswith("_")]
