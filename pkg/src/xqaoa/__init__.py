"""MaxCut with QAOA, multi-angle QAOA and XQAOA mixers, plus classical baselines."""
from xqaoa._accel import backend_name
from xqaoa.analytic import (
    VARIANTS,
    AngleAssignment,
    AnsatzObjective,
    expectation,
    maqaoa1_expectation,
    qaoa1_expectation,
    star_qaoa1_optimum,
    trig_identity_check,
    xqaoa1_xeqy_expectation,
    xqaoa1_xy_expectation,
    xqaoa1_y_expectation,
)
from xqaoa.baselines import (
    classical_relaxed,
    extract_cut_xeqy,
    gw_certificate,
    gw_round,
    gw_solve,
)
from xqaoa.graphs import (
    CutResult,
    Graph,
    brute_force_maxcut,
    cut_value,
    generate_regular,
    load_graph,
    save_graph,
)
from xqaoa.optimize import OptimizationRun, OptimizerConfig, cga_gradient, lbfgs_maximize, multistart

__version__ = "0.1.0"

__all__ = [
    "VARIANTS",
    "AngleAssignment",
    "AnsatzObjective",
    "CutResult",
    "Graph",
    "OptimizationRun",
    "OptimizerConfig",
    "backend_name",
    "brute_force_maxcut",
    "cga_gradient",
    "classical_relaxed",
    "cut_value",
    "expectation",
    "extract_cut_xeqy",
    "generate_regular",
    "gw_certificate",
    "gw_round",
    "gw_solve",
    "lbfgs_maximize",
    "load_graph",
    "maqaoa1_expectation",
    "multistart",
    "qaoa1_expectation",
    "save_graph",
    "star_qaoa1_optimum",
    "trig_identity_check",
    "xqaoa1_xeqy_expectation",
    "xqaoa1_xy_expectation",
    "xqaoa1_y_expectation",
]
