"""Spatial network simulator and scaling-law toolkit for traffic-based
network value (Sarnoff, Odlyzko, Metcalfe and cube laws)."""

import os

# numba probes TBB first and warns when the installed one is too old
os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp workqueue tbb")

__version__ = "0.1.0"

from .randmodels import ExponentParams, LambdaClass, lambda_eval  # noqa: E402
from .torus import Point, TorusDomain, torus_distance  # noqa: E402
from .synthesis import generate_network, generate_session  # noqa: E402
from .emst import emst_kruskal, emst_prim  # noqa: E402
from .traffic import SimConfig, simulate  # noqa: E402
from .theory import AsymptoticOrder, LawKind, classify_law, ln_order, ratio_slope  # noqa: E402
from .fitting import fit, rank_models  # noqa: E402

__all__ = [
    "AsymptoticOrder", "ExponentParams", "LambdaClass", "LawKind", "Point", "SimConfig",
    "TorusDomain", "classify_law", "emst_kruskal", "emst_prim", "fit", "generate_network",
    "generate_session", "lambda_eval", "ln_order", "rank_models", "ratio_slope", "simulate",
    "torus_distance",
]
