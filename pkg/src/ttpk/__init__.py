"""Rotation-scheme schedules for the Traveling Tournament Problem with streak cap k.

The solver builds a feasible double round-robin from a Christofides tour,
certifies its travel cost against lower bounds, and ships an exact search
for small instances.
"""
from .bounds import BoundsReport, bounds, certify, lower_bounds
from .construction import (BlockLayout, SolveResult, block_layout, cons, day_pairing,
                           flawed_cons, move_decomposition, solve)
from .errors import (CapabilityError, ConstructionDefect, DomainError, MetricError,
                     ParseError, StructuralError, TTPError)
from .instance import DistanceMatrix, generate, load, save, stats
from .kernels import BACKEND
from .labeling import Labeling, candidate_ls, enumerate_labelings, select_hub, shortcut
from .oracle import exact_ttp, exhaustive_schedule_count
from .schedule import Game, Schedule, total_cost, validate
from .tsp_tour import Tour, christofides, exact_tour

__version__ = "0.1.0"
