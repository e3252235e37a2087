"""Exact reduction of finite-image Galois data to the semistable case."""
from .cyclo import CycNum, parse_cyc, zeta
from .dirichlet import DirichletCharacter, LocalPrescription, parse_dirichlet, parse_prescription
from .fields import QQ, AbelianField, CyclicExtensionDatum
from .groups import FiniteGroup
from .grunwald import Infeasible, solve, solve_report
from .ldata import FormalAutDatum, GaloisDatum, PlaceRecord, artin_local_factor, base_change, twist_ldata
from .local import EpsilonDatum, InverseRoot, LocalFactor
from .reduction import AmbiguousDescent, NoDescent, ReductionError, descend, run_reduction
from .reps import Representation
from .transfer import InconsistentFunctionalEquation, TransferPair, complete_missing_factor

__version__ = "0.1.0"
