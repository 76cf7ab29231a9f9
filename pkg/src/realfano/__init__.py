"""Real Fano threefolds: pencil classification, component bounds,
real-locus subdivision and a family atlas with rationality rules."""

__version__ = "0.1.0"

from .atlas import Certificate, FamilyId, InconsistentEvidence, UnknownFamily, Verdict, decide, lookup, table
from .bounds import HodgeData, borel_swan_bound, bound_report, smith_thom_bound
from .locus import BudgetExceeded, PolynomialSystem, count_components, load_system, subdivide
from .pencil import IsotopyClass, NotGeneric, QuadricPencil, classify, interpret, validate_generic
from .retraction import retract_path, variety_point

__all__ = [
    "BudgetExceeded", "Certificate", "FamilyId", "HodgeData", "InconsistentEvidence", "IsotopyClass",
    "NotGeneric", "PolynomialSystem", "QuadricPencil", "UnknownFamily", "Verdict", "borel_swan_bound",
    "bound_report", "classify", "count_components", "decide", "interpret", "load_system", "lookup",
    "retract_path", "smith_thom_bound", "subdivide", "table", "validate_generic", "variety_point",
]
