"""Elliptic curves over GF(p) with complex multiplication by a given order,
built together with their exact group order."""

from .classdata import ClassPolyEntry, ClassPolyTable, QuadIntCoeff, builtin_table, load_table
from .cmbuild import CurveCertificate, SignDecision, build_curve_with_cm, select_method
from .ecore import Curve, curve_from_j, naive_count
from .modarith import CMInstance, cornacchia

__all__ = [
    "CMInstance",
    "ClassPolyEntry",
    "ClassPolyTable",
    "Curve",
    "CurveCertificate",
    "QuadIntCoeff",
    "SignDecision",
    "build_curve_with_cm",
    "builtin_table",
    "cornacchia",
    "curve_from_j",
    "load_table",
    "naive_count",
    "select_method",
]

__version__ = "0.1.0"
