"""Finite parts of divergent integrals of quasi-meromorphic forms on P^n."""

from importlib.metadata import version as _get_version

from .gamma import closed_form_fp
from .pipeline import FinitePartResult, cross_check, finite_part
from .zring import ZetaExpr

try:
    __version__ = _get_version("finitepart")
except Exception:  # pragma: no cover
    __version__ = "999"

__all__ = ["FinitePartResult", "ZetaExpr", "closed_form_fp", "cross_check", "finite_part"]
