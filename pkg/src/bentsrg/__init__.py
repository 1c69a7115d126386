"""Strongly regular graphs and partial difference sets from p-ary bent functions."""

from .field import FieldCtx, FieldElem, make_field, quad_classes

__version__ = "0.1.0"

__all__ = ["FieldCtx", "FieldElem", "make_field", "quad_classes"]
