"""Renderers that turn modssd sweep CSVs into figure images."""

from .render import FigureRecipe, SchemaError, render

__all__ = ["FigureRecipe", "SchemaError", "render"]
