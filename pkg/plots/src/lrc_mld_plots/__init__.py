"""Render failure-probability figures from lrc-mld CSV output."""

from .render import PlotSpec, SchemaError, render

__version__ = "0.1.0"
