"""Figures for netauction sweep output."""

from .render import CsvContractError, FIGURES, load_rows, render, svg_structure

__all__ = ["CsvContractError", "FIGURES", "load_rows", "render", "svg_structure"]
