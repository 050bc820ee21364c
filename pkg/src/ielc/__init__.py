"""Toolkit for the modal lambda calculus of intuitionistic epistemic logic."""

__version__ = "0.1.0"
