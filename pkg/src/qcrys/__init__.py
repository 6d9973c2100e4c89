"""Exact workbench for crystal-basis realizations of the symmetric
representations of sl(n) and sp(2n), their q-deformations, and the
deforming diagonal maps between them."""

__version__ = "0.1.0"
