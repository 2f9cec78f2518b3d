"""Optimal third-order WENO reconstructions and a finite-difference solver."""
