"""Exact computations around the Goodwillie-Weiss tower for long knots.

Submodules: abelian (integer linear algebra), lie (Lyndon words and
Hilton-Milnor counts), homotopy (rational homotopy E^1), poisson (the
Poisson operad and its cosimplicial structure), homology (homology pages),
diagrams (tree groups), collapse (vanishing criteria), cli.
"""

__version__ = "0.1.0"
