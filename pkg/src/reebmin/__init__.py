"""Sasaki-Einstein existence toolkit.

Decides, certifies, or obstructs Sasaki-Einstein structures on candidate
spaces: Reeb-vector volume minimization over toric moment cones, link
existence and obstruction tests for Brieskorn-Pham singularities, and
numerical verification of the explicit Y^{p,q} Einstein metrics.
"""

__version__ = "0.1.0"
