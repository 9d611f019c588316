"""Exact computation with finite etale groupoids and correspondences.

The package builds and verifies groupoid models of category-shaped
diagrams of groupoid correspondences over finite data: finite shape
categories and their Ore completions, groupoids and their actions,
correspondences with inner products and composition, diagrams and
their actions, self-similar groups and graphs, complexes of groups,
and (m,n)-dynamical systems.
"""

__version__ = "0.1.0"
