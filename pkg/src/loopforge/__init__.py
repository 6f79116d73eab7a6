"""loopforge: exact-arithmetic models of the combinatorics behind string topology.

Subpackages cover fat (ribbon) graphs and Sullivan chord diagrams, free tree
operads, Frobenius-algebra 2D TQFTs with the Dijkgraaf-Witten toy model,
Hochschild (co)homology of finite-dimensional DG algebras, Gerstenhaber/BV
axiom checkers, and the 1-dimensional cacti operad.  All arithmetic is over
the rationals and exact.
"""

__version__ = "0.1.0"
