"""Exact computations around good and Weyl filtrations for GL(m|n) over F_p.

Submodules:

* ``weights``      weight lattice, dominance, rho-vectors, Steinberg criteria
* ``characters``   Laurent-polynomial characters and triangular decompositions
* ``grassmann``    Grassmann algebras, their supermodules, Ext and Tor
* ``gl_modules``   Lambda^k(W), S^k(W) and the filtration checks
* ``supermatrix``  supermatrices over Grassmann algebras and the Berezinian
* ``cli``          scans, reports and the acceptance runner
"""

__version__ = "0.1.0"
