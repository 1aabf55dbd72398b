"""Exact computations for cluster Poisson varieties, quantum tori and the dual group.

Submodules:

- ``exact``: rational functions, Laurent polynomials and q-scalars
- ``seed``: seeds, mutation, the log-canonical bracket
- ``upper_bound``: Laurent certificates and exchange-graph exhaustion
- ``green``: c-vectors and maximal green sequences
- ``quiver``: quivers, the triangle quiver, amalgamation, the punctured disk
- ``qtorus``: quantum tori and quantum mutation checks
- ``borel``: Borel pairs, Gauss decomposition and the braid action
- ``uqsl2``: U_q(sl2) and its Chebyshev theta basis
- ``checks``: the acceptance battery
"""

from .exact import MultiLaurent, QScalar, RatFunc, q_divide, q_limit
from .seed import Seed, apply_sequence, mutate, poisson_bracket
from .upper_bound import enumerate_charts, upper_bound_member
from .green import search_mgs, verify_mgs
from .quiver import Quiver, amalgamate, punctured_disk_quiver, triangle_quiver
from .qtorus import QTorus, qt_multiply, quantum_mutate_check, semiclassical_bracket
from .borel import BorelPair, braid_sigma, braid_word, gauss_decompose, tau
from .uqsl2 import UqElement, casimir, expand_in_theta, theta_element

__version__ = "0.1.0"
