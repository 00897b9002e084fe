"""Bound states of the square well with a logarithmic central spike.

The potential is ``V(x) = -2 g ln|x|`` for ``|x| < 1`` with hard walls at
``x = +-1``. The package provides first-order perturbation theory in closed
form, a parity-shooting eigensolver, elementary barrier approximations, and
the exponential change of variables ``x = -exp(-lambda)``.
"""

from .errors import (
    ApproximationDomainError,
    BracketError,
    ConfigurationError,
    DomainError,
    LogSpikeError,
    StateError,
    StiffnessError,
)
from .specfun import si
from .perturb import (
    CrossingEstimate,
    crossing,
    first_order,
    first_order_even,
    first_order_odd,
    first_order_quadrature,
    linear_energy,
    tail_bound_even,
    tail_bound_odd,
    unperturbed_energy,
)
from .integrate import IvpSolution, IvpState, integrate_ivp, sample_ivp
from .shooting import (
    EnergyLevel,
    ModelParams,
    Parity,
    WaveGrid,
    barrier_halfwidth,
    eigenvalue,
    mismatch,
    potential,
    rect_approx_energy,
    rect_approx_wavefunction,
    spectrum,
    wavefunction,
    wkb_approx_wavefunction,
)
from .transformed import (
    ConditioningRow,
    TransformedParams,
    backward_solve,
    conditioning_study,
    forward_solve,
    right_side_equivalence,
    transformed_coefficient,
)

__version__ = "0.1.0"
