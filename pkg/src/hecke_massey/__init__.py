"""Exact Hecke indefinite theta series and universal triple Massey systems.

Everything is computed in exact arithmetic (rationals and cyclotomic fields);
q-series are compared as truncated formal expansions.
"""

from .numeric import Cyclo, CycloOrderError, exp2pi, root_of_unity
from .qseries import QSeries
from .lattice import ArithProg, Lattice
from .geometry import DegreeTriple, ModuliParams, QuadForm, ZERO_PARAMS, quad_form_of
from .indeftheta import CosetFunction2, check_f_condition, theta_indef, theta_indef_shifted
from .massey import (
    MasseyTensor,
    mp_coefficient,
    universal_massey_kernel_exact,
    universal_massey_kernel_truncated,
    verify_thm1,
)
from .inversion import antisymmetrize, system_from_f, thm2_pipeline

__version__ = "0.1.0"
