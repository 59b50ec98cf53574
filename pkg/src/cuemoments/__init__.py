"""Numerics for the distinguished sigma-Painleve III' solution v(z;s), the
CUE joint-moment leading coefficients F(s,h), their finite-N Hankel-
determinant counterparts F_N(s,h), and the Hua-Pickrell density rho^(s).

Every reported quantity is triangulated by at least two independent
representations; the acceptance suite (`cuemoments accept`) exercises the
full identity web.
"""

from .charfn import CharFnTable, build_charfn, u_deriv_at
from .density import DensityGrid, density_eval, density_moment, hp_kernel
from .finite_n import (cue_weyl_quadrature, f_finite_n, selberg_product,
                       v_finite_n, w_hankel)
from .moments import (F_kernel_eps, F_moment, MomentResult,
                      arithmetic_factor, divergence_probe,
                      hua_pickrell_moment)
from .painleve import (PainleveJet, sigma_residual, solve_painleve,
                       v_dispatch, v_large_z_asymptote)

__version__ = "0.1.0"

__all__ = [
    "CharFnTable", "build_charfn", "u_deriv_at",
    "DensityGrid", "density_eval", "density_moment", "hp_kernel",
    "cue_weyl_quadrature", "f_finite_n", "selberg_product", "v_finite_n",
    "w_hankel",
    "F_kernel_eps", "F_moment", "MomentResult", "arithmetic_factor",
    "divergence_probe", "hua_pickrell_moment",
    "PainleveJet", "sigma_residual", "solve_painleve", "v_dispatch",
    "v_large_z_asymptote",
    "__version__",
]
