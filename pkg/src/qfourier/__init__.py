"""Fourier analysis on the 2-box spaces of group subfactors."""

from .algebra import (
    MINUS,
    PLUS,
    Shading,
    TwoBox,
    adjoint,
    contragredient,
    coproduct,
    identity,
    isft,
    jones_projection,
    multiply,
    norm2,
    pnorm,
    sft,
    trace,
)
from .biprojection import (
    b1_projection,
    b2_projection,
    cesaro_mean,
    enumerate_biprojections,
    generated_biprojection,
    is_biprojection,
    is_bishift,
    make_bishift_abelian,
    ras,
    shift_set,
)
from .blockmap import b_cm, b_lambda, b_mc, entropy, iterate
from .groups import FiniteGroup, group_from_spec, read_group_table
from .inequalities import (
    hausdorff_young_check,
    inverse_sumset_certify,
    sumset_bounds,
    upper_sumset_certify,
    young_check,
)
from .ising import BETA_C, critical_beta, ising_twobox, phase_scan, t_step

__version__ = "0.1.0"

__all__ = [
    "adjoint",
    "b1_projection",
    "b2_projection",
    "b_cm",
    "b_lambda",
    "b_mc",
    "BETA_C",
    "cesaro_mean",
    "contragredient",
    "coproduct",
    "critical_beta",
    "entropy",
    "enumerate_biprojections",
    "FiniteGroup",
    "generated_biprojection",
    "group_from_spec",
    "hausdorff_young_check",
    "identity",
    "inverse_sumset_certify",
    "is_biprojection",
    "is_bishift",
    "isft",
    "ising_twobox",
    "iterate",
    "jones_projection",
    "make_bishift_abelian",
    "MINUS",
    "multiply",
    "norm2",
    "phase_scan",
    "PLUS",
    "pnorm",
    "ras",
    "read_group_table",
    "sft",
    "Shading",
    "shift_set",
    "sumset_bounds",
    "t_step",
    "trace",
    "TwoBox",
    "upper_sumset_certify",
    "young_check",
]
