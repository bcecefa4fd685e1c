from fpme_lab.kernel.alias import AliasTable
from fpme_lab.kernel.constants import (
    check_gamma,
    delta_gamma,
    normalizer,
    riesz_constant,
    symbol_constant,
)
from fpme_lab.kernel.jump_kernel import JumpKernel

__all__ = [
    "AliasTable",
    "JumpKernel",
    "check_gamma",
    "delta_gamma",
    "normalizer",
    "riesz_constant",
    "symbol_constant",
]
