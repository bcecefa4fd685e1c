from typing import Any

from fpme_lab.utils.attr_dict import AttrDict
from fpme_lab.utils.seeds import derive_seed, make_rng, splitmix64

__all__ = ["field_required", "AttrDict", "splitmix64", "derive_seed", "make_rng"]


def field_required() -> Any:
    """
    Use as a dataclass field default_factory argument to indicate
    a required, keyword-only field.
    """
    raise TypeError("Missing required keyword-only argument")
