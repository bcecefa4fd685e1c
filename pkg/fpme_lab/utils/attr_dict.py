from typing import Any

__all__ = ["AttrDict"]


class AttrDict(dict):
    """
    Mapping mixin allowing `instance.key` in place of `instance["key"]`.

    Names that are real attributes of the class win over keys.
    """

    def __getattr__(self, item: str) -> Any:
        if item in self:
            return self[item]

        raise AttributeError(f"{type(self).__name__!s} has no key or attribute {item!r}")
