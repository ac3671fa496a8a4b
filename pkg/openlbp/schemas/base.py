"""
Shared base for schemas that carry numpy arrays.
"""
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict


def frozen_array(value: Any, dtype: Any = np.float64) -> np.ndarray:
    """Copy ``value`` into a read-only array of ``dtype``."""
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


class ArrayModel(BaseModel):
    """Immutable model whose array fields compare by value."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __eq__(self, other: object) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        for name in type(self).model_fields:
            mine, theirs = getattr(self, name), getattr(other, name)
            if isinstance(mine, np.ndarray) or isinstance(theirs, np.ndarray):
                if not (
                    isinstance(mine, np.ndarray)
                    and isinstance(theirs, np.ndarray)
                    and mine.shape == theirs.shape
                    and np.array_equal(mine, theirs)
                ):
                    return False
            elif mine != theirs:
                return False
        return True
