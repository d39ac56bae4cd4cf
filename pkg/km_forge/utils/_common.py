from typing import Optional, Tuple

import numpy as np


def str_to_enum(str_enum_class, str_value: str, ignore_not_found: bool = False, enum_default=None):
    for key, member in str_enum_class.__members__.items():
        if str_value == member.value:
            return member
    if ignore_not_found:
        return enum_default
    raise ValueError(f"Invalid enum value: {str_value}")


def table_dtype(n: int):
    return np.uint8 if n <= 256 else np.int32


def valuation_grid(n: int, nvars: int) -> np.ndarray:
    """All assignments of nvars variables over n elements, one column per valuation.

    Columns run in lexicographic order with variable 0 most significant, so the first failing column of a
    vectorized check is the first counterexample in enumeration order.
    """
    if nvars == 0:
        return np.zeros((0, 1), dtype=table_dtype(n))
    grid = np.indices((n,) * nvars, dtype=table_dtype(n))
    return grid.reshape(nvars, -1)


def first_true(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(i) for i in hits[0])


def readonly(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.flags.writeable = False
    return array
