"""Inverting a filtered map F = F0 + l over the two-element field.

F0 keeps the filtration level and l strictly lowers it, so l F0^-1 is
nilpotent and F^-1 = F0^-1 (I + l F0^-1 + (l F0^-1)^2 + ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class SingularPreservingPart(ValueError):
    pass


class NotStrictlyLower(ValueError):
    pass


def _mod2(m) -> np.ndarray:
    return (np.asarray(m, dtype=np.int64) & 1).astype(np.uint8)


def matmul2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _mod2(a.astype(np.int64) @ b.astype(np.int64))


def inverse_mod2(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    aug = np.concatenate([_mod2(m), np.eye(n, dtype=np.uint8)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r, c]), None)
        if piv is None:
            raise SingularPreservingPart("level-preserving part is singular")
        if piv != c:
            aug[[c, piv]] = aug[[piv, c]]
        rows = np.nonzero(aug[:, c])[0]
        for r in rows:
            if r != c:
                aug[r] ^= aug[c]
    return aug[:, n:]


@dataclass
class FilteredLinearMap:
    """matrix[i, j] is the coefficient of basis element i in F(basis j).

    Source and target share one basis; levels[i] is its filtration level.
    """

    matrix: np.ndarray
    levels: Sequence

    def __post_init__(self):
        self.matrix = _mod2(self.matrix)
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n) or len(self.levels) != n:
            raise ValueError("need a square matrix with one level per basis element")
        self.levels = [Fraction(x) if not isinstance(x, float) else Fraction(str(x)) for x in self.levels]

    def parts(self) -> tuple[np.ndarray, np.ndarray]:
        n = len(self.levels)
        same = np.array([[self.levels[i] == self.levels[j] for j in range(n)] for i in range(n)], dtype=bool)
        lower = np.array([[self.levels[i] < self.levels[j] for j in range(n)] for i in range(n)], dtype=bool)
        raising = self.matrix.astype(bool) & ~same & ~lower
        if raising.any():
            i, j = map(int, np.argwhere(raising)[0])
            raise NotStrictlyLower(f"entry ({i}, {j}) raises the level from {self.levels[j]} to {self.levels[i]}")
        return _mod2(self.matrix * same), _mod2(self.matrix * lower)


def invert_filtered(F: FilteredLinearMap) -> np.ndarray:
    F0, ell = F.parts()
    n = F0.shape[0]
    F0inv = inverse_mod2(F0)
    step = matmul2(ell, F0inv)
    total = np.eye(n, dtype=np.uint8)
    power = np.eye(n, dtype=np.uint8)
    for _ in range(n + 1):
        power = matmul2(power, step)
        if not power.any():
            break
        total ^= power
    else:
        raise NotStrictlyLower("l F0^-1 is not nilpotent")
    inv = matmul2(F0inv, total)
    eye = np.eye(n, dtype=np.uint8)
    if not (np.array_equal(matmul2(F.matrix, inv), eye) and np.array_equal(matmul2(inv, F.matrix), eye)):
        raise ArithmeticError("computed inverse fails the identity check")
    return inv
