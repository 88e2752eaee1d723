"""Scalar-field abstraction over R and C.

Complex vectors in C^d are stored as 2d interleaved real coordinates:
complex coordinate j occupies real slots (2j, 2j+1).  The Hermitian inner
product is linear in the FIRST argument and conjugate-linear in the second;
this convention is fixed globally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ScalarField:
    tag: str  # "R" or "C"
    real_dim: int  # dim_R(F): 1 for R, 2 for C

    def __post_init__(self):
        if self.tag not in ("R", "C"):
            raise ValueError(f"unknown field tag {self.tag!r}")
        expected = 1 if self.tag == "R" else 2
        if self.real_dim != expected:
            raise ValueError(f"field {self.tag} must have real_dim {expected}")

    @property
    def is_complex(self) -> bool:
        return self.tag == "C"


REAL = ScalarField("R", 1)
COMPLEX = ScalarField("C", 2)


def field_from_tag(tag: str) -> ScalarField:
    if tag == "R":
        return REAL
    if tag == "C":
        return COMPLEX
    raise ValueError(f"unknown field tag {tag!r}")


def as_field_array(field: ScalarField, coords) -> np.ndarray:
    """Interleaved real storage -> numpy array over F (float64 or complex128).

    Accepts a single vector (1-D) or a stack of vectors (2-D, one per row).
    """
    a = np.asarray(coords, dtype=np.float64)
    if not field.is_complex:
        return a
    if a.shape[-1] % 2 != 0:
        raise ValueError("complex storage length must be even")
    return a[..., 0::2] + 1j * a[..., 1::2]


def as_real_coords(field: ScalarField, values: np.ndarray) -> np.ndarray:
    """Inverse of :func:`as_field_array`: back to interleaved real storage."""
    if not field.is_complex:
        return np.asarray(values, dtype=np.float64)
    v = np.asarray(values, dtype=np.complex128)
    out = np.empty(v.shape[:-1] + (2 * v.shape[-1],), dtype=np.float64)
    out[..., 0::2] = v.real
    out[..., 1::2] = v.imag
    return out


def herm(field: ScalarField, x, y):
    """<x, y>: linear in x, conjugate-linear in y.  Inputs in F-array form."""
    x = np.asarray(x)
    y = np.asarray(y)
    if field.is_complex:
        return np.sum(x * np.conj(y), axis=-1)
    return np.sum(x * y, axis=-1)


def apply_J(coords) -> np.ndarray:
    """Complex-structure operator on interleaved storage: (x, y) -> (-y, x)."""
    a = np.asarray(coords, dtype=np.float64)
    out = np.empty_like(a)
    out[..., 0::2] = -a[..., 1::2]
    out[..., 1::2] = a[..., 0::2]
    return out


def field_dim(field: ScalarField, coords) -> int:
    """F-dimension of a vector given in interleaved real storage."""
    n = np.asarray(coords).shape[-1]
    if n % field.real_dim != 0:
        raise ValueError("storage length not divisible by real_dim")
    return n // field.real_dim
