"""Unitarily invariant norms evaluated from singular values.

Selector grammar (CLI and reports): ``op | tr | fro | sch:<p> | kyfan:<k>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import singular_values

_TAGS = ("operator", "trace", "frobenius", "schatten", "kyfan")


@dataclass(frozen=True)
class NormKind:
    tag: str
    p: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown norm tag {self.tag!r}")
        if self.tag == "schatten":
            if self.p is None or not self.p >= 1:
                raise ValueError(f"Schatten exponent must be >= 1, got {self.p}")
        if self.tag == "kyfan":
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ValueError(f"Ky Fan index must be a positive integer, got {self.k}")

    @classmethod
    def operator(cls) -> "NormKind":
        return cls("operator")

    @classmethod
    def trace(cls) -> "NormKind":
        return cls("trace")

    @classmethod
    def frobenius(cls) -> "NormKind":
        return cls("frobenius")

    @classmethod
    def schatten(cls, p: float) -> "NormKind":
        return cls("schatten", p=float(p))

    @classmethod
    def kyfan(cls, k: int) -> "NormKind":
        return cls("kyfan", k=int(k))

    def __str__(self) -> str:
        if self.tag == "schatten":
            return f"sch:{self.p:g}"
        if self.tag == "kyfan":
            return f"kyfan:{self.k}"
        return {"operator": "op", "trace": "tr", "frobenius": "fro"}[self.tag]

    def of_singular_values(self, s: np.ndarray) -> np.ndarray:
        """Symmetric gauge function applied along the last axis of ``s``."""
        s = np.asarray(s, dtype=float)
        if self.tag == "operator":
            return s[..., 0]
        if self.tag == "trace":
            return s.sum(axis=-1)
        if self.tag == "frobenius":
            return np.sqrt(np.sum(s * s, axis=-1))
        if self.tag == "kyfan":
            if self.k > s.shape[-1]:
                raise ValueError(f"Ky Fan index {self.k} exceeds matrix dimension {s.shape[-1]}")
            return s[..., : self.k].sum(axis=-1)
        # schatten: scale by the top singular value to avoid overflow for large p
        top = s[..., :1]
        safe = np.where(top > 0, top, 1.0)
        return safe[..., 0] * np.sum((s / safe) ** self.p, axis=-1) ** (1.0 / self.p)


def parse_norm(text: str) -> NormKind:
    """Parse ``op``, ``tr``, ``fro``, ``sch:<p>`` or ``kyfan:<k>``."""
    text = text.strip().lower()
    simple = {"op": NormKind.operator, "tr": NormKind.trace, "fro": NormKind.frobenius}
    if text in simple:
        return simple[text]()
    head, sep, arg = text.partition(":")
    if sep and head == "sch":
        return NormKind.schatten(float(arg))
    if sep and head == "kyfan":
        if not arg.isdigit():
            raise ValueError(f"Ky Fan index must be an integer: {text!r}")
        return NormKind.kyfan(int(arg))
    raise ValueError(f"unrecognised norm selector {text!r}; use op | tr | fro | sch:<p> | kyfan:<k>")


def unorm(X, kind: NormKind):
    """Unitarily invariant norm of ``X`` (or of each matrix in a stack)."""
    value = kind.of_singular_values(singular_values(X))
    return float(value) if np.ndim(value) == 0 else value
