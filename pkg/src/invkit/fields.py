"""Polynomial vector fields on the state coordinates of a ring.

Sign convention: ``field_from_matrix(A)`` is ``x -> A x``, i.e. the
derivation ``sum_i (A x)_i d/dx_i``. With this choice

    commutator(field_from_matrix(A), field_from_matrix(B))
        == field_from_matrix(B @ A - A @ B),

so the field map is an anti-homomorphism for the matrix commutator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import ContextError, Polynomial, Ring, as_fraction

__all__ = [
    "VectorField",
    "field_from_matrix",
    "rep_fields",
    "apply_field",
    "commutator",
]


@dataclass(frozen=True)
class VectorField:
    ring: Ring
    coeffs: tuple[Polynomial, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.ring.n_state:
            raise ContextError(f"need {self.ring.n_state} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if c.ring != self.ring:
                raise ContextError("coefficient lives in a different ring")

    @classmethod
    def parse(cls, ring: Ring, texts: Sequence[str]) -> "VectorField":
        return cls(ring, tuple(ring.parse(t) for t in texts))

    @classmethod
    def zero(cls, ring: Ring) -> "VectorField":
        return cls(ring, tuple(ring.zero() for _ in range(ring.n_state)))

    @property
    def n(self) -> int:
        return self.ring.n_state

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_field(self, p)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def times(self, phi: Polynomial) -> "VectorField":
        """Multiply every coefficient by the function ``phi``."""
        return VectorField(self.ring, tuple(phi * c for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_linear(self) -> bool:
        """Every coefficient is a linear form in the state variables."""
        n = self.ring.n_state
        for c in self.coeffs:
            for e, _ in c.terms():
                if sum(e[:n]) != 1 or any(e[n:]):
                    return False
        return True

    def matrix(self) -> list[list[Fraction]]:
        if not self.is_linear():
            raise ValueError("field is not linear")
        n = self.n
        out = [[Fraction(0)] * n for _ in range(n)]
        for i, c in enumerate(self.coeffs):
            for e, v in c.terms():
                out[i][e.index(1)] = v
        return out

    def __str__(self):
        parts = []
        for name, c in zip(self.ring.state_names, self.coeffs):
            if c:
                parts.append(f"({c})*d/d{name}")
        return " + ".join(parts) or "0"


def field_from_matrix(A: Sequence[Sequence], ring: Ring | None = None) -> VectorField:
    n = len(A)
    if ring is None:
        ring = Ring.numbered(n)
    if ring.n_state != n or any(len(r) != n for r in A):
        raise ContextError(f"matrix must be {ring.n_state}x{ring.n_state}")
    coeffs = []
    for row in A:
        acc = {}
        for j, a in enumerate(row):
            a = as_fraction(a)
            if a:
                e = [0] * ring.nvars
                e[j] = 1
                acc[tuple(e)] = a
        coeffs.append(Polynomial(ring, acc))
    return VectorField(ring, tuple(coeffs))


def rep_fields(rep, ring: Ring | None = None) -> list[VectorField]:
    """One linear field per basis element of the represented algebra."""
    ring = ring or rep.ring
    return [field_from_matrix(M, ring) for M in rep.matrices]


def apply_field(L: VectorField, p: Polynomial) -> Polynomial:
    """``sum_i L_i * dp/dx_i`` over the state variables only."""
    if L.ring != p.ring:
        raise ContextError("field and polynomial live in different rings")
    out = p.ring.zero()
    for i, c in enumerate(L.coeffs):
        if c:
            d = p.diff(i)
            if d:
                out = out + c * d
    return out


def commutator(L: VectorField, M: VectorField) -> VectorField:
    if L.ring != M.ring:
        raise ContextError("fields live in different rings")
    return VectorField(L.ring, tuple(apply_field(L, m) - apply_field(M, l)
                                     for l, m in zip(L.coeffs, M.coeffs)))
