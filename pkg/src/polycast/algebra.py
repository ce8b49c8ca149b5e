"""Sparse multivariate polynomials, monomial bases, and vector fields.

A polynomial is stored as a mapping from exponent tuples to float
coefficients, one non-negative integer exponent per variable.  Canonical
form merges duplicate monomials and drops coefficients smaller than
``COEFF_EPS`` in magnitude; all arithmetic returns canonical results.

The canonical term order is graded lexicographic: terms are sorted by
ascending total degree, and within a degree lexicographically with
variable 0 strongest (for three variables: x1^2, x1*x2, x1*x3, x2^2,
x2*x3, x3^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

Monomial = Tuple[int, ...]

# Coefficients below this magnitude are treated as exact zeros when a
# polynomial is put in canonical form.  Repeated directional derivatives
# would otherwise accumulate rounding-noise terms.
COEFF_EPS = 1e-15


def grlex_key(exponents: Sequence[int]) -> tuple:
    """Sort key realising graded-lexicographic order, variable 0 strongest."""
    return (sum(exponents), tuple(-e for e in exponents))


def monomial_label(exponents: Monomial) -> str:
    """Human-readable form of an exponent tuple, e.g. ``x1^2*x3``."""
    parts = []
    for i, e in enumerate(exponents):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts) if parts else "1"


class Polynomial:
    """Immutable sparse polynomial over ``variable_count`` real variables."""

    __slots__ = ("variable_count", "_terms")

    def __init__(self, variable_count: int, terms: Mapping[Monomial, float] | None = None):
        if variable_count < 1:
            raise ValueError(f"variable_count must be >= 1, got {variable_count}")
        merged: Dict[Monomial, float] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != variable_count:
                raise ValueError(
                    f"exponent tuple {exps} has length {len(exps)}, "
                    f"expected {variable_count}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff!r} for {exps}")
            merged[exps] = merged.get(exps, 0.0) + coeff
        self.variable_count = variable_count
        self._terms: Dict[Monomial, float] = {
            e: c for e, c in merged.items() if abs(c) >= COEFF_EPS
        }

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variable_count: int) -> "Polynomial":
        return cls(variable_count)

    @classmethod
    def constant(cls, variable_count: int, value: float) -> "Polynomial":
        return cls(variable_count, {(0,) * variable_count: value})

    @classmethod
    def variable(cls, variable_count: int, index: int) -> "Polynomial":
        """The coordinate polynomial x_{index} (0-based index)."""
        if not 0 <= index < variable_count:
            raise ValueError(
                f"variable index {index} out of range for {variable_count} variables"
            )
        exps = tuple(1 if i == index else 0 for i in range(variable_count))
        return cls(variable_count, {exps: 1.0})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, float]:
        return dict(self._terms)

    def ordered_terms(self) -> Tuple[Tuple[Monomial, float], ...]:
        """Terms in graded-lexicographic order."""
        return tuple(sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0])))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_degree(self) -> int:
        """Largest total degree among stored terms; 0 for the zero polynomial."""
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def coefficient(self, exponents: Sequence[int]) -> float:
        return self._terms.get(tuple(exponents), 0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.variable_count == other.variable_count
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.variable_count, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if self.is_zero:
            return "Polynomial(0)"
        parts = []
        for exps, coeff in self.ordered_terms():
            label = monomial_label(exps)
            if label == "1":
                parts.append(f"{coeff:g}")
            else:
                parts.append(f"{coeff:g}*{label}")
        return "Polynomial(" + " + ".join(parts) + ")"

    # -- arithmetic -----------------------------------------------------

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.variable_count != other.variable_count:
            raise ValueError(
                f"variable counts differ: {self.variable_count} vs "
                f"{other.variable_count}"
            )

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.variable_count, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            out[exps] = out.get(exps, 0.0) + coeff
        return Polynomial(self.variable_count, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(
            self.variable_count, {e: -c for e, c in self._terms.items()}
        )

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.variable_count, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial(
                self.variable_count,
                {e: c * float(other) for e, c in self._terms.items()},
            )
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        out: Dict[Monomial, float] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                out[key] = out.get(key, 0.0) + ca * cb
        return Polynomial(self.variable_count, out)

    __rmul__ = __mul__

    # -- calculus and evaluation ----------------------------------------

    def differentiate(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable ``index`` (0-based)."""
        if not 0 <= index < self.variable_count:
            raise ValueError(
                f"variable index {index} out of range for "
                f"{self.variable_count} variables"
            )
        out: Dict[Monomial, float] = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            lowered = tuple(
                v - 1 if i == index else v for i, v in enumerate(exps)
            )
            out[lowered] = out.get(lowered, 0.0) + coeff * e
        return Polynomial(self.variable_count, out)

    def evaluate(self, point: Sequence[float]) -> float:
        if len(point) != self.variable_count:
            raise ValueError(
                f"point has dimension {len(point)}, expected {self.variable_count}"
            )
        total = 0.0
        for exps, coeff in self._terms.items():
            term = coeff
            for x, e in zip(point, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    def __call__(self, point: Sequence[float]) -> float:
        return self.evaluate(point)


@dataclass(frozen=True)
class MonomialBasis:
    """An ordered set of monomials over a fixed number of variables.

    ``monomials`` is always in graded-lexicographic order and, when
    ``include_constant`` is false, omits the degree-0 monomial.
    """

    variable_count: int
    max_degree: int
    include_constant: bool
    monomials: Tuple[Monomial, ...]

    def __len__(self) -> int:
        return len(self.monomials)

    def design_columns(self, points: np.ndarray) -> np.ndarray:
        """Evaluate every monomial at every point.

        ``points`` has shape (rows, variable_count); the result has shape
        (rows, len(self)), column j holding monomial j evaluated row-wise.
        """
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[None, :]
        if points.shape[1] != self.variable_count:
            raise ValueError(
                f"points have dimension {points.shape[1]}, "
                f"expected {self.variable_count}"
            )
        exps = np.array(self.monomials, dtype=float).reshape(
            len(self.monomials), self.variable_count
        )
        return np.prod(points[:, None, :] ** exps[None, :, :], axis=2)


def format_term_lines(poly: Polynomial) -> str:
    """Serialize a polynomial as ``coefficient e1 e2 ... en`` lines.

    One canonical term per line in graded-lexicographic order; the zero
    polynomial serializes to the empty string.  Coefficients carry 17
    significant digits so the round trip is exact.
    """
    return "".join(
        format(coeff, ".17g") + " " + " ".join(str(e) for e in exps) + "\n"
        for exps, coeff in poly.ordered_terms()
    )


def parse_term_lines(text: str, variable_count: int) -> Polynomial:
    """Inverse of format_term_lines; blank lines are skipped."""
    terms: Dict[Monomial, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != variable_count + 1:
            raise ValueError(
                f"line {lineno}: expected coefficient plus {variable_count} "
                f"exponents, got {line!r}"
            )
        exps = tuple(int(e) for e in parts[1:])
        terms[exps] = terms.get(exps, 0.0) + float(parts[0])
    return Polynomial(variable_count, terms)


def enumerate_monomials(
    variable_count: int, max_degree: int, include_constant: bool = True
) -> MonomialBasis:
    """All monomials of total degree <= ``max_degree``, graded-lex ordered.

    With the constant included the basis has C(max_degree + n, n) members
    for n variables; without it, one fewer.
    """
    if variable_count < 1:
        raise ValueError(f"variable_count must be >= 1, got {variable_count}")
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    monos = []
    lo = 0 if include_constant else 1
    for degree in range(lo, max_degree + 1):
        for combo in combinations_with_replacement(range(variable_count), degree):
            exps = [0] * variable_count
            for var in combo:
                exps[var] += 1
            monos.append(tuple(exps))
    monos.sort(key=grlex_key)
    return MonomialBasis(variable_count, max_degree, include_constant, tuple(monos))


@dataclass(frozen=True)
class VectorField:
    """A polynomial vector field: component i gives dx_i/dt."""

    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("vector field needs at least one component")
        n = len(self.components)
        for i, comp in enumerate(self.components):
            if comp.variable_count != n:
                raise ValueError(
                    f"component {i} is over {comp.variable_count} variables, "
                    f"expected {n}"
                )

    @property
    def dimension(self) -> int:
        return len(self.components)

    def evaluate(self, state: Sequence[float]) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        if state.shape != (self.dimension,):
            raise ValueError(
                f"state has shape {state.shape}, expected ({self.dimension},)"
            )
        return np.array([c.evaluate(state) for c in self.components])


def lie_derivative(field: VectorField, poly: Polynomial) -> Polynomial:
    """Directional derivative of ``poly`` along ``field``.

    Returns sum_i f_i * d(poly)/dx_i, the action of the generator
    X = sum_i f_i d/dx_i on a scalar polynomial.
    """
    if poly.variable_count != field.dimension:
        raise ValueError(
            f"polynomial is over {poly.variable_count} variables, "
            f"field has dimension {field.dimension}"
        )
    out = Polynomial.zero(poly.variable_count)
    for i, f_i in enumerate(field.components):
        out = out + f_i * poly.differentiate(i)
    return out
