"""Sparse multivariate polynomials over the rationals.

A :class:`Ring` fixes the ordered variable names; the first ``n_state``
variables are the state coordinates that vector fields differentiate, the
rest are parameters that only ever appear inside coefficients.

Terms are stored as ``{exponent tuple: Fraction}`` with no zero
coefficients and iterate in graded lexicographic order (higher total degree
first, then lexicographic in the declared variable order).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Ring",
    "Polynomial",
    "ContextError",
    "ParseError",
    "monomial_basis",
    "grlex_key",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "taylor_coefficients",
]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*\Z")


class ContextError(ValueError):
    """Operands live in different variable contexts."""


class ParseError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def grlex_key(exps: tuple[int, ...]):
    """Sort key putting monomials in graded lex order, largest first."""
    return (-sum(exps), tuple(-e for e in exps))


def _compositions(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(n - 1, d - first):
            yield (first,) + rest


def monomial_basis(n_vars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree ``degree``, in graded lex order.

    >>> monomial_basis(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    if n_vars < 1 or degree < 0:
        raise ValueError("need n_vars >= 1 and degree >= 0")
    out = list(_compositions(n_vars, degree))
    assert len(out) == comb(n_vars + degree - 1, degree)
    return out


@dataclass(frozen=True)
class Ring:
    """Ordered variable names with a state/parameter split."""

    names: tuple[str, ...]
    n_state: int = -1

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if self.n_state < 0:
            object.__setattr__(self, "n_state", len(names))
        if not 0 <= self.n_state <= len(names):
            raise ValueError("n_state out of range")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad variable name {name!r}")

    @classmethod
    def numbered(cls, n: int, prefix: str = "x", params: Sequence[str] = ()) -> "Ring":
        names = tuple(f"{prefix}{i + 1}" for i in range(n)) + tuple(params)
        return cls(names, n)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def state_names(self) -> tuple[str, ...]:
        return self.names[: self.n_state]

    @property
    def param_names(self) -> tuple[str, ...]:
        return self.names[self.n_state:]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ContextError(f"unknown variable {name!r}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: as_fraction(c)})

    def one(self) -> "Polynomial":
        return self.const(1)

    def gen(self, i: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): Fraction(1)})

    def var(self, name: str) -> "Polynomial":
        return self.gen(self.index(name))

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ContextError("exponent vector has wrong length")
        return Polynomial(self, {exps: as_fraction(coeff)})

    def state_monomials(self, degree: int) -> list[tuple[int, ...]]:
        """Monomials of the given degree in the state variables only,
        padded with zero parameter exponents."""
        pad = (0,) * (self.nvars - self.n_state)
        return [e + pad for e in monomial_basis(self.n_state, degree)]

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def extend(self, params: Sequence[str]) -> "Ring":
        return Ring(self.names + tuple(params), self.n_state)


class Polynomial:
    """Immutable sparse polynomial; see the module docstring."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], object] = ()):
        self.ring = ring
        clean = {}
        for exps, c in dict(terms).items():
            c = as_fraction(c)
            if c:
                if len(exps) != ring.nvars:
                    raise ContextError("exponent vector has wrong length")
                clean[tuple(exps)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # terms already clean: Fraction values, no zeros
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- access ---------------------------------------------------------
    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def state_degrees(self) -> set[int]:
        n = self.ring.n_state
        return {sum(e[:n]) for e in self._terms}

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) == d})

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self._terms)

    def constant_value(self) -> Fraction:
        if any(any(e) for e in self._terms):
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ContextError(f"variable contexts differ: {self.ring.names} vs {other.ring.names}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "Polynomial":
        c = as_fraction(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution -------------------------------------
    def diff(self, i: int) -> "Polynomial":
        if not 0 <= i < self.ring.nvars:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Polynomial._raw(self.ring, out)

    def compose(self, images: Sequence["Polynomial"], ring: Ring | None = None) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i`` (all variables)."""
        if len(images) != self.ring.nvars:
            raise ContextError("need one image per variable")
        if ring is None:
            ring = images[0].ring if images else self.ring
        for q in images:
            if q.ring != ring:
                raise ContextError("images must share the target ring")
        powers: list[list[Polynomial]] = [[ring.one()] for _ in images]

        def power(i, k):
            cache = powers[i]
            while len(cache) <= k:
                cache.append(cache[-1] * images[i])
            return cache[k]

        out: dict = {}
        for e, c in self._terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for e2, c2 in term._terms.items():
                out[e2] = out.get(e2, 0) + c2
        return Polynomial._raw(ring, {e: c for e, c in out.items() if c})

    def pullback(self, A: Sequence[Sequence]) -> "Polynomial":
        """``p o A``: state variables replaced by the entries of ``A x``."""
        n = self.ring.n_state
        if len(A) != n or any(len(row) != n for row in A):
            raise ValueError(f"matrix must be {n}x{n}")
        gens = self.ring.gens()
        images = []
        for row in A:
            acc = {}
            for j, a in enumerate(row):
                a = as_fraction(a)
                if a:
                    e = [0] * self.ring.nvars
                    e[j] = 1
                    acc[tuple(e)] = a
            images.append(Polynomial._raw(self.ring, acc))
        images.extend(gens[n:])
        return self.compose(images, self.ring)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value; ``point`` covers every variable, or only the state
        variables when no parameter occurs."""
        point = [as_fraction(v) for v in point]
        if len(point) == self.ring.n_state and self.ring.n_state < self.ring.nvars:
            if any(e[self.ring.n_state:] != (0,) * (self.ring.nvars - self.ring.n_state)
                   for e in self._terms):
                raise ValueError("polynomial involves parameters; give their values too")
            point = point + [Fraction(0)] * (self.ring.nvars - self.ring.n_state)
        if len(point) != self.ring.nvars:
            raise ValueError("point has wrong length")
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def to_ring(self, ring: Ring, mapping: Sequence[int] | None = None) -> "Polynomial":
        """Re-express in ``ring``; variable ``i`` goes to ``mapping[i]`` (by
        default matched by name). Raises if a used variable has no target."""
        if mapping is None:
            mapping = [ring.names.index(n) if n in ring.names else -1 for n in self.ring.names]
        out = {}
        for e, c in self._terms.items():
            e2 = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if mapping[i] < 0:
                        raise ContextError(f"variable {self.ring.names[i]} has no image")
                    e2[mapping[i]] += k
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c
        return Polynomial._raw(ring, {e: c for e, c in out.items() if c})

    def primitive(self) -> "Polynomial":
        """Scale to coprime integer coefficients with positive leading term."""
        from math import gcd, lcm
        if not self._terms:
            return self
        den = lcm(*(c.denominator for c in self._terms.values()))
        nums = [int(c * den) for c in self._terms.values()]
        g = gcd(*nums)
        lead = self.terms()[0][1]
        s = Fraction(den, g) * (1 if lead > 0 else -1)
        return self.scale(s)

    # -- text -----------------------------------------------------------
    def _mono_str(self, e):
        parts = []
        for name, k in zip(self.ring.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.terms()):
            mono = self._mono_str(e)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if idx == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, ring={self.ring.names})"


def taylor_coefficients(p: Polynomial, m: int) -> list[Polynomial]:
    """Coefficients of ``t^0..t^m`` in ``p(x_0 + t x_1 + ... + t^m x_m)``.

    The output ring has ``(m+1)*n`` state variables, block-major: block ``a``
    holds the copies ``<name>_<a>`` of the ``n`` state variables. Parameters
    of ``p`` are carried over unchanged after the blocks.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    src = p.ring
    n = src.n_state
    block_names = tuple(f"{name}_{a}" for a in range(m + 1) for name in src.state_names)
    out_ring = Ring(block_names + src.param_names, (m + 1) * n)
    tname = "t"
    while tname in out_ring.names:
        tname += "_"
    work = out_ring.extend([tname])
    t = work.gen(work.nvars - 1)
    images = []
    for i in range(n):
        img = work.zero()
        for a in range(m + 1):
            img = img + t ** a * work.gen(a * n + i)
        images.append(img)
    images.extend(work.gen((m + 1) * n + k) for k in range(len(src.param_names)))
    full = p.compose(images, work)
    buckets: list[dict] = [{} for _ in range(m + 1)]
    for e, c in full._terms.items():
        j = e[-1]
        if j <= m:
            buckets[j][e[:-1]] = c
    return [Polynomial._raw(out_ring, b) for b in buckets]


class _Parser:
    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")

    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            num, name, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif name is not None:
                self.tokens.append(("name", name))
            else:
                if op not in "+-*/^()":
                    raise ParseError(f"unexpected character {op!r} in {self.text!r}")
                self.tokens.append(("op", op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial text")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                try:
                    d = d.constant_value()
                except ValueError:
                    raise ParseError(f"division by a non-constant in {self.text!r}") from None
                if not d:
                    raise ParseError(f"division by zero in {self.text!r}")
                acc = acc / d
            else:
                return acc

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, k = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            return base ** k
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring.names:
                raise ParseError(f"unknown variable {val!r}; ring has {', '.join(self.ring.names)}")
            return self.ring.var(val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "op" and val == "-":
            return -self.power()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")
