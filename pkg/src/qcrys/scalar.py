"""Exact scalar arithmetic: Laurent polynomials, symbolic q-brackets and
their identities, q-combinatorics, and radicals (sums of c*sqrt(m)).

Everything in this module is exact rational arithmetic over ``Fraction``;
no floating point appears anywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint

__all__ = [
    "Laurent",
    "SymBracket",
    "Radical",
    "IdentityVerdict",
    "qint",
    "qint_at",
    "qbinom",
    "qint_sym",
    "sym_bracket",
    "serre_identity_sum",
    "serre_identity_verdict",
    "check_serre_identity",
    "check_bracket_identity_A",
    "check_bracket_identity_C",
    "half_bracket_product",
    "sqrt_rat",
    "ensure_positive_q",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def ensure_positive_q(q) -> Fraction:
    """Validate and normalize a deformation parameter."""
    q = _frac(q)
    if q <= 0:
        raise ValueError("deformation parameter q must be a positive rational")
    return q


def _udiv(num: dict[int, Fraction], den: dict[int, Fraction]) -> dict[int, Fraction]:
    """Exact division of univariate Laurent polynomials given as
    exponent -> coefficient maps.  Raises ArithmeticError when the division
    is not exact."""
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if not num:
        return {}
    nmin = min(num)
    dmin = min(den)
    rem = {e - nmin: c for e, c in num.items()}
    div = {e - dmin: c for e, c in den.items()}
    ddeg = max(div)
    dlead = div[ddeg]
    quot: dict[int, Fraction] = {}
    while rem:
        rdeg = max(rem)
        if rdeg < ddeg:
            raise ArithmeticError("polynomial division is not exact")
        f = rem[rdeg] / dlead
        quot[rdeg - ddeg] = f
        for e, c in div.items():
            pos = rdeg - ddeg + e
            val = rem.get(pos, Fraction(0)) - f * c
            if val:
                rem[pos] = val
            else:
                rem.pop(pos, None)
    shift = nmin - dmin
    return {e + shift: c for e, c in quot.items()}


class Laurent:
    """Laurent polynomial in ``nvars`` commuting variables over Q.

    Variable 0 is the deformation parameter q throughout the package;
    higher variables stand for formal powers such as Q = q^N.  Terms map
    exponent tuples to nonzero rational coefficients, so equality is
    structural and exact.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                c = _frac(c)
                if not c:
                    continue
                key = tuple(int(e) for e in exps)
                if len(key) != nvars:
                    raise ValueError("exponent tuple has wrong arity")
                clean[key] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Laurent":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "Laurent":
        return cls(nvars, {(0,) * nvars: _frac(c)})

    @classmethod
    def one(cls, nvars: int) -> "Laurent":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, index: int, power: int = 1) -> "Laurent":
        exps = [0] * nvars
        exps[index] = power
        return cls(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exps, coeff=1) -> "Laurent":
        return cls(nvars, {tuple(exps): _frac(coeff)})

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "Laurent | None":
        if isinstance(other, Laurent):
            if other.nvars != self.nvars:
                raise ValueError("mixed variable counts")
            return other
        if isinstance(other, (int, Fraction)):
            return Laurent.const(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for exps, c in other.terms.items():
            acc[exps] = acc.get(exps, Fraction(0)) + c
        return Laurent(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            s = _frac(other)
            return Laurent(self.nvars, {e: c * s for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc[key] = acc.get(key, Fraction(0)) + c1 * c2
        return Laurent(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            raise ValueError("negative powers of polynomials are not defined")
        out = Laurent.one(self.nvars)
        for _ in range(power):
            out = out * self
        return out

    def __eq__(self, other):
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return self.terms == coerced.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "Laurent(0)"
        bits = [f"{c}*x{e}" for e, c in sorted(self.terms.items())]
        return "Laurent(" + " + ".join(bits) + ")"

    # -- evaluation and substitution ----------------------------------------

    def eval(self, point) -> Fraction:
        """Exact value at a tuple of rational coordinates."""
        vals = tuple(_frac(p) for p in point)
        if len(vals) != self.nvars:
            raise ValueError("evaluation point has wrong arity")
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                term *= v**e
            total += term
        return total

    def collapse(self, src: int, power: int, dst: int = 0) -> "Laurent":
        """Substitute variable ``src`` := (variable ``dst``)**power and
        remove variable ``src``."""
        if src == dst:
            raise ValueError("source and destination variables coincide")
        acc: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            lst = list(exps)
            lst[dst] += power * lst[src]
            del lst[src]
            key = tuple(lst)
            acc[key] = acc.get(key, Fraction(0)) + c
        return Laurent(self.nvars - 1, acc)

    def lift(self, nvars: int, positions) -> "Laurent":
        """Re-embed into a ring with ``nvars`` variables, sending old
        variable i to new variable positions[i]."""
        positions = tuple(positions)
        if len(positions) != self.nvars:
            raise ValueError("positions must list every old variable")
        acc = {}
        for exps, c in self.terms.items():
            lst = [0] * nvars
            for i, e in enumerate(exps):
                lst[positions[i]] += e
            acc[tuple(lst)] = c
        return Laurent(nvars, acc)

    def divexact(self, other: "Laurent") -> "Laurent":
        """Exact division by a divisor supported on a single variable.

        Raises ArithmeticError when the division is not exact."""
        if other.nvars != self.nvars:
            raise ValueError("mixed variable counts")
        support = {i for exps in other.terms for i, e in enumerate(exps) if e}
        if len(support) > 1:
            raise NotImplementedError("divisor must involve a single variable")
        v = support.pop() if support else 0
        den = {exps[v]: c for exps, c in other.terms.items()}
        groups: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for exps, c in self.terms.items():
            key = exps[:v] + exps[v + 1 :]
            groups.setdefault(key, {})[exps[v]] = c
        out: dict[tuple[int, ...], Fraction] = {}
        for key, num in groups.items():
            for e, c in _udiv(num, den).items():
                out[key[:v] + (e,) + key[v:]] = c
        return Laurent(self.nvars, out)


def _qcomm(nvars: int) -> Laurent:
    """The commutator denominator q - q^(-1)."""
    return Laurent.var(nvars, 0, 1) - Laurent.var(nvars, 0, -1)


class SymBracket:
    """Quotient  num / (q - q^(-1))**den_pow  of Laurent polynomials.

    A q-bracket of a symbolic argument, [z*N + c]_q with Q = q^N formal,
    is not itself a Laurent polynomial, but its numerator
    q^c Q^z - q^(-c) Q^(-z) is.  Sums and products of such quotients reduce
    back to honest Laurent polynomials whenever the division by
    q - q^(-1) is exact; the constructor performs that reduction eagerly,
    so zero tests and equality are exact for all q and all N at once.
    """

    __slots__ = ("num", "den_pow")

    def __init__(self, num: Laurent, den_pow: int = 0):
        if den_pow < 0:
            raise ValueError("denominator power must be non-negative")
        if num.is_zero():
            den_pow = 0
        else:
            comm = _qcomm(num.nvars)
            while den_pow > 0:
                try:
                    num = num.divexact(comm)
                except ArithmeticError:
                    break
                den_pow -= 1
        self.num = num
        self.den_pow = den_pow

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def _coerce(self, other) -> "SymBracket | None":
        if isinstance(other, SymBracket):
            if other.nvars != self.nvars:
                raise ValueError("mixed variable counts")
            return other
        if isinstance(other, Laurent):
            return SymBracket(other)
        if isinstance(other, (int, Fraction)):
            return SymBracket(Laurent.const(self.nvars, other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        comm = _qcomm(self.nvars)
        den = max(self.den_pow, other.den_pow)
        a = self.num * comm ** (den - self.den_pow)
        b = other.num * comm ** (den - other.den_pow)
        return SymBracket(a + b, den)

    __radd__ = __add__

    def __neg__(self):
        return SymBracket(-self.num, self.den_pow)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymBracket(self.num * other, self.den_pow)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return SymBracket(self.num * other.num, self.den_pow + other.den_pow)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.num, self.den_pow))

    def __repr__(self):
        return f"SymBracket({self.num!r}, den_pow={self.den_pow})"

    def specialize(self, k: int) -> Laurent:
        """Substitute Q := q**k (two-variable quotients only) and clear the
        denominator exactly, returning a Laurent polynomial in q."""
        if self.nvars != 2:
            raise ValueError("specialize applies to two-variable quotients")
        num = self.num.collapse(1, k)
        comm = _qcomm(1)
        for _ in range(self.den_pow):
            num = num.divexact(comm)
        return num


# -- q-combinatorics ---------------------------------------------------------


@lru_cache(maxsize=None)
def _qint_terms(x: int) -> tuple[tuple[int, int], ...]:
    if x == 0:
        return ()
    if x < 0:
        return tuple((e, -c) for e, c in _qint_terms(-x))
    return tuple((x - 1 - 2 * k, 1) for k in range(x))


def qint(x: int) -> Laurent:
    """The symmetric q-integer [x]_q as an explicit exponent sum.

    [x]_q = q^(x-1) + q^(x-3) + ... + q^(1-x) for x > 0, with [0]_q = 0 and
    [-x]_q = -[x]_q.  Because the sum is explicit the value is regular at
    q = 1, where it equals x.
    """
    return Laurent(1, {(e,): c for e, c in _qint_terms(int(x))})


@lru_cache(maxsize=None)
def _qint_at(x: int, q: Fraction) -> Fraction:
    total = Fraction(0)
    for e, c in _qint_terms(x):
        total += c * q**e
    return total


def qint_at(x: int, q) -> Fraction:
    """Exact value of [x]_q at a positive rational q (q = 1 included)."""
    return _qint_at(int(x), ensure_positive_q(q))


@lru_cache(maxsize=None)
def _qbinom(m: int, k: int) -> Laurent:
    if k == 0 or k == m:
        return Laurent.one(1)
    up = Laurent.var(1, 0, k) * _qbinom(m - 1, k)
    down = Laurent.var(1, 0, k - m) * _qbinom(m - 1, k - 1)
    return up + down


def qbinom(m: int, k: int) -> Laurent:
    """Balanced Gaussian binomial [m choose k]_q.

    Computed with the q-Pascal recurrence
    [m;k] = q^k [m-1;k] + q^(k-m) [m-1;k-1]; the value at q = 1 is the
    ordinary binomial coefficient.
    """
    if m < 0 or k < 0 or k > m:
        raise ValueError("require 0 <= k <= m")
    return _qbinom(int(m), int(k))


def sym_bracket(nvars: int, c: int, zvec) -> SymBracket:
    """Symbolic bracket [c + sum_i z_i N_i]_q with Q_i = q^(N_i) formal,
    as the quotient (q^c prod Q_i^(z_i) - inverse) / (q - q^(-1))."""
    zvec = tuple(int(z) for z in zvec)
    if len(zvec) != nvars - 1:
        raise ValueError("one z per formal variable required")
    plus = Laurent.monomial(nvars, (c,) + zvec)
    minus = Laurent.monomial(nvars, tuple(-e for e in (c,) + zvec))
    return SymBracket(plus - minus, 1)


def qint_sym(c: int, z_coeff: int) -> SymBracket:
    """Symbolic bracket [z_coeff*N + c]_q over the two variables (q, Q).

    Specializing Q := q**k recovers qint(z_coeff*k + c) exactly.
    """
    return sym_bracket(2, int(c), (int(z_coeff),))


# -- bracket identities ------------------------------------------------------


@dataclass(frozen=True)
class IdentityVerdict:
    """Outcome of the alternating bracket identity check.

    ``symbolic`` means the sum is zero for all q and all N at once (zero as
    a two-variable quotient); ``at_q1`` means it is zero for all N after
    setting q = 1.  The classical Serre arguments only consume the q = 1
    form, while the deformed ones need the symbolic form.
    """

    symbolic: bool
    at_q1: bool

    @property
    def holds(self) -> bool:
        return self.symbolic or self.at_q1


def serre_identity_sum(a: int, z: int) -> SymBracket:
    """The alternating sum  sum_n (-1)^n [1+a; n]_q [N - n*z]_q  as an exact
    two-variable quotient."""
    if a < 1:
        raise ValueError("require a >= 1")
    total = SymBracket(Laurent.zero(2))
    for n in range(a + 2):
        coeff = qbinom(1 + a, n).lift(2, (0,))
        term = qint_sym(-n * z, 1) * coeff
        if n % 2:
            term = -term
        total = total + term
    return total


def serre_identity_verdict(a: int, z: int) -> IdentityVerdict:
    symbolic = serre_identity_sum(a, z).is_zero()
    # Independent q = 1 route: the sum degenerates to a linear polynomial
    # s0*N - z*s1 in N, with ordinary alternating binomial sums s0, s1.
    s0 = sum((-1) ** n * math.comb(a + 1, n) for n in range(a + 2))
    s1 = sum((-1) ** n * n * math.comb(a + 1, n) for n in range(a + 2))
    at_q1 = s0 == 0 and z * s1 == 0
    return IdentityVerdict(symbolic=symbolic, at_q1=at_q1)


def check_serre_identity(a: int, z: int) -> bool:
    """True when the alternating bracket identity holds in the mode some
    Serre-relation argument can consume: for all q and all N, or else for
    all N at q = 1 (the classical case)."""
    return serre_identity_verdict(a, z).holds


def check_bracket_identity_A() -> bool:
    """[N1]_q [N2+1]_q - [N1+1]_q [N2]_q = [N1-N2]_q, exactly, as a
    trivariate identity in (q, q^N1, q^N2)."""
    b = lambda c, zv: sym_bracket(3, c, zv)
    lhs = b(0, (1, 0)) * b(1, (0, 1)) - b(1, (1, 0)) * b(0, (0, 1))
    rhs = b(0, (1, -1))
    return (lhs - rhs).is_zero()


def check_bracket_identity_C() -> bool:
    """[N-1]_q [-N]_q - [N+1]_q [-N-2]_q = [2N+1]_q (q + q^(-1)), exactly,
    as a bivariate identity in (q, q^N)."""
    b = lambda c, zv: sym_bracket(2, c, zv)
    lhs = b(-1, (1,)) * b(0, (-1,)) - b(1, (1,)) * b(-2, (-1,))
    qplus = Laurent.var(2, 0, 1) + Laurent.var(2, 0, -1)
    rhs = b(1, (2,)) * qplus
    return (lhs - rhs).is_zero()


def half_bracket_product(h2: int, q) -> Fraction:
    """Exact value of [h2/2]_q * [h2/2 + 1]_q for an integer h2.

    The two half-integer brackets are individually irrational when h2 is
    odd, but their product is rational: it equals S(h2) S(h2+2) / (q+2+1/q)
    with S(m) = sum of q^t over the symmetric integer range of length |m|.
    Regular at q = 1, where it equals (h2/2)(h2/2 + 1).
    """
    q = ensure_positive_q(q)
    h2 = int(h2)
    if h2 % 2 == 0:
        return qint_at(h2 // 2, q) * qint_at(h2 // 2 + 1, q)

    def oddsum(m: int) -> Fraction:
        if m == 0:
            return Fraction(0)
        sign = 1 if m > 0 else -1
        m = abs(m)
        half = (m - 1) // 2
        return sign * sum((q**t for t in range(-half, half + 1)), Fraction(0))

    return oddsum(h2) * oddsum(h2 + 2) / (q + 2 + 1 / q)


# -- radicals ----------------------------------------------------------------


class Radical:
    """Exact number of the form  sum_m c_m * sqrt(m)  with rational c_m and
    squarefree integer radicands m (m may be negative, m never 0).

    The branch for negative radicands is fixed once and for all:
    sqrt(m) = i*sqrt(|m|), so sqrt(m)*sqrt(m) == m for every radicand and
    products of matched radical pairs come out as exact rationals with the
    correct sign.  No complex floating arithmetic ever happens.

    Radicands supplied to the constructor must already be squarefree; use
    :func:`sqrt_rat` to build square roots of arbitrary rationals.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for m, c in terms.items():
                m = int(m)
                if m == 0:
                    raise ValueError("radicand 0 is not allowed")
                c = _frac(c)
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def from_rational(cls, r) -> "Radical":
        return cls({1: _frac(r)})

    @classmethod
    def zero(cls) -> "Radical":
        return cls()

    @classmethod
    def one(cls) -> "Radical":
        return cls({1: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_rational(self) -> bool:
        return all(m == 1 for m in self.terms)

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ArithmeticError("radical value is not rational")
        return self.terms[1]

    def _coerce(self, other) -> "Radical | None":
        if isinstance(other, Radical):
            return other
        if isinstance(other, (int, Fraction)):
            return Radical.from_rational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return Radical(acc)

    __radd__ = __add__

    def __neg__(self):
        return Radical({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            s = _frac(other)
            if not s:
                return Radical()
            return Radical({m: c * s for m, c in self.terms.items()})
        if not isinstance(other, Radical):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                # Both radicands are squarefree, so gcd extraction already
                # yields a squarefree core: m1*m2 = sign * g^2 * core.
                g = math.gcd(abs(m1), abs(m2))
                core = (m1 // g) * (m2 // g)
                c = c1 * c2 * g
                if m1 < 0 and m2 < 0:
                    c = -c  # i * i = -1 on the fixed branch
                acc[core] = acc.get(core, Fraction(0)) + c
        return Radical(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _frac(other))
        return NotImplemented

    def inverse(self) -> "Radical":
        """Reciprocal of a single-term radical: 1/(c*sqrt(m)) = sqrt(m)/(c*m)."""
        if len(self.terms) != 1:
            raise ArithmeticError("inverse implemented for single-term radicals only")
        ((m, c),) = self.terms.items()
        return Radical({m: Fraction(1) / (c * m)})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def render(self) -> str:
        """Deterministic text form, e.g. ``1/2*sqrt(-2) + 3``."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            parts.append(str(c) if m == 1 else f"{c}*sqrt({m})")
        return " + ".join(parts)

    def json_map(self) -> dict[str, str]:
        return {str(m): str(self.terms[m]) for m in sorted(self.terms)}

    def __repr__(self):
        return f"Radical({self.render()})"


@lru_cache(maxsize=None)
def _sqrt_frac(r: Fraction) -> Radical:
    if r == 0:
        return Radical()
    # sqrt(p/s) = sqrt(p*s)/s; split p*s into square and squarefree parts.
    n = r.numerator * r.denominator
    sign = -1 if n < 0 else 1
    square = 1
    free = 1
    for p, e in factorint(abs(n)).items():
        square *= p ** (e // 2)
        if e % 2:
            free *= p
    return Radical({sign * free: Fraction(square, r.denominator)})


def sqrt_rat(r) -> Radical:
    """Square root of a rational as a single-term radical c*sqrt(m) with m
    squarefree, on the fixed branch sqrt(r) = i*sqrt(|r|) for r < 0, so
    that sqrt_rat(r)**2 == r exactly."""
    return _sqrt_frac(_frac(r))
