"""Multivariate polynomials over Q and Groebner bases.

Polynomials are immutable maps from exponent tuples to ``Fraction``.
The Groebner engine is a plain Buchberger loop with the sugar pair
selection strategy and the product and chain criteria.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ResourceLimit

Exp = Tuple[int, ...]


class Polynomial:
    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] = None, nvars: int = 0):
        clean: Dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
                clean[e] = clean.get(e, Fraction(0)) + c
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    # constructors
    @classmethod
    def _raw(cls, terms: Dict[Exp, Fraction], nvars: int) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Polynomial":
        return cls({tuple(exp): coeff}, len(exp))

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        return cls.monomial(tuple(int(k == i) for k in range(nvars)))

    @classmethod
    def binomial(cls, p: Sequence[int]) -> "Polynomial":
        """x^{p+} - x^{p-} for an integer vector p."""
        plus = tuple(max(x, 0) for x in p)
        minus = tuple(max(-x, 0) for x in p)
        return cls({plus: 1}, len(p)) - cls({minus: 1}, len(p))

    # basic protocol
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.nvars)
        return isinstance(other, Polynomial) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable counts differ")
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if c == 0:
                return Polynomial._raw({}, self.nvars)
            return Polynomial._raw({e: v * c for e, v in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        out: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = Polynomial.constant(1, self.nvars)
        for _ in range(k):
            r = r * self
        return r

    def mul_term(self, exp: Exp, coeff: Fraction) -> "Polynomial":
        return Polynomial._raw(
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
            self.nvars,
        )

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        degs = {sum(w * x for w, x in zip(weights, e)) for e in self.terms}
        return len(degs) <= 1

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(out, self.nvars)

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def extend(self, new_nvars: int, offset: int = 0) -> "Polynomial":
        """Embed in more variables; old variable i becomes i + offset."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * new_nvars
            for i, x in enumerate(e):
                f[i + offset] = x
            out[tuple(f)] = c
        return Polynomial._raw(out, new_nvars)

    def drop(self, indices: Sequence[int]) -> "Polynomial":
        """Remove variables that do not occur."""
        keep = [i for i in range(self.nvars) if i not in set(indices)]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in indices):
                raise ValueError("dropped variable occurs")
            out[tuple(e[i] for i in keep)] = c
        return Polynomial._raw(out, len(keep))

    def leading(self, order: "MonomialOrder") -> Tuple[Exp, Fraction]:
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order: "MonomialOrder") -> "Polynomial":
        _, c = self.leading(order)
        return self * (1 / c)

    def sorted_terms(self, order: Optional["MonomialOrder"] = None):
        order = order or MonomialOrder("grevlex", self.nvars)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_str(self, names: Optional[Sequence[str]] = None, order: Optional["MonomialOrder"] = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        n = int(data["vars"])
        return cls({tuple(t["exp"]): Fraction(int(t["num"]), int(t.get("den", 1))) for t in data["terms"]}, n)


def _grevlex_key(e: Sequence[int]):
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """``kind`` is 'lex', 'grevlex' or 'elim'.

    For 'elim' the first ``block`` variables (after permutation) are
    eliminated: monomials compare by grevlex on that block first, then by
    grevlex on the rest.
    """

    kind: str
    nvars: int
    perm: Optional[Tuple[int, ...]] = None
    block: int = 0
    key: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        perm = self.perm
        if perm is not None:
            perm = tuple(perm)
            if sorted(perm) != list(range(self.nvars)):
                raise ValueError("perm must be a permutation of the variables")
            object.__setattr__(self, "perm", perm)
        if self.kind == "lex":
            if perm is None:
                key = lambda e: e
            else:
                key = lambda e: tuple(e[i] for i in perm)
        elif self.kind == "grevlex":
            if perm is None:
                key = _grevlex_key
            else:
                key = lambda e: _grevlex_key([e[i] for i in perm])
        elif self.kind == "elim":
            k = self.block
            p = perm or tuple(range(self.nvars))
            first, rest = p[:k], p[k:]
            key = lambda e: (_grevlex_key([e[i] for i in first]), _grevlex_key([e[i] for i in rest]))
        else:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "key", key)


# ---------------------------------------------------------------------------
# Groebner bases


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


class _Reducer:
    """Full reduction against a list of monic polynomials with known leading monomials."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.basis: List[Tuple[Exp, Polynomial]] = []

    def add(self, lm: Exp, g: Polynomial):
        self.basis.append((lm, g))

    def find(self, e: Exp):
        for lm, g in self.basis:
            if _divides(lm, e):
                return lm, g
        return None

    def reduce(self, f: Polynomial, full: bool = True) -> Polynomial:
        key = self.order.key
        p = dict(f.terms)
        heap = [(_Neg(key(e)), e) for e in p]
        heapq.heapify(heap)
        out: Dict[Exp, Fraction] = {}
        while heap:
            _, e = heapq.heappop(heap)
            c = p.get(e)
            if c is None:
                continue
            hit = self.find(e)
            if hit is None:
                del p[e]
                out[e] = c
                if not full:
                    out.update(p)
                    break
                continue
            lm, g = hit
            shift = _sub(e, lm)
            for ge, gc in g.terms.items():
                t = tuple(a + b for a, b in zip(ge, shift))
                old = p.get(t)
                v = (old or 0) - c * gc
                if v:
                    p[t] = v
                    if old is None:
                        heapq.heappush(heap, (_Neg(key(t)), t))
                elif old is not None:
                    del p[t]
        return Polynomial._raw(out, f.nvars)


class _Neg:
    """Wraps a key so that heapq (a min-heap) pops the largest key first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


@dataclass(frozen=True)
class IdealBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = False

    @property
    def nvars(self) -> int:
        return self.order.nvars

    def is_unit(self) -> bool:
        return any(g.total_degree() == 0 and not g.is_zero() for g in self.generators)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        if not self.reduced:
            raise ValueError("membership needs a Groebner basis")
        return normal_form(f, self).is_zero()


def normal_form(f: Polynomial, basis: IdealBasis) -> Polynomial:
    red = _Reducer(basis.order)
    for g in basis.generators:
        lm, c = g.leading(basis.order)
        red.add(lm, g * (1 / c))
    return red.reduce(f)


def _spoly(f: Polynomial, lf: Exp, g: Polynomial, lg: Exp) -> Polynomial:
    l = _lcm(lf, lg)
    return f.mul_term(_sub(l, lf), Fraction(1)) - g.mul_term(_sub(l, lg), Fraction(1))


def groebner(
    gens: Iterable[Polynomial],
    order: MonomialOrder,
    max_pairs: int = 200000,
) -> IdealBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    key = order.key
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return IdealBasis((), order, True)
    nv = gens[0].nvars
    basis: List[Polynomial] = []
    lms: List[Exp] = []
    sugar: List[int] = []
    pairs: List[tuple] = []  # heap of (sugar, key-of-lcm, i, j)
    pair_set = set()
    done_pairs = 0

    def insert(h: Polynomial, s: int):
        lm, c = h.leading(order)
        h = h * (1 / c)
        k = len(basis)
        basis.append(h)
        lms.append(lm)
        sugar.append(s)
        red.add(lm, h)
        for i in range(k):
            l = _lcm(lms[i], lm)
            if all(a + b == c for a, b, c in zip(lms[i], lm, l)):
                continue  # coprime leading monomials
            ps = max(sugar[i] + sum(l) - sum(lms[i]), s + sum(l) - sum(lm))
            heapq.heappush(pairs, (ps, _Neg(key(l)), i, k))
            pair_set.add((i, k))

    red = _Reducer(order)
    for g in sorted(gens, key=lambda g: (g.total_degree(), _Neg(key(g.leading(order)[0])))):
        h = red.reduce(g)
        if h.is_zero():
            continue
        insert(h, g.total_degree())
        if lms[-1] == (0,) * nv:
            return IdealBasis((Polynomial.constant(1, nv),), order, True)

    while pairs:
        ps, _, i, j = heapq.heappop(pairs)
        pair_set.discard((i, j))
        l = _lcm(lms[i], lms[j])
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(lms[k], l):
                continue
            a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
            if a not in pair_set and b not in pair_set:
                skip = True
                break
        if skip:
            continue
        done_pairs += 1
        if done_pairs > max_pairs:
            raise ResourceLimit(
                f"Groebner computation exceeded {max_pairs} S-pairs",
                progress={"basis_size": len(basis), "pending_pairs": len(pairs)},
            )
        s = _spoly(basis[i], lms[i], basis[j], lms[j])
        h = red.reduce(s)
        if h.is_zero():
            continue
        insert(h, ps)
        if lms[-1] == (0,) * nv:
            return IdealBasis((Polynomial.constant(1, nv),), order, True)

    return IdealBasis(tuple(_interreduce(basis, order)), order, True)


def _interreduce(polys: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    key = order.key
    items = [(p.leading(order)[0], p) for p in polys]
    # minimal basis
    minimal = []
    for idx, (lm, p) in enumerate(items):
        if any(_divides(lm2, lm) and (lm2 != lm or j < idx) for j, (lm2, _) in enumerate(items) if j != idx):
            continue
        minimal.append((lm, p))
    out = []
    for idx, (lm, p) in enumerate(minimal):
        r = _Reducer(order)
        for j, (lm2, q) in enumerate(minimal):
            if j != idx:
                r.add(lm2, q)
        tail = Polynomial._raw({e: c for e, c in p.terms.items() if e != lm}, p.nvars)
        h = r.reduce(tail)
        out.append(Polynomial._raw({lm: Fraction(1), **h.terms}, p.nvars))
    out.sort(key=lambda g: key(g.leading(order)[0]), reverse=True)
    return out


# ---------------------------------------------------------------------------
# ideal operations


def saturate(gens: Iterable[Polynomial], f: Polynomial, order: Optional[MonomialOrder] = None, max_pairs: int = 200000) -> IdealBasis:
    """(gens) : f^infinity, by adjoining 1 - t*f and eliminating t."""
    gens = list(gens)
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    nv = f.nvars
    order = order or MonomialOrder("grevlex", nv)
    ext = [g.extend(nv + 1, 1) for g in gens]
    t = Polynomial.variable(0, nv + 1)
    ext.append(Polynomial.constant(1, nv + 1) - t * f.extend(nv + 1, 1))
    perm = (0,) + tuple(1 + (order.perm[i] if order.perm else i) for i in range(nv))
    elim = MonomialOrder("elim", nv + 1, perm, block=1)
    G = groebner(ext, elim, max_pairs)
    kept = [g.drop([0]) for g in G.generators if all(e[0] == 0 for e in g.terms)]
    return groebner(kept, order, max_pairs)


def lattice_ideal(kernel_basis: Sequence[Sequence[int]], nvars: Optional[int] = None, max_pairs: int = 200000) -> IdealBasis:
    """Lattice ideal I_L for the lattice spanned by ``kernel_basis``.

    Starts from the basis binomials and saturates by each variable in turn,
    which equals saturation by the product of all variables.
    """
    rows = [tuple(int(x) for x in r) for r in kernel_basis]
    m = nvars if nvars is not None else len(rows[0])
    order = MonomialOrder("grevlex", m)
    if not rows:
        return IdealBasis((), order, True)
    gens = [Polynomial.binomial(r) for r in rows]
    current = groebner(gens, order, max_pairs)
    for i in range(m):
        xi = Polynomial.variable(i, m)
        current = saturate(current.generators, xi, order, max_pairs)
    return current


def binomial_exponents(g: Polynomial) -> Optional[Tuple[int, ...]]:
    """p with g = x^{p+} - x^{p-} (up to sign), or None if g is not such a binomial."""
    if len(g.terms) != 2:
        return None
    (e1, c1), (e2, c2) = sorted(g.terms.items(), key=lambda t: t[1], reverse=True)
    if c1 != 1 or c2 != -1:
        return None
    return tuple(a - b for a, b in zip(e1, e2))
