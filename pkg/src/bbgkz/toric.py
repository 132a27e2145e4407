"""Cohomology rings of smooth complete toric varieties.

H*(X) = Q[D_1..D_m] / (Stanley-Reisner monomials + linear relations),
with a monomial basis read off a Groebner basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import ConfigurationError
from .polynomial import IdealBasis, MonomialOrder, Polynomial, groebner, normal_form

Vec = List[Fraction]


@dataclass(frozen=True)
class Fan:
    rays: Tuple[Tuple[int, ...], ...]
    cones: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.cones))

    @property
    def n(self) -> int:
        return len(self.rays[0])

    @property
    def m(self) -> int:
        return len(self.rays)

    def validate(self):
        if not self.rays:
            raise ConfigurationError("fan has no rays")
        n = self.n
        for i, r in enumerate(self.rays):
            if len(r) != n:
                raise ConfigurationError(f"ray {i} has length {len(r)}, expected {n}")
            if linalg.primitive(r) != list(r) or not any(r):
                raise ConfigurationError(f"ray {i} = {list(r)} is not primitive")
        for c in self.cones:
            if len(c) != n:
                raise ConfigurationError(f"cone {list(c)} is not maximal-dimensional (purity)")
            if any(i < 0 or i >= self.m for i in c):
                raise ConfigurationError(f"cone {list(c)} refers to an unknown ray")
            if abs(linalg.det([self.rays[i] for i in c])) != 1:
                raise ConfigurationError(f"cone {list(c)} is not smooth")
        walls: Dict[Tuple[int, ...], int] = {}
        for c in self.cones:
            for w in itertools.combinations(c, n - 1):
                walls[w] = walls.get(w, 0) + 1
        for w, count in sorted(walls.items()):
            if count != 2:
                raise ConfigurationError(f"wall {list(w)} lies in {count} maximal cones (expected 2)")
        # connectedness of the dual graph
        seen = {0}
        frontier = [0]
        while frontier:
            a = frontier.pop()
            for b in range(len(self.cones)):
                if b not in seen and len(set(self.cones[a]) & set(self.cones[b])) == n - 1:
                    seen.add(b)
                    frontier.append(b)
        if len(seen) != len(self.cones):
            raise ConfigurationError("maximal cones do not form a connected wall graph")

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "cones": [list(c) for c in self.cones]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        if not isinstance(data, dict) or "rays" not in data or "cones" not in data:
            raise ConfigurationError("fan JSON needs 'rays' and 'cones'")
        return cls(tuple(tuple(r) for r in data["rays"]), tuple(tuple(c) for c in data["cones"]))


def projective_space_fan(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(c) for c in itertools.combinations(range(n + 1), n)]
    return Fan(tuple(rays), tuple(cones))


def product_fan(a: Fan, b: Fan) -> Fan:
    rays = [r + (0,) * b.n for r in a.rays] + [(0,) * a.n + r for r in b.rays]
    cones = [ca + tuple(i + a.m for i in cb) for ca in a.cones for cb in b.cones]
    return Fan(tuple(rays), tuple(cones))


def hirzebruch_fan(a: int) -> Fan:
    rays = ((1, 0), (0, 1), (-1, a), (0, -1))
    return Fan(rays, ((0, 1), (1, 2), (2, 3), (3, 0)))


@dataclass
class CohomRing:
    fan: Fan
    ideal: IdealBasis
    basis: List[Tuple[int, ...]]  # standard monomials in D_1..D_m
    degrees: List[int]
    table: List[List[Vec]]  # table[i][j] = coordinates of basis_i * basis_j
    top_value: Fraction  # integral of the top-degree basis monomial

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.fan.n

    def betti(self) -> List[int]:
        out = [0] * (self.n + 1)
        for d in self.degrees:
            out[d] += 1
        return out

    def names(self) -> List[str]:
        out = []
        for e in self.basis:
            parts = [(f"D{i + 1}" if k == 1 else f"D{i + 1}^{k}") for i, k in enumerate(e) if k]
            out.append("*".join(parts) or "1")
        return out

    def coords(self, f: Polynomial) -> Vec:
        r = normal_form(f, self.ideal)
        index = {e: i for i, e in enumerate(self.basis)}
        v = [Fraction(0)] * self.dim
        for e, c in r.terms.items():
            v[index[e]] += c
        return v

    def one(self) -> Vec:
        return self.coords(Polynomial.constant(1, self.fan.m))

    def divisor(self, i: int) -> Vec:
        return self.coords(Polynomial.variable(i, self.fan.m))

    def multiply(self, a: Sequence, b: Sequence) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for k, z in enumerate(self.table[i][j]):
                    if z:
                        out[k] += x * y * z
        return out

    def power(self, a: Sequence, k: int) -> Vec:
        r = self.one()
        for _ in range(k):
            r = self.multiply(r, a)
        return r

    def integrate(self, a: Sequence) -> Fraction:
        return sum((x * self.top_value for x, d in zip(a, self.degrees) if d == self.n and x), Fraction(0))

    def pairing_matrix(self) -> List[List[Fraction]]:
        return [[self.integrate(self.table[i][j]) for j in range(self.dim)] for i in range(self.dim)]

    def multiplication_matrix(self, a: Sequence) -> List[List[Fraction]]:
        """Matrix of b -> a*b acting on coordinate columns."""
        cols = [self.multiply(a, [Fraction(int(i == j)) for i in range(self.dim)]) for j in range(self.dim)]
        return linalg.transpose(cols)


def stanley_reisner_generators(fan: Fan) -> List[Tuple[int, ...]]:
    """Minimal subsets of rays that do not span a cone."""
    cones = [set(c) for c in fan.cones]
    minimal: List[Tuple[int, ...]] = []
    for size in range(2, fan.n + 2):
        for s in itertools.combinations(range(fan.m), size):
            ss = set(s)
            if any(ss <= c for c in cones):
                continue
            if any(set(t) <= ss for t in minimal):
                continue
            minimal.append(s)
    return minimal


def cohomology_ring(fan: Fan) -> CohomRing:
    fan.validate()
    m, n = fan.m, fan.n
    gens = []
    for s in stanley_reisner_generators(fan):
        gens.append(Polynomial.monomial(tuple(int(i in s) for i in range(m))))
    for k in range(n):
        gens.append(Polynomial({tuple(int(i == j) for j in range(m)): fan.rays[i][k] for i in range(m) if fan.rays[i][k]}, m))
    order = MonomialOrder("grevlex", m)
    ideal = groebner(gens, order)
    leads = [g.leading(order)[0] for g in ideal.generators]
    basis: List[Tuple[int, ...]] = []
    for d in range(n + 1):
        for e in _monomials_of_degree(m, d):
            if not any(all(a <= b for a, b in zip(l, e)) for l in leads):
                basis.append(e)
    if any(sum(e) > n for e in basis):
        raise ConfigurationError("cohomology has classes above the top degree; fan is not complete")
    degrees = [sum(e) for e in basis]
    top = [i for i, d in enumerate(degrees) if d == n]
    if len(top) != 1:
        raise ConfigurationError(f"top-degree cohomology has dimension {len(top)}, expected 1")
    index = {e: i for i, e in enumerate(basis)}
    d = len(basis)

    def coords(f: Polynomial) -> Vec:
        r = normal_form(f, ideal)
        v = [Fraction(0)] * d
        for e, c in r.terms.items():
            v[index[e]] += c
        return v

    table = [[coords(Polynomial.monomial(tuple(a + b for a, b in zip(basis[i], basis[j])))) for j in range(d)] for i in range(d)]
    # integral normalisation: each maximal cone's divisor product integrates to 1
    values = set()
    for c in fan.cones:
        v = coords(Polynomial.monomial(tuple(int(i in c) for i in range(m))))
        coeff = v[top[0]]
        if coeff == 0:
            raise ConfigurationError(f"cone {list(c)} has vanishing point class")
        values.add(1 / coeff)
    if len(values) != 1:
        raise ConfigurationError("point class depends on the maximal cone")
    return CohomRing(fan, ideal, basis, degrees, table, values.pop())


def _monomials_of_degree(m: int, d: int):
    out = []
    for combo in itertools.combinations_with_replacement(range(m), d):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def chern_classes(ring: CohomRing, beta_matrix: Sequence[Sequence[int]]) -> List[Vec]:
    """c_0..c_r of E^vee for E = sum_j O(sum_i beta_ji D_i)."""
    m = ring.fan.m
    for row in beta_matrix:
        if len(row) != m:
            raise ConfigurationError(f"beta row has length {len(row)}, expected {m}")
    # c(E^vee) = prod_j (1 - c_1(L_j))
    total = [ring.one()]
    for row in beta_matrix:
        c1 = [Fraction(0)] * ring.dim
        for i, b in enumerate(row):
            if b:
                c1 = [x + b * y for x, y in zip(c1, ring.divisor(i))]
        new = [[Fraction(0)] * ring.dim for _ in range(len(total) + 1)]
        for k, ck in enumerate(total):
            new[k] = [x + y for x, y in zip(new[k], ck)]
            prod = ring.multiply(ck, c1)
            new[k + 1] = [x - y for x, y in zip(new[k + 1], prod)]
        total = new
    return total
