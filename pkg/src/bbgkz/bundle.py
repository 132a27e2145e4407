"""Cohomology of Y = P(E + O) over a toric base and its graded structure.

H*(Y) is free over H*(X) on 1, g, ..., g^r where g is the tautological
class, with g^{r+1} = -sum_{j=1}^r c_j(E^vee) g^{r+1-j}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg, tep
from .toric import CohomRing

Vec = List[Fraction]


@dataclass
class BundleCohomology:
    base: CohomRing
    chern: List[Vec]  # c_0 .. c_r

    @property
    def r(self) -> int:
        return len(self.chern) - 1

    @property
    def dim(self) -> int:
        return (self.r + 1) * self.base.dim

    @property
    def dim_Y(self) -> int:
        return self.base.n + self.r

    def names(self) -> List[str]:
        out = []
        for j in range(self.r + 1):
            g = "" if j == 0 else ("g" if j == 1 else f"g^{j}")
            for b in self.base.names():
                if g and b == "1":
                    out.append(g)
                elif g:
                    out.append(f"{g}*{b}")
                else:
                    out.append(b)
        return out

    def degrees(self) -> List[int]:
        return [j + d for j in range(self.r + 1) for d in self.base.degrees]

    def blocks(self, v: Sequence) -> List[Vec]:
        d = self.base.dim
        return [list(v[j * d:(j + 1) * d]) for j in range(self.r + 1)]

    def join(self, blocks: Sequence[Sequence]) -> Vec:
        out: Vec = []
        for b in blocks:
            out += list(b)
        return out

    def pullback(self, a: Sequence) -> Vec:
        return self.join([a] + [[Fraction(0)] * self.base.dim] * self.r)

    def one(self) -> Vec:
        return self.pullback(self.base.one())

    def gamma(self) -> Vec:
        if self.r == 0:
            # g * c_0 = 0 with c_0 = 1 forces g = 0
            return [Fraction(0)] * self.dim
        z = [[Fraction(0)] * self.base.dim for _ in range(self.r + 1)]
        z[1] = self.base.one()
        return self.join(z)

    def multiply(self, a: Sequence, b: Sequence) -> Vec:
        ra, rb = self.blocks(a), self.blocks(b)
        r = self.r
        z = [[Fraction(0)] * self.base.dim for _ in range(2 * r + 1)]
        for i, x in enumerate(ra):
            if not any(x):
                continue
            for j, y in enumerate(rb):
                if any(y):
                    z[i + j] = [p + q for p, q in zip(z[i + j], self.base.multiply(x, y))]
        for k in range(2 * r, r, -1):
            if not any(z[k]):
                continue
            # g^k = -sum_t c_t g^{k-t}
            for t in range(1, r + 1):
                corr = self.base.multiply(self.chern[t], z[k])
                z[k - t] = [p - q for p, q in zip(z[k - t], corr)]
            z[k] = [Fraction(0)] * self.base.dim
        return self.join(z[: r + 1])

    def integrate(self, a: Sequence) -> Fraction:
        return self.base.integrate(self.blocks(a)[self.r])

    def N(self) -> List[List[Fraction]]:
        """Matrix of multiplication by g on coordinate columns."""
        g = self.gamma()
        cols = [self.multiply(g, [Fraction(int(i == j)) for i in range(self.dim)]) for j in range(self.dim)]
        return linalg.transpose(cols)

    def pairing_matrix(self) -> List[List[Fraction]]:
        d = self.dim
        unit = [[Fraction(int(i == j)) for i in range(d)] for j in range(d)]
        return [[self.integrate(self.multiply(unit[i], unit[j])) for j in range(d)] for i in range(d)]

    def pushforward_zero_section(self, sigma: Sequence) -> Vec:
        """i0_*(sigma) = pi^* sigma * sum_j g^{r-j} c_j(E^vee)."""
        z = [[Fraction(0)] * self.base.dim for _ in range(self.r + 1)]
        for j, cj in enumerate(self.chern):
            z[self.r - j] = [p + q for p, q in zip(z[self.r - j], self.base.multiply(sigma, cj))]
        return self.join(z)

    def pushforward_image(self) -> List[Vec]:
        d = self.base.dim
        return [self.pushforward_zero_section([Fraction(int(i == j)) for i in range(d)]) for j in range(d)]

    def ring_relation_holds(self) -> bool:
        """g * sum_j g^{r-j} c_j = 0, computed by explicit multiplication."""
        g = self.gamma()
        total = [Fraction(0)] * self.dim
        for j, cj in enumerate(self.chern):
            term = self.pullback(cj)
            for _ in range(self.r - j + 1):
                term = self.multiply(term, g)
            total = [p + q for p, q in zip(total, term)]
        return not any(total)


def bundle_cohomology(ring: CohomRing, chern: Sequence[Sequence]) -> BundleCohomology:
    chern = [[Fraction(x) for x in c] for c in chern]
    if not chern or chern[0] != ring.one():
        raise ValueError("chern classes must start with c_0 = 1")
    return BundleCohomology(ring, chern)


@dataclass
class GradedPairing:
    k: int  # power of N
    degree: int  # W~ degree k - n - r
    basis: List[Vec]
    gram: List[List[Fraction]]
    determinant: Fraction
    sign: Optional[int]


@dataclass
class GradedStructure:
    weight_filtration: tep.WeightFiltration
    primitive: tep.PrimitiveDecomposition
    gr_dims: Dict[int, int]
    cok_dims: Dict[int, int]
    ker_dims: Dict[int, int]
    pairings: Dict[int, GradedPairing]  # keyed by W~ degree on Cok
    ker_pairings: Dict[int, GradedPairing]  # keyed by W~ degree on Ker, preimage bases

    def to_json(self) -> dict:
        return {
            "jordan_type": list(self.weight_filtration.jordan_type()),
            "gr_dims": {str(k): v for k, v in self.gr_dims.items()},
            "cok_dims": {str(k): v for k, v in self.cok_dims.items()},
            "ker_dims": {str(k): v for k, v in self.ker_dims.items()},
            "pairings": {
                str(k): {"gram": [[str(x) for x in r] for r in p.gram], "det": str(p.determinant), "sign": p.sign}
                for k, p in self.pairings.items()
            },
        }


def graded_structure(bc: BundleCohomology) -> GradedStructure:
    """W(N), primitive parts, shifted filtrations on Cok N / Ker N, pairings (a, N^k b)_Y."""
    N = bc.N()
    W = tep.weight_filtration(N)
    prim = tep.primitive_decomposition(N, W)
    s = bc.dim_Y
    d = bc.dim
    im = tep.image(N)
    ker = tep.kernel(N, d)
    B = W.bound + 1
    cok_dims, ker_dims = {}, {}
    for k in range(-B - s, B - s + 1):
        hi, lo = W.W(k + s), W.W(k + s - 1)
        dc = linalg.rank(hi + im) - linalg.rank(lo + im) if hi else 0
        if dc:
            cok_dims[k] = dc
        dk = len(linalg.intersect(hi, ker)) - len(linalg.intersect(lo, ker)) if hi else 0
        if dk:
            ker_dims[k] = dk
    g = bc.gamma()
    pairings, ker_pairings = {}, {}
    for k, reps in prim.P.items():
        shifted = []
        for b in reps:
            v = list(b)
            for _ in range(k):
                v = bc.multiply(g, v)
            shifted.append(v)
        gram = [[bc.integrate(bc.multiply(a, nb)) for nb in shifted] for a in reps]
        T = linalg.transpose(gram)
        sign = 1 if gram == T else (-1 if gram == [[-x for x in r] for r in T] else None)
        gp = GradedPairing(k, k - s, [list(v) for v in reps], gram, linalg.det(gram), sign)
        pairings[k - s] = gp
        ker_pairings[-k - s] = gp
    return GradedStructure(W, prim, W.gr_dims(), cok_dims, ker_dims, pairings, ker_pairings)


def paired_space(bc: BundleCohomology, weight: Optional[int] = None) -> tep.NilpotentPairedSpace:
    """The cohomology package as a finite-rank model: Q = l^{-w} (Poincare matrix), N = l^{-1} g."""
    w = -bc.dim_Y if weight is None else weight
    S = bc.pairing_matrix()
    model = tep.PairingModel.from_cleared(tep.LaurentMatrix.constant(S), w)
    return tep.NilpotentPairedSpace(model, tuple(tuple(r) for r in bc.N()))
