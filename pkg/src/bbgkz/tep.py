"""Finite-rank models of filtered and paired lambda-modules.

Conventions used throughout:

* A pairing model of weight ``w`` on a free module with basis e_1..e_d is
  the Laurent matrix ``Q[i][k] = P(e_i, j* e_k)``.  For coordinate vectors
  ``P(v1, j* v2) = sum v1_i(l) Q_ik(l) v2_k(-l)``.  ``l^w Q`` must be a
  polynomial matrix and the symmetry law is ``Q(-l)^T = (-1)^w Q(l)``.
* A nilpotent ``N = l^{-1} N0`` with ``N0`` constant, acting on columns.
  Skew compatibility ``P(a, j*(N b)) = -P(N a, j* b)`` reads ``Q N0 = N0^T Q``.
* Subspaces are lists of row vectors.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import ConfigurationError


# ---------------------------------------------------------------------------
# Laurent polynomials in lambda


class LPoly:
    """Laurent polynomial in lambda with rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[int, object] = None):
        self.c: Dict[int, Fraction] = {}
        for k, v in (coeffs or {}).items():
            v = Fraction(v)
            if v:
                self.c[int(k)] = self.c.get(int(k), Fraction(0)) + v
        self.c = {k: v for k, v in self.c.items() if v}

    @classmethod
    def const(cls, v) -> "LPoly":
        return cls({0: v})

    @classmethod
    def mono(cls, k: int, v=1) -> "LPoly":
        return cls({k: v})

    @staticmethod
    def lift(x) -> "LPoly":
        return x if isinstance(x, LPoly) else LPoly.const(x)

    def __add__(self, o):
        o = LPoly.lift(o)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return LPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        return self + (-LPoly.lift(o))

    def __rsub__(self, o):
        return LPoly.lift(o) - self

    def __mul__(self, o):
        o = LPoly.lift(o)
        out: Dict[int, Fraction] = {}
        for k1, v1 in self.c.items():
            for k2, v2 in o.c.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return LPoly(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        try:
            return self.c == LPoly.lift(o).c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def is_zero(self) -> bool:
        return not self.c

    def shift(self, k: int) -> "LPoly":
        """Multiply by lambda^k."""
        return LPoly({e + k: v for e, v in self.c.items()})

    def neg_lambda(self) -> "LPoly":
        """Substitute lambda -> -lambda."""
        return LPoly({e: (-v if e % 2 else v) for e, v in self.c.items()})

    def min_degree(self) -> Optional[int]:
        return min(self.c) if self.c else None

    def max_degree(self) -> Optional[int]:
        return max(self.c) if self.c else None

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        return sum((v * t ** e for e, v in self.c.items()), Fraction(0))

    def __repr__(self):
        return f"LPoly({self.to_str()})"

    def to_str(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c, reverse=True):
            v = self.c[e]
            mono = "" if e == 0 else ("l" if e == 1 else f"l^{e}")
            mag = abs(v)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("- " if v < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self):
        return {str(e): str(v) for e, v in sorted(self.c.items())}

    @classmethod
    def from_json(cls, data) -> "LPoly":
        if isinstance(data, (int, str)):
            return cls.const(Fraction(data))
        if isinstance(data, list):
            return cls({i: Fraction(x) for i, x in enumerate(data)})
        return cls({int(k): Fraction(v) for k, v in data.items()})


class LaurentMatrix:
    """Matrix with LPoly entries."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows: List[List[LPoly]] = [[LPoly.lift(x) for x in r] for r in rows]

    @classmethod
    def constant(cls, M: Sequence[Sequence]) -> "LaurentMatrix":
        return cls([[LPoly.const(x) for x in r] for r in M])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def T(self) -> "LaurentMatrix":
        return LaurentMatrix(linalg.transpose(self.rows))

    def __matmul__(self, o) -> "LaurentMatrix":
        o = o if isinstance(o, LaurentMatrix) else LaurentMatrix.constant(o)
        cols = linalg.transpose(o.rows)
        return LaurentMatrix([[sum((a * b for a, b in zip(r, c)), LPoly()) for c in cols] for r in self.rows])

    def __rmatmul__(self, o) -> "LaurentMatrix":
        return LaurentMatrix.constant(o) @ self

    def __add__(self, o: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def scale(self, x) -> "LaurentMatrix":
        x = LPoly.lift(x)
        return LaurentMatrix([[a * x for a in r] for r in self.rows])

    def shift(self, k: int) -> "LaurentMatrix":
        return LaurentMatrix([[a.shift(k) for a in r] for r in self.rows])

    def neg_lambda(self) -> "LaurentMatrix":
        return LaurentMatrix([[a.neg_lambda() for a in r] for r in self.rows])

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, o):
        return isinstance(o, LaurentMatrix) and self.rows == o.rows

    def min_degree(self) -> Optional[int]:
        ds = [a.min_degree() for r in self.rows for a in r if not a.is_zero()]
        return min(ds) if ds else None

    def evaluate(self, t) -> List[List[Fraction]]:
        return [[a(t) for a in r] for r in self.rows]

    def is_nondegenerate(self) -> bool:
        """det != 0 in the fraction field, tested at enough integer points."""
        n, m = self.shape
        if n != m:
            return False
        if n == 0:
            return True
        lo = self.min_degree()
        if lo is None:
            return False
        # det * l^{-n*lo} is a polynomial of degree <= sum of row spans
        span = 0
        for r in self.rows:
            degs = [a.max_degree() for a in r if not a.is_zero()]
            if not degs:
                return False
            span += max(degs) - lo
        for t in range(1, span + 2):
            if linalg.det(self.evaluate(t)) != 0:
                return True
        return False

    def bilinear(self, v1: Sequence, v2: Sequence) -> LPoly:
        """v1^T M v2 for LPoly (or rational) vectors."""
        total = LPoly()
        for i, a in enumerate(v1):
            a = LPoly.lift(a)
            if a.is_zero():
                continue
            for k, b in enumerate(v2):
                b = LPoly.lift(b)
                if b.is_zero() or self.rows[i][k].is_zero():
                    continue
                total = total + a * self.rows[i][k] * b
        return total

    def to_json(self):
        return [[a.to_json() for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "LaurentMatrix":
        return cls([[LPoly.from_json(x) for x in r] for r in data])

    def __repr__(self):
        return "LaurentMatrix([" + ", ".join("[" + ", ".join(a.to_str() for a in r) + "]" for r in self.rows) + "])"


# ---------------------------------------------------------------------------
# filtrations and Rees modules


@dataclass(frozen=True)
class FilteredSpace:
    """Increasing filtration F_j of Q^dim.

    ``steps`` maps a jump index j to a spanning set of F_j; F_i is F_j for the
    largest recorded j <= i, and 0 below the smallest.
    """

    dim: int
    steps: Tuple[Tuple[int, Tuple[Tuple[Fraction, ...], ...]], ...]

    @classmethod
    def from_steps(cls, dim: int, steps: Mapping[int, Sequence[Sequence]]) -> "FilteredSpace":
        canon = []
        for j in sorted(steps):
            basis = linalg.span_basis([list(v) for v in steps[j]]) if steps[j] else []
            canon.append((int(j), tuple(tuple(x) for x in basis)))
        fs = cls(dim, tuple(canon))
        fs.validate()
        return fs

    def validate(self):
        prev: List = []
        for j, basis in self.steps:
            for v in basis:
                if len(v) != self.dim:
                    raise ConfigurationError(f"vector of length {len(v)} in a space of dimension {self.dim}")
            if not all(linalg.in_span(v, basis) for v in prev):
                raise ConfigurationError(f"filtration is not increasing at step {j}")
            prev = list(basis)
        if self.steps and len(self.steps[-1][1]) != self.dim:
            raise ConfigurationError("filtration is not exhaustive")

    def F(self, i: int) -> List[List[Fraction]]:
        out: List = []
        for j, basis in self.steps:
            if j <= i:
                out = [list(v) for v in basis]
        return out

    def jumps(self) -> Dict[int, int]:
        """Jump index -> dimension of F_j / F_{j-1}."""
        out = {}
        prev = 0
        for j, basis in self.steps:
            if len(basis) > prev:
                out[j] = len(basis) - prev
            prev = len(basis)
        return out

    def __eq__(self, other):
        if not isinstance(other, FilteredSpace) or other.dim != self.dim:
            return False
        keys = {j for j, _ in self.steps} | {j for j, _ in other.steps}
        return all(linalg.same_span(self.F(j), other.F(j)) for j in keys)


@dataclass(frozen=True)
class ReesModule:
    """Free graded C[l]-module: generators v * l^deg."""

    dim: int
    generators: Tuple[Tuple[int, Tuple[Fraction, ...]], ...]

    def graded_ranks(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for d, _ in self.generators:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))


def rees(fs: FilteredSpace) -> ReesModule:
    """Rees module sum_j F_j l^j, with a homogeneous free basis."""
    gens = []
    prev: List = []
    for j, basis in fs.steps:
        for v in linalg.complement_in(prev, [list(b) for b in basis]):
            gens.append((j, tuple(v)))
        prev = [list(b) for b in basis]
    return ReesModule(fs.dim, tuple(gens))


def unrees(module: ReesModule) -> FilteredSpace:
    vecs = [list(v) for _, v in module.generators]
    if vecs and linalg.rank(vecs) != len(vecs):
        raise ConfigurationError("generators are not a free basis")
    if len(vecs) != module.dim:
        raise ConfigurationError("generators do not span the space")
    steps: Dict[int, List] = {}
    for d in sorted({d for d, _ in module.generators}):
        steps[d] = [list(v) for e, v in module.generators if e <= d]
    return FilteredSpace.from_steps(module.dim, steps)


# ---------------------------------------------------------------------------
# pairings


@dataclass(frozen=True)
class PairingModel:
    dim: int
    weight: int
    Q: LaurentMatrix

    @classmethod
    def from_cleared(cls, G: LaurentMatrix, weight: int) -> "PairingModel":
        """Model with Q = l^{-w} G."""
        return cls(G.shape[0], weight, G.shift(-weight))

    def cleared(self) -> LaurentMatrix:
        return self.Q.shift(self.weight)

    def pair(self, v1: Sequence, v2: Sequence) -> LPoly:
        """P(v1, j* v2) for coordinate vectors with LPoly entries."""
        v2j = [LPoly.lift(x).neg_lambda() for x in v2]
        return self.Q.bilinear(v1, v2j)

    def symmetry_ok(self) -> bool:
        sign = -1 if self.weight % 2 else 1
        return self.Q.neg_lambda().T() == self.Q.scale(sign)

    def values_ok(self) -> bool:
        lo = self.cleared().min_degree()
        return lo is None or lo >= 0

    def is_nondegenerate(self) -> bool:
        return self.Q.is_nondegenerate()

    def to_json(self) -> dict:
        return {"weight": self.weight, "Q": self.Q.to_json()}


def twist(pm: PairingModel, a: int) -> PairingModel:
    """P^{(a)} on l^{-a}V in the basis l^{-a} e_i: Q -> (-1)^a l^{-2a} Q, weight w + 2a."""
    sign = -1 if a % 2 else 1
    return PairingModel(pm.dim, pm.weight + 2 * a, pm.Q.shift(-2 * a).scale(sign))


# ---------------------------------------------------------------------------
# weight filtrations


def nilpotency_index(N: Sequence[Sequence]) -> int:
    d = len(N)
    P = linalg.identity(d)
    for k in range(d + 1):
        if linalg.is_zero_matrix(P):
            return k
        P = linalg.matmul(N, P)
    raise ConfigurationError(f"matrix is not nilpotent: N^{d} = {[[str(x) for x in r] for r in linalg.matpow(N, d)]}")


def kernel(M: Sequence[Sequence], d: int) -> List[List[Fraction]]:
    return linalg.span_basis(linalg.nullspace(M, d)) if M else linalg.identity(d)


def image(M: Sequence[Sequence]) -> List[List[Fraction]]:
    return linalg.span_basis(linalg.transpose(M))


@dataclass(frozen=True)
class WeightFiltration:
    dim: int
    chains: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]  # each chain x, Nx, ..., N^{s-1}x
    bound: int  # W_k = 0 for k < -bound, W_k = V for k >= bound

    def vectors_with_weights(self) -> List[Tuple[int, Tuple[Fraction, ...]]]:
        out = []
        for ch in self.chains:
            s = len(ch)
            for i, v in enumerate(ch):
                out.append((s - 1 - 2 * i, v))
        return out

    def W(self, k: int) -> List[List[Fraction]]:
        vecs = [list(v) for w, v in self.vectors_with_weights() if w <= k]
        return linalg.span_basis(vecs) if vecs else []

    def gr_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for w, _ in self.vectors_with_weights():
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def jordan_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.chains), reverse=True))


def _key(N) -> tuple:
    return tuple(tuple(Fraction(x) for x in r) for r in N)


def powers(N: Sequence[Sequence], upto: int) -> List[List[List[Fraction]]]:
    """[N^0, N^1, ..., N^upto]."""
    out = [linalg.identity(len(N))]
    for _ in range(upto):
        out.append(linalg.matmul(N, out[-1]))
    return out


def weight_filtration(N: Sequence[Sequence]) -> WeightFiltration:
    """Monodromy weight filtration centred at 0, through Jordan chains.

    Chain tops of length s are chosen greedily (pivot order of the reduced
    basis of ker N^s) modulo ker N^{s-1} and the images of longer chains.
    """
    return _weight_filtration(_key(N))


@lru_cache(maxsize=256)
def _weight_filtration(key: tuple) -> WeightFiltration:
    N = [list(r) for r in key]
    d = len(N)
    nu = nilpotency_index(N)
    pw = powers(N, nu)
    kers = [kernel(pw[s], d) if s else [] for s in range(nu + 1)]
    chains: List[List[List[Fraction]]] = []
    for s in range(nu, 0, -1):
        pushed = []
        for ch in chains:
            if len(ch) > s:
                pushed.append(ch[len(ch) - s])
        sub = kers[s - 1] + pushed
        for x in linalg.complement_in(sub, kers[s]):
            ch = [x]
            for _ in range(s - 1):
                ch.append(linalg.matvec(N, ch[-1]))
            chains.append(ch)
    return WeightFiltration(d, tuple(tuple(tuple(v) for v in ch) for ch in chains), max(nu, 1))


def weight_filtration_oracle(N: Sequence[Sequence]) -> Dict[int, List[List[Fraction]]]:
    """All W_k from W_k = sum_{j >= 0} ker N^{k+1+j} cap Im N^j.

    Independent of any chain choice; used to cross-check weight_filtration.
    Returns W_k for -nu-1 <= k <= nu.
    """
    N = linalg.as_fraction_matrix(N)
    d = len(N)
    nu = nilpotency_index(N)
    pw = powers(N, nu)
    kers = {e: kernel(pw[e], d) for e in range(1, nu + 1)}
    ims = {j: (image(pw[j]) if j else linalg.identity(d)) for j in range(nu + 1)}
    inter: Dict[Tuple[int, int], List] = {}
    out = {}
    for k in range(-nu - 1, nu + 1):
        parts: List = []
        for j in range(nu + 1):
            e = min(k + 1 + j, nu)
            if e < 1:
                continue
            if (e, j) not in inter:
                inter[(e, j)] = linalg.intersect(kers[e], ims[j])
            parts += inter[(e, j)]
        out[k] = linalg.span_basis(parts) if parts else []
    return out


def check_weight_filtration(N: Sequence[Sequence], W: WeightFiltration) -> Dict[str, bool]:
    """Direct check of N W_k in W_{k-2} and N^k: Gr_k -> Gr_{-k} bijective."""
    N = linalg.as_fraction_matrix(N)
    out = {"lowers_by_two": True, "hard_lefschetz": True, "exhaustive": True}
    B = W.bound + 1
    if W.W(-B) or len(W.W(B)) != W.dim:
        out["exhaustive"] = False
    for k in range(-B, B + 1):
        Wk, Wk2 = W.W(k), W.W(k - 2)
        if not all(linalg.in_span(linalg.matvec(N, v), Wk2) for v in Wk):
            out["lowers_by_two"] = False
    for k in range(0, B + 1):
        top = linalg.complement_in(W.W(k - 1), W.W(k))
        low_sub = W.W(-k - 1)
        low_dim = len(W.W(-k)) - len(low_sub)
        Nk = linalg.matpow(N, k)
        imgs = [linalg.matvec(Nk, v) for v in top]
        if len(top) != low_dim or len(linalg.complement_in(low_sub, imgs)) != len(top):
            out["hard_lefschetz"] = False
    return out


@dataclass(frozen=True)
class PrimitiveDecomposition:
    P: Dict[int, List[List[Fraction]]]  # k >= 0 -> representatives of PGr_k
    Pprime: Dict[int, List[List[Fraction]]]  # k <= 0 -> representatives of P'Gr_k

    def ranks(self) -> Dict[int, int]:
        return {k: len(v) for k, v in sorted(self.P.items())}


def primitive_decomposition(N: Sequence[Sequence], W: Optional[WeightFiltration] = None) -> PrimitiveDecomposition:
    """PGr_k = image of W_k cap ker N^{k+1} in Gr_k; P'Gr_{-k} = N^k PGr_k."""
    if W is not None and W != weight_filtration(N):
        return _primitive_decomposition(_key(N), W)
    return _primitive_decomposition(_key(N), None)


@lru_cache(maxsize=256)
def _primitive_decomposition(key: tuple, W: Optional[WeightFiltration]) -> PrimitiveDecomposition:
    N = [list(r) for r in key]
    W = W or weight_filtration(N)
    d = len(N)
    pw = powers(N, W.bound + 1)
    P: Dict[int, List] = {}
    Pp: Dict[int, List] = {}
    for k in range(0, W.bound + 1):
        K = kernel(pw[k + 1], d)
        cand = linalg.intersect(W.W(k), K)
        reps = linalg.complement_in(W.W(k - 1), cand)
        if reps:
            P[k] = reps
            Pp[-k] = [linalg.matvec(pw[k], v) for v in reps]
    return PrimitiveDecomposition(P, Pp)


# ---------------------------------------------------------------------------
# nilpotent paired spaces and specialization


@dataclass(frozen=True)
class NilpotentPairedSpace:
    model: PairingModel
    N0: Tuple[Tuple[Fraction, ...], ...]  # N = l^{-1} N0

    def __post_init__(self):
        object.__setattr__(self, "N0", tuple(tuple(Fraction(x) for x in r) for r in self.N0))

    @property
    def dim(self) -> int:
        return self.model.dim

    def compatibility_ok(self) -> bool:
        return self.model.Q @ [list(r) for r in self.N0] == LaurentMatrix.constant(linalg.transpose(self.N0)) @ self.model.Q

    def validate(self):
        nilpotency_index(self.N0)
        if not self.compatibility_ok():
            raise ConfigurationError("pairing is not skew compatible with N: Q N0 != N0^T Q")
        if not self.model.symmetry_ok():
            raise ConfigurationError(f"pairing violates the weight-{self.model.weight} symmetry law")


@dataclass(frozen=True)
class SpecializedPairing:
    k: int
    weight: int
    basis: Tuple[Tuple[Fraction, ...], ...]
    Q: LaurentMatrix

    def model(self) -> PairingModel:
        return PairingModel(len(self.basis), self.weight, self.Q)


def specialize_pairing(nps: NilpotentPairedSpace) -> Dict[int, SpecializedPairing]:
    """sp(P)_{w+k} on PGr_k (k >= 0) and on P'Gr_k (k < 0).

    k >= 0: sp(a, b) = P(N^k a, j* b), Gram l^{-k} B^T (N0^k)^T Q B.
    k < 0, K = -k: for a', b' = N0^K b in P'Gr_k,
    sp(a', b') = P(a', j*(l^K b)), Gram (-1)^K l^K B'^T Q B.
    """
    nps.validate()
    N0 = [list(r) for r in nps.N0]
    W = weight_filtration(N0)
    prim = primitive_decomposition(N0, W)
    w = nps.model.weight
    Q = nps.model.Q
    out: Dict[int, SpecializedPairing] = {}
    for k, reps in prim.P.items():
        Nk = linalg.matpow(N0, k)
        left = [linalg.matvec(Nk, v) for v in reps]
        G = LaurentMatrix([[Q.bilinear(a, b) for b in reps] for a in left]).shift(-k)
        out[k] = SpecializedPairing(k, w + k, tuple(tuple(v) for v in reps), G)
        if k > 0:
            primes = prim.Pprime[-k]
            sign = -1 if k % 2 else 1
            Gp = LaurentMatrix([[Q.bilinear(a, b) for b in reps] for a in primes]).shift(k).scale(sign)
            out[-k] = SpecializedPairing(-k, w - k, tuple(tuple(v) for v in primes), Gp)
    return dict(sorted(out.items()))


def specialize_via_right(nps: NilpotentPairedSpace, k: int) -> LaurentMatrix:
    """P(a, j*(N^k b)) on PGr_k; equals (-1)^k sp(P)_{w+k} under skew compatibility."""
    N0 = [list(r) for r in nps.N0]
    W = weight_filtration(N0)
    reps = primitive_decomposition(N0, W).P.get(k, [])
    Nk = linalg.matpow(N0, k)
    # j*(l^{-k} N0^k b) = (-l)^{-k} N0^k b(-l)
    sign = -1 if k % 2 else 1
    right = [linalg.matvec(Nk, v) for v in reps]
    return LaurentMatrix([[nps.model.Q.bilinear(a, b) for b in right] for a in reps]).shift(-k).scale(sign)


# ---------------------------------------------------------------------------
# mixed TEP models


@dataclass(frozen=True)
class GradedPiece:
    k: int
    basis: Tuple[Tuple[Fraction, ...], ...]  # representatives in model coordinates
    pairing: Optional[LaurentMatrix]


@dataclass(frozen=True)
class MixedTEPModel:
    dim: int
    filtration: Dict[int, List[List[Fraction]]]  # k -> basis of W~_k, for k in a window
    pieces: Dict[int, GradedPiece]

    def graded_dims(self) -> Dict[int, int]:
        return {k: len(p.basis) for k, p in sorted(self.pieces.items()) if p.basis}

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "graded_dims": {str(k): v for k, v in self.graded_dims().items()},
            "pairings": {
                str(k): p.pairing.to_json() for k, p in sorted(self.pieces.items()) if p.pairing is not None
            },
        }


def _coords_in(basis: Sequence[Sequence], v: Sequence) -> List[Fraction]:
    c = linalg.coordinates(v, basis)
    if c is None:
        raise ArithmeticError("vector is not in the subspace")
    return c


def mixed_tep_assemble(nps: NilpotentPairedSpace) -> Dict[str, MixedTEPModel]:
    """Cok(lN) with W~_k = image of W_{k-w}; Ker(lN) with W~_k = W_{k-w} cap Ker."""
    sp = specialize_pairing(nps)
    N0 = [list(r) for r in nps.N0]
    d = nps.dim
    w = nps.model.weight
    W = weight_filtration(N0)
    B = W.bound + 1
    im = image(N0)
    ker = kernel(N0, d)

    # Cok coordinates: complement of Im N0 taken from the standard basis
    comp = linalg.complement_in(im, linalg.identity(d))
    full = comp + im

    def cok(v):
        return _coords_in(full, v)[: len(comp)]

    cok_filt, cok_pieces = {}, {}
    for k in range(w - B, w + B + 1):
        Wk = W.W(k - w)
        cok_filt[k] = linalg.span_basis([cok(v) for v in Wk]) if Wk else []
        if k - w >= 0 and (k - w) in sp:
            s = sp[k - w]
            cok_pieces[k] = GradedPiece(k, tuple(tuple(cok(v)) for v in s.basis), s.Q)
    ker_filt, ker_pieces = {}, {}
    for k in range(w - B, w + B + 1):
        inter = linalg.intersect(W.W(k - w), ker) if ker else []
        ker_filt[k] = [_coords_in(ker, v) for v in inter]
        if k - w <= 0 and (k - w) in sp:
            s = sp[k - w]
            ker_pieces[k] = GradedPiece(k, tuple(tuple(_coords_in(ker, v)) for v in s.basis), s.Q)
    return {
        "cok": MixedTEPModel(len(comp), cok_filt, cok_pieces),
        "ker": MixedTEPModel(len(ker), ker_filt, ker_pieces),
    }


def mixed_tep_validate(model: MixedTEPModel) -> Dict[str, bool]:
    report: Dict[str, bool] = {}
    ks = sorted(model.filtration)
    if not ks:
        report["exhaustive"] = False
        return report
    report["exhaustive"] = not model.filtration[ks[0]] and len(model.filtration[ks[-1]]) == model.dim
    report["increasing"] = all(
        all(linalg.in_span(v, model.filtration[b]) for v in model.filtration[a]) for a, b in zip(ks, ks[1:])
    )
    free = True
    for k in ks:
        prev = model.filtration.get(k - 1, [])
        jump = len(model.filtration[k]) - len(prev)
        piece = model.pieces.get(k)
        reps = [list(v) for v in piece.basis] if piece else []
        if len(reps) != jump:
            free = False
            continue
        if reps and (
            not all(linalg.in_span(v, model.filtration[k]) for v in reps)
            or len(linalg.complement_in(prev, reps)) != len(reps)
        ):
            free = False
    report["graded_free"] = free
    for k, piece in sorted(model.pieces.items()):
        if piece.pairing is None or not piece.basis:
            continue
        pm = PairingModel(len(piece.basis), k, piece.pairing)
        report[f"weight[{k}]"] = pm.values_ok()
        report[f"symmetry[{k}]"] = pm.symmetry_ok()
        report[f"nondegenerate[{k}]"] = pm.is_nondegenerate()
    return report


# ---------------------------------------------------------------------------
# random compatible spaces (used by tests and the CLI demo)


def random_even_lpoly(rng: random.Random, max_deg: int = 2, nonzero: bool = False) -> LPoly:
    while True:
        p = LPoly({2 * i: Fraction(rng.randint(-3, 3)) for i in range(max_deg // 2 + 1)})
        if p.c or not nonzero:
            return p


def random_paired_space(rng: random.Random, dim: int, weight: int) -> NilpotentPairedSpace:
    """A random compatible pair (P, N) of dimension ``dim``.

    Built from a Jordan-form N0 with Hankel forms h_{i+j} per block
    (h_t = 0 for t > s-1, h_{s-1} a nonzero even polynomial), then
    conjugated by a random invertible rational matrix.
    """
    sizes = []
    left = dim
    while left:
        s = rng.randint(1, left)
        sizes.append(s)
        left -= s
    N = [[Fraction(0)] * dim for _ in range(dim)]
    G = [[LPoly() for _ in range(dim)] for _ in range(dim)]
    off = 0
    for s in sizes:
        for i in range(s - 1):
            N[off + i + 1][off + i] = Fraction(1)
        h = [random_even_lpoly(rng) for _ in range(s - 1)] + [random_even_lpoly(rng, nonzero=True)]
        for i in range(s):
            for j in range(s):
                if i + j <= s - 1:
                    G[off + i][off + j] = h[i + j]
        off += s
    # unimodular S keeps every entry integral
    S = linalg.identity(dim)
    for _ in range(2 * dim):
        i, j = rng.sample(range(dim), 2) if dim > 1 else (0, 0)
        if i != j:
            f = rng.choice([-2, -1, 1, 2])
            S = [[S[r][c] + (f * S[j][c] if r == i else 0) for c in range(dim)] for r in range(dim)]
    perm = list(range(dim))
    rng.shuffle(perm)
    S = [S[p] for p in perm]
    Sinv = linalg.inverse(S)
    N2 = linalg.matmul(linalg.matmul(Sinv, N), S)
    G2 = LaurentMatrix.constant(linalg.transpose(S)) @ LaurentMatrix(G) @ S
    return NilpotentPairedSpace(PairingModel.from_cleared(G2, weight), tuple(tuple(r) for r in N2))
