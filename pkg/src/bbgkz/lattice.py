"""Point configurations, their cones, lattices and faces.

A configuration ``A = (a_1, ..., a_m)`` is a finite list of nonzero vectors
generating ``Z^n``.  Everything is exact; cone and semigroup questions are
answered by bounded enumeration with an explicit inconclusive outcome.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import BoundInsufficient, ConfigurationError

IntVec = Tuple[int, ...]

MAX_FACE_POINTS = 12


@dataclass(frozen=True)
class PointConfiguration:
    points: Tuple[IntVec, ...]
    n: int = field(default=-1)

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ConfigurationError("configuration is empty")
        n = self.n if self.n >= 0 else len(pts[0])
        object.__setattr__(self, "n", n)
        if n <= 0:
            raise ConfigurationError("rank must be positive")
        for j, p in enumerate(pts):
            if len(p) != n:
                raise ConfigurationError(f"point a_{j + 1} has length {len(p)}, expected {n}")
            if not any(p):
                raise ConfigurationError(f"point a_{j + 1} is zero")
        _, D, _ = linalg.smith_normal_form(pts)
        for i in range(n):
            d = D[i][i] if i < len(D) else 0
            if d != 1:
                raise ConfigurationError(
                    f"points do not generate Z^{n}: elementary divisor #{i + 1} is {d}"
                )

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]]) -> "PointConfiguration":
        return cls(tuple(tuple(p) for p in points))

    @property
    def m(self) -> int:
        return len(self.points)

    def combination(self, coeffs: Sequence) -> tuple:
        """``sum_j coeffs[j] * a_j``."""
        return tuple(sum(c * p[i] for c, p in zip(coeffs, self.points)) for i in range(self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "PointConfiguration":
        if not isinstance(data, dict) or "points" not in data:
            raise ConfigurationError("expected an object with a 'points' list")
        return cls(tuple(tuple(p) for p in data["points"]), int(data.get("n", -1)))


@dataclass(frozen=True)
class LatticeSequence:
    """0 -> L_A -> Z^m -> Z^n -> 0 with a splitting of the dual sequence.

    ``kernel_basis`` rows span L_A; ``surjection`` is the m x n matrix whose
    rows are the a_j; ``splitting`` is an m x (m-n) integer matrix S with
    ``kernel_basis @ S == identity``.
    """

    kernel_basis: Tuple[IntVec, ...]
    surjection: Tuple[IntVec, ...]
    splitting: Tuple[IntVec, ...]


@dataclass(frozen=True)
class ConeDescription:
    facet_normals: Tuple[IntVec, ...]
    ray_generators: Tuple[IntVec, ...]

    def contains(self, c: Sequence) -> bool:
        return all(_dot(u, c) >= 0 for u in self.facet_normals)

    def contains_interior(self, c: Sequence) -> bool:
        return all(_dot(u, c) > 0 for u in self.facet_normals)


@dataclass(frozen=True)
class Face:
    dimension: int
    vertex_set: Tuple[int, ...]
    index_set: Tuple[int, ...]  # indices into (0, a_1, ..., a_m); 0 is the origin
    contains_zero: bool


@dataclass(frozen=True)
class FaceLattice:
    faces: Tuple[Face, ...]

    def proper_faces_without_zero(self) -> List[Face]:
        return [f for f in self.faces if not f.contains_zero]

    def by_index_set(self) -> Dict[Tuple[int, ...], Face]:
        return {f.index_set: f for f in self.faces}


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def kernel_lattice(config: PointConfiguration) -> LatticeSequence:
    """Integer kernel of p -> sum p_j a_j, computed through Smith normal form."""
    A = [list(p) for p in config.points]
    U, D, _ = linalg.smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), config.n)) if D[i][i] != 0)
    for i in range(r):
        if D[i][i] != 1:
            raise ConfigurationError(f"elementary divisor {D[i][i]} != 1")
    kernel = [tuple(U[i]) for i in range(r, config.m)]
    Uinv = linalg.integer_inverse(U)
    splitting = tuple(tuple(Uinv[j][i] for i in range(r, config.m)) for j in range(config.m))
    return LatticeSequence(
        kernel_basis=tuple(_canonical_kernel(kernel)),
        surjection=tuple(config.points),
        splitting=_fix_splitting(kernel, splitting, _canonical_kernel(kernel)),
    )


def _canonical_kernel(rows):
    """Lattice basis in Hermite normal form (row style), for stable output."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    m = len(rows[0])
    H = [r[:] for r in rows]
    k = 0
    for c in range(m):
        # gcd-reduce column c among rows k..
        while True:
            nz = [i for i in range(k, len(H)) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[k], H[p] = H[p], H[k]
            others = [i for i in range(k + 1, len(H)) if H[i][c] != 0]
            if not others:
                break
            for i in others:
                q = H[i][c] // H[k][c]
                H[i] = [a - q * b for a, b in zip(H[i], H[k])]
        if k < len(H) and H[k][c] != 0:
            if H[k][c] < 0:
                H[k] = [-x for x in H[k]]
            for i in range(k):
                q = H[i][c] // H[k][c]
                H[i] = [a - q * b for a, b in zip(H[i], H[k])]
            k += 1
        if k == len(H):
            break
    return [tuple(r) for r in H]


def _fix_splitting(old_kernel, old_split, new_kernel):
    """Re-express the splitting for a changed kernel basis.

    If new = T @ old with T unimodular, then S' = S @ T^{-1} satisfies
    new @ S' = T @ old @ S @ T^{-1} = identity.
    """
    if not new_kernel:
        return tuple(tuple() for _ in old_split)
    S = [list(r) for r in old_split]
    old = [list(r) for r in old_kernel]
    new = [list(r) for r in new_kernel]
    # T = new @ S  (because old @ S = I)
    T = [[sum(new[i][k] * S[k][j] for k in range(len(S))) for j in range(len(old))] for i in range(len(new))]
    Tinv = linalg.integer_inverse(T)
    S2 = [[sum(S[i][k] * Tinv[k][j] for k in range(len(Tinv))) for j in range(len(Tinv[0]))] for i in range(len(S))]
    return tuple(tuple(r) for r in S2)


# ---------------------------------------------------------------------------
# cones


def cone_facets(config: PointConfiguration) -> ConeDescription:
    """Facets of the cone spanned by A.

    Candidate normals come from every rank n-1 subset of A (the dual
    description, enumerated directly); a candidate is kept when all points
    lie on one side.  Normals are inward, primitive and sorted.
    """
    n = config.n
    pts = [list(p) for p in config.points]
    if n == 1:
        signs = {1 if p[0] > 0 else -1 for p in pts}
        normals = sorted((s,) for s in signs)
        normals = [u for u in normals if all(_dot(u, p) >= 0 for p in pts)]
        rays = tuple(sorted({(s,) for s in signs}))
        return ConeDescription(tuple(sorted(normals, reverse=True)), rays)
    found = set()
    for subset in itertools.combinations(range(len(pts)), n - 1):
        rows = [pts[i] for i in subset]
        ns = linalg.nullspace(rows, n)
        if len(ns) != 1:
            continue
        u = linalg.clear_denominators(ns[0])
        vals = [_dot(u, p) for p in pts]
        if all(v >= 0 for v in vals):
            found.add(tuple(u))
        if all(v <= 0 for v in vals):
            found.add(tuple(-x for x in u))
    normals = sorted(found, reverse=True)
    rays = set()
    for p in pts:
        tight = [u for u in normals if _dot(u, p) == 0]
        if tight and linalg.rank(tight) == n - 1:
            rays.add(tuple(linalg.primitive(p)))
    return ConeDescription(facet_normals=tuple(normals), ray_generators=tuple(sorted(rays)))


def _is_pointed(cone: ConeDescription, config: PointConfiguration):
    """A functional positive on every a_j, or None when the cone has a line."""
    if not cone.facet_normals:
        return None
    u = [sum(col) for col in zip(*cone.facet_normals)]
    if all(_dot(u, a) > 0 for a in config.points):
        return u
    return None


def semigroup_representation(
    config: PointConfiguration,
    c: Sequence[int],
    bound: Optional[int] = None,
    cone: Optional[ConeDescription] = None,
) -> Optional[Tuple[int, ...]]:
    """Find n in Z_{>=0}^m with sum n_j a_j = c and all n_j <= bound.

    Returns None when no representation exists.  Raises BoundInsufficient
    when none was found but the search was not exhaustive.
    """
    c = tuple(int(x) for x in c)
    cone = cone or cone_facets(config)
    if not cone.contains(c):
        return None
    u = _is_pointed(cone, config)
    caps = []
    if u is not None:
        uc = _dot(u, c)
        for a in config.points:
            caps.append(uc // _dot(u, a))
        exhaustive = bound is None or all(cap <= bound for cap in caps)
        if bound is not None:
            caps = [min(cap, bound) for cap in caps]
    else:
        if bound is None:
            raise BoundInsufficient("cone contains a line; an explicit bound is required")
        caps = [bound] * config.m
        exhaustive = False
    pts = config.points
    m = config.m

    def search(j, rem, acc):
        if j == m:
            return tuple(acc) if not any(rem) else None
        a = pts[j]
        for k in range(caps[j] + 1):
            r = tuple(x - k * y for x, y in zip(rem, a))
            # remaining sum must stay inside the cone when the rest can only add cone points
            if not cone.contains(r) and u is not None:
                break
            found = search(j + 1, r, acc + [k])
            if found is not None:
                return found
        return None

    found = search(0, c, [])
    if found is None and not exhaustive:
        raise BoundInsufficient(f"no representation of {list(c)} with coefficients <= {bound}; bound possibly insufficient")
    return found


def semigroup_membership(config: PointConfiguration, c: Sequence[int], bound: Optional[int] = None) -> bool:
    return semigroup_representation(config, c, bound) is not None


def interior_test(config: PointConfiguration, c: Sequence[int], cone: Optional[ConeDescription] = None) -> bool:
    cone = cone or cone_facets(config)
    return cone.contains_interior(c)


def lattice_points_in_box(n: int, bound: int):
    return itertools.product(range(-bound, bound + 1), repeat=n)


def _order_key(u, c):
    return (_dot(u, c) if u is not None else sum(abs(x) for x in c), tuple(c))


@dataclass(frozen=True)
class SaturationResult:
    saturated: bool
    witness: Optional[IntVec]


def saturation_check(config: PointConfiguration, bound: int, search_bound: Optional[int] = None) -> SaturationResult:
    """Compare K(A) with Z_{>=0}A on the box |c_i| <= bound."""
    cone = cone_facets(config)
    u = _is_pointed(cone, config)
    pts = [c for c in lattice_points_in_box(config.n, bound) if cone.contains(c)]
    pts.sort(key=lambda c: _order_key(u, c))
    for c in pts:
        if semigroup_representation(config, c, search_bound, cone) is None:
            return SaturationResult(False, tuple(c))
    return SaturationResult(True, None)


def semigroup_module_generators(config: PointConfiguration, spec: str, bound: int) -> List[IntVec]:
    """Minimal G with every enumerated point of K(A) (or K(A)°) in some g + Z_{>=0}A."""
    if spec not in ("all", "interior"):
        raise ValueError(f"unknown semigroup spec {spec!r}")
    cone = cone_facets(config)
    u = _is_pointed(cone, config)
    if u is None:
        raise ConfigurationError("module generators need a pointed cone")
    test = cone.contains_interior if spec == "interior" else cone.contains
    pts = sorted((c for c in lattice_points_in_box(config.n, bound) if test(c)), key=lambda c: _order_key(u, c))
    gens: List[IntVec] = []
    for c in pts:
        covered = False
        for g in gens:
            diff = tuple(x - y for x, y in zip(c, g))
            if semigroup_representation(config, diff, None, cone) is not None:
                covered = True
                break
        if not covered:
            gens.append(tuple(c))
    for g in gens:
        if any(abs(x) == bound for x in g):
            raise BoundInsufficient(f"generator {list(g)} lies on the enumeration boundary; bound possibly insufficient")
    return gens


# ---------------------------------------------------------------------------
# faces of Conv(A u {0})


def faces(config: PointConfiguration, limit: int = MAX_FACE_POINTS) -> FaceLattice:
    """Face lattice of Conv(A u {0}) by exhaustive supporting-hyperplane search."""
    if config.m > limit:
        raise ConfigurationError(f"face enumeration limited to m <= {limit}, got {config.m}")
    n = config.n
    pts = [tuple([0] * n)] + list(config.points)
    idx = list(range(len(pts)))
    facets = set()
    for subset in itertools.combinations(idx, n):
        base = pts[subset[0]]
        diffs = [[x - y for x, y in zip(pts[i], base)] for i in subset[1:]]
        if n > 1 and linalg.rank(diffs) < n - 1:
            continue
        # normal u and offset: <u, p> = <u, base> on the subset
        if n == 1:
            normal = [1]
        else:
            ns = linalg.nullspace(diffs, n)
            if len(ns) != 1:
                continue
            normal = linalg.clear_denominators(ns[0])
        h = _dot(normal, base)
        vals = [_dot(normal, p) - h for p in pts]
        for sign in (1, -1):
            if all(sign * v >= 0 for v in vals):
                on = tuple(i for i in idx if vals[i] == 0)
                if len(on) < len(pts):
                    facets.add(on)
    # close under intersection
    face_sets = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for f in frontier:
            for g in facets:
                inter = tuple(sorted(set(f) & set(g)))
                if inter and inter not in face_sets:
                    new.add(inter)
        face_sets |= new
        frontier = new
    face_sets.add(tuple(idx))
    out = []
    for s in sorted(face_sets, key=lambda s: (len(s), s)):
        dim = _affine_dim([pts[i] for i in s])
        verts = tuple(i for i in s if _is_vertex(i, s, pts))
        out.append(Face(dimension=dim, vertex_set=verts, index_set=s, contains_zero=0 in s))
    out.sort(key=lambda f: (f.dimension, f.index_set))
    return FaceLattice(tuple(out))


def _affine_dim(points):
    if len(points) <= 1:
        return 0
    base = points[0]
    return linalg.rank([[x - y for x, y in zip(p, base)] for p in points[1:]])


def _is_vertex(i, s, pts):
    """Point i is not a convex combination of the other points of the face."""
    others = [pts[k] for k in s if k != i and pts[k] != pts[i]]
    if not others:
        return True
    # i is a vertex iff it is an extreme point: check via LP-free test on
    # small sets -- it is not a vertex iff it lies in the convex hull of others.
    return not _in_convex_hull(pts[i], others)


def _in_convex_hull(p, others):
    # exact check by enumerating simplices (Caratheodory), fine at desk scale
    n = len(p)
    for k in range(1, min(len(others), n + 1) + 1):
        for sub in itertools.combinations(others, k):
            # solve p = sum w_i s_i, sum w_i = 1, w >= 0
            M = [[Fraction(s[r]) for s in sub] for r in range(n)] + [[Fraction(1)] * k]
            rhs = [Fraction(x) for x in p] + [Fraction(1)]
            w = linalg.solve(M, rhs)
            if w is None:
                continue
            if linalg.rank(M) == k and all(x >= 0 for x in w):
                return True
    return False


# ---------------------------------------------------------------------------
# local mirror data


def build_local_data(fan, beta_matrix: Sequence[Sequence[int]]):
    """Configuration {[rho_i] + sum_j beta_ji n_j} u {n_j} and a_{m+r+1} = -sum n_j."""
    rays = [tuple(r) for r in fan.rays]
    n = fan.n
    m = len(rays)
    r = len(beta_matrix)
    for row in beta_matrix:
        if len(row) != m:
            raise ConfigurationError(f"beta row has length {len(row)}, expected {m} (number of rays)")
        if any(int(b) < 0 for b in row):
            raise ConfigurationError("beta entries must be nonnegative")
    pts = []
    for i in range(m):
        pts.append(tuple(rays[i]) + tuple(int(beta_matrix[j][i]) for j in range(r)))
    for j in range(r):
        pts.append(tuple([0] * n) + tuple(int(k == j) for k in range(r)))
    extra = tuple([0] * n) + tuple([-1] * r) if r else None
    return PointConfiguration(tuple(pts)), extra
