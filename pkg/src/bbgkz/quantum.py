"""Quantum product tables, their axioms, and the associated flat connection.

Structure constants are polynomials in formal parameters q_1..q_l, truncated
at a fixed total q-degree.  Nothing here computes Gromov-Witten invariants;
tables are input data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import ConfigurationError
from .polynomial import Polynomial

SCHEMA = "bbgkz.quantum-table/1"

PolyMatrix = List[List[Polynomial]]


def _truncate(p: Polynomial, order: int) -> Polynomial:
    return Polynomial._raw({e: c for e, c in p.terms.items() if sum(e) <= order}, p.nvars)


@dataclass
class QuantumTable:
    basis: List[str]
    degrees: List[Fraction]
    dimension: int
    parameters: List[str]
    parameter_degrees: List[Fraction]
    unit: int
    frame: List[int]
    truncation: int
    products: Dict[Tuple[int, int, int], Polynomial]
    euler: List[Fraction]
    gamma: Optional[List[Fraction]] = None
    mu: Optional[List[Fraction]] = None

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def nparams(self) -> int:
        return len(self.parameters)

    def zero(self) -> Polynomial:
        return Polynomial({}, self.nparams)

    def const(self, c) -> Polynomial:
        return Polynomial.constant(c, self.nparams)

    def grading(self) -> List[Fraction]:
        if self.mu is not None:
            return list(self.mu)
        return [d - Fraction(self.dimension, 2) for d in self.degrees]

    def product_vector(self, i: int, j: int) -> List[Polynomial]:
        return [self.products.get((i, j, k), self.zero()) for k in range(self.rank)]

    def multiply(self, a: Sequence[Polynomial], b: Sequence[Polynomial]) -> List[Polynomial]:
        out = [self.zero() for _ in range(self.rank)]
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k in range(self.rank):
                    c = self.products.get((i, j, k))
                    if c:
                        out[k] = out[k] + xy * c
        return [_truncate(p, self.truncation) for p in out]

    def basis_vector(self, i: int) -> List[Polynomial]:
        return [self.const(int(i == k)) for k in range(self.rank)]

    def lift(self, v: Sequence) -> List[Polynomial]:
        return [self.const(x) for x in v]

    def left_matrix(self, v: Sequence[Polynomial]) -> PolyMatrix:
        """Matrix of b -> v * b on coordinate columns."""
        cols = [self.multiply(v, self.basis_vector(j)) for j in range(self.rank)]
        return [[cols[j][k] for j in range(self.rank)] for k in range(self.rank)]

    def classical_part(self) -> "QuantumTable":
        zero_q = [0] * self.nparams
        prods = {}
        for key, p in self.products.items():
            c = p.terms.get(tuple(zero_q), Fraction(0))
            if c:
                prods[key] = self.const(c)
        return QuantumTable(self.basis, self.degrees, self.dimension, self.parameters, self.parameter_degrees,
                            self.unit, self.frame, self.truncation, prods, self.euler, self.gamma, self.mu)

    def to_json(self) -> dict:
        def frac(x):
            return str(x) if Fraction(x).denominator != 1 else int(x)

        out = {
            "schema": SCHEMA,
            "basis": list(self.basis),
            "degrees": [frac(d) for d in self.degrees],
            "dimension": self.dimension,
            "parameters": list(self.parameters),
            "parameter_degrees": [frac(d) for d in self.parameter_degrees],
            "unit": self.unit,
            "frame": list(self.frame),
            "truncation": self.truncation,
            "euler": [frac(x) for x in self.euler],
            "products": [
                {"i": i, "j": j, "k": k, "coeff": p.to_json()}
                for (i, j, k), p in sorted(self.products.items()) if p
            ],
        }
        if self.gamma is not None:
            out["gamma"] = [frac(x) for x in self.gamma]
        if self.mu is not None:
            out["mu"] = [frac(x) for x in self.mu]
        return out


def _coeff_from_json(data, nparams: int, where: str) -> Polynomial:
    if isinstance(data, (int, str)):
        return Polynomial.constant(Fraction(data), nparams)
    if isinstance(data, dict):
        p = Polynomial.from_json(data)
        if p.nvars != nparams:
            raise ConfigurationError(f"{where}: coefficient has {p.nvars} variables, expected {nparams}")
        return p
    raise ConfigurationError(f"{where}: coefficient must be a number, a fraction string or a polynomial object")


def quantum_table_from_json(data: dict) -> QuantumTable:
    if not isinstance(data, dict):
        raise ConfigurationError("quantum table must be a JSON object")
    for key in ("basis", "degrees", "dimension", "products", "euler"):
        if key not in data:
            raise ConfigurationError(f"quantum table is missing '{key}'")
    basis = [str(b) for b in data["basis"]]
    rank = len(basis)
    params = [str(p) for p in data.get("parameters", [])]
    degrees = [Fraction(d) for d in data["degrees"]]
    if len(degrees) != rank:
        raise ConfigurationError(f"'degrees' has length {len(degrees)}, expected {rank}")
    pdeg = [Fraction(d) for d in data.get("parameter_degrees", [0] * len(params))]
    if len(pdeg) != len(params):
        raise ConfigurationError("'parameter_degrees' does not match 'parameters'")
    products: Dict[Tuple[int, int, int], Polynomial] = {}
    for n, entry in enumerate(data["products"]):
        where = f"products[{n}]"
        try:
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
        except (KeyError, TypeError, ValueError):
            raise ConfigurationError(f"{where}: needs integer fields i, j, k")
        if not all(0 <= x < rank for x in (i, j, k)):
            raise ConfigurationError(f"{where}: index out of range")
        if (i, j, k) in products:
            raise ConfigurationError(f"{where}: duplicate entry for ({i}, {j}, {k})")
        products[(i, j, k)] = _coeff_from_json(entry.get("coeff", 0), len(params), where)

    def vec(key, default=None):
        if key not in data or data[key] is None:
            return default
        v = [Fraction(x) for x in data[key]]
        if len(v) != rank:
            raise ConfigurationError(f"'{key}' has length {len(v)}, expected {rank}")
        return v

    frame = [int(x) for x in data.get("frame", [])]
    if any(not 0 <= x < rank for x in frame):
        raise ConfigurationError("'frame' index out of range")
    unit = int(data.get("unit", 0))
    if not 0 <= unit < rank:
        raise ConfigurationError("'unit' index out of range")
    return QuantumTable(
        basis, degrees, int(data["dimension"]), params, pdeg, unit, frame,
        int(data.get("truncation", 0)), products, vec("euler"), vec("gamma"), vec("mu"),
    )


def quantum_table_ingest(path: str) -> Tuple[QuantumTable, "AxiomReport"]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}")
    table = quantum_table_from_json(data)
    return table, check_axioms(table)


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    checks: Dict[str, bool]
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]


def _vec_eq(a: Sequence[Polynomial], b: Sequence[Polynomial]) -> bool:
    return all((x - y).is_zero() for x, y in zip(a, b))


def _q_coefficients(v: Sequence[Polynomial]) -> List[List[Fraction]]:
    """Split a vector of q-polynomials into constant vectors, one per q-monomial."""
    exps = sorted({e for p in v for e in p.terms})
    return [[p.terms.get(e, Fraction(0)) for p in v] for e in exps]


def check_axioms(table: QuantumTable) -> AxiomReport:
    n = table.rank
    checks: Dict[str, bool] = {}
    details: Dict[str, str] = {}

    bad = next(((i, j) for i in range(n) for j in range(i + 1, n)
                if not _vec_eq(table.product_vector(i, j), table.product_vector(j, i))), None)
    checks["commutativity"] = bad is None
    if bad:
        details["commutativity"] = f"{table.basis[bad[0]]}*{table.basis[bad[1]]} != {table.basis[bad[1]]}*{table.basis[bad[0]]}"

    one = table.basis_vector(table.unit)
    bad = next((i for i in range(n) if not _vec_eq(table.multiply(one, table.basis_vector(i)), table.basis_vector(i))), None)
    checks["unit"] = bad is None
    if bad is not None:
        details["unit"] = f"unit times {table.basis[bad]} is wrong"

    bad = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                ei, ej, ek = (table.basis_vector(x) for x in (i, j, k))
                lhs = table.multiply(table.multiply(ei, ej), ek)
                rhs = table.multiply(ei, table.multiply(ej, ek))
                if not _vec_eq(lhs, rhs):
                    bad = (i, j, k)
                    break
            if bad:
                break
        if bad:
            break
    checks["associativity"] = bad is None
    if bad:
        details["associativity"] = "(%s*%s)*%s differs" % tuple(table.basis[x] for x in bad)

    bad = None
    for (i, j, k), p in sorted(table.products.items()):
        for e in p.terms:
            qdeg = sum(d * x for d, x in zip(table.parameter_degrees, e))
            if table.degrees[i] + table.degrees[j] != table.degrees[k] + qdeg:
                bad = (i, j, k)
                break
        if bad:
            break
    checks["degree"] = bad is None
    if bad:
        details["degree"] = "coefficient of %s in %s*%s has the wrong degree" % (table.basis[bad[2]], table.basis[bad[0]], table.basis[bad[1]])

    if table.gamma is not None:
        g = table.lift(table.gamma)
        classical = table.classical_part()
        bad = next((i for i in range(n) if not _vec_eq(table.multiply(g, table.basis_vector(i)),
                                                      classical.multiply(g, table.basis_vector(i)))), None)
        checks["divisor"] = bad is None
        if bad is not None:
            details["divisor"] = f"gamma*{table.basis[bad]} differs from the cup product"
        N = [[x.terms.get((0,) * table.nparams, Fraction(0)) for x in row] for row in classical.left_matrix(g)]
        im = linalg.span_basis(linalg.transpose(N))
        ker = linalg.nullspace(N, n)
        for name, sub in (("ideal_image", im), ("ideal_kernel", ker)):
            ok = True
            for v in sub:
                for i in range(n):
                    prod = table.multiply(table.basis_vector(i), table.lift(v))
                    if not all(linalg.in_span(c, sub) for c in _q_coefficients(prod)):
                        ok = False
                        details[name] = f"{table.basis[i]} times a vector of the subspace leaves it"
                        break
                if not ok:
                    break
            checks[name] = ok
    return AxiomReport(checks, details)


# ---------------------------------------------------------------------------
# induced products


@dataclass
class InducedProducts:
    cok_basis: List[int]  # standard basis indices spanning a complement of Im N
    cok_table: Dict[Tuple[int, int, int], Polynomial]
    ker_basis: List[List[Fraction]]
    ker_action: Dict[Tuple[int, int, int], Polynomial]  # (cok index a, ker index b) -> coefficient on ker index c


def induced_products(table: QuantumTable) -> InducedProducts:
    """Product on Cok N and the Cok N-module structure on Ker N, N = gamma*."""
    if table.gamma is None:
        raise ConfigurationError("table has no gamma class")
    n = table.rank
    zero_q = (0,) * table.nparams
    g = table.lift(table.gamma)
    N = [[x.terms.get(zero_q, Fraction(0)) for x in row] for row in table.classical_part().left_matrix(g)]
    im = linalg.span_basis(linalg.transpose(N))
    std = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    comp = linalg.complement_in(im, std)
    cok_idx = [next(i for i, x in enumerate(v) if x) for v in comp]
    ker = linalg.nullspace(N, n)

    def cok_coords(v: Sequence[Fraction]) -> List[Fraction]:
        c = linalg.coordinates(v, comp + im)
        return c[: len(comp)]

    def split(prod: Sequence[Polynomial], coords) -> Dict[int, Polynomial]:
        out: Dict[int, Polynomial] = {}
        for e in sorted({e for p in prod for e in p.terms}):
            vec = [p.terms.get(e, Fraction(0)) for p in prod]
            for c, x in enumerate(coords(vec)):
                if x:
                    out[c] = out.get(c, table.zero()) + Polynomial.monomial(e, x)
        return out

    cok_table = {}
    for a, i in enumerate(cok_idx):
        for b, j in enumerate(cok_idx):
            for c, p in split(table.product_vector(i, j), cok_coords).items():
                if p:
                    cok_table[(a, b, c)] = p
    ker_action = {}
    for a, i in enumerate(cok_idx):
        for b, v in enumerate(ker):
            prod = table.multiply(table.basis_vector(i), table.lift(v))
            for c, p in split(prod, lambda w: linalg.coordinates(w, ker)).items():
                if p:
                    ker_action[(a, b, c)] = p
    return InducedProducts(cok_idx, cok_table, ker, ker_action)


# ---------------------------------------------------------------------------
# connection


@dataclass
class Connection:
    """nabla_X = X + A_X with A_X = sum_k lambda^k M_k (M_k matrices of q-polynomials)."""

    directions: List[str]
    derivations: Dict[str, Optional[int]]  # direction -> parameter index for q d/dq, or None
    matrices: Dict[str, Dict[int, PolyMatrix]]
    truncation: int
    nparams: int


def _mat_zero(n: int, nv: int) -> PolyMatrix:
    return [[Polynomial({}, nv) for _ in range(n)] for _ in range(n)]


def _mat_mul(A: PolyMatrix, B: PolyMatrix, order: int) -> PolyMatrix:
    n = len(A)
    out = _mat_zero(n, A[0][0].nvars if n else 0)
    for i in range(n):
        for k in range(n):
            if A[i][k]:
                for j in range(n):
                    if B[k][j]:
                        out[i][j] = out[i][j] + A[i][k] * B[k][j]
    return [[_truncate(p, order) for p in row] for row in out]


def _mat_add(A: PolyMatrix, B: PolyMatrix, s: int = 1) -> PolyMatrix:
    return [[a + b * s for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _apply_derivation(M: Dict[int, PolyMatrix], which: Optional[int], is_lambda: bool) -> Dict[int, PolyMatrix]:
    out = {}
    for k, mat in M.items():
        if is_lambda:
            if k:
                out[k] = [[p * k for p in row] for row in mat]
        elif which is not None:
            out[k] = [[_euler_derivative(p, which) for p in row] for row in mat]
    return out


def _euler_derivative(p: Polynomial, i: int) -> Polynomial:
    """q_i d/dq_i."""
    return Polynomial._raw({e: c * e[i] for e, c in p.terms.items() if e[i]}, p.nvars)


def qdm_connection(table: QuantumTable, truncation: Optional[int] = None) -> Connection:
    n, nv = table.rank, table.nparams
    order = table.truncation if truncation is None else truncation
    directions, derivs, mats = [], {}, {}
    for idx, b in enumerate(table.frame):
        name = table.basis[b]
        C = table.left_matrix(table.basis_vector(b))
        directions.append(name)
        derivs[name] = idx if idx < nv else None
        mats[name] = {-1: [[-_truncate(p, order) for p in row] for row in C]}
    E = table.left_matrix(table.lift(table.euler))
    mu = table.grading()
    M0 = _mat_zero(n, nv)
    for i in range(n):
        M0[i][i] = Polynomial.constant(mu[i], nv)
    directions.append("lambda")
    derivs["lambda"] = None
    mats["lambda"] = {-1: [[_truncate(p, order) for p in row] for row in E], 0: M0}
    return Connection(directions, derivs, mats, order, nv)


def curvature(conn: Connection) -> Dict[Tuple[str, str], Dict[int, PolyMatrix]]:
    """Nonzero components of F(X,Y) = X(A_Y) - Y(A_X) + [A_X, A_Y], by lambda power."""
    out = {}
    dirs = conn.directions
    for a in range(len(dirs)):
        for b in range(a + 1, len(dirs)):
            X, Y = dirs[a], dirs[b]
            AX, AY = conn.matrices[X], conn.matrices[Y]
            terms: Dict[int, PolyMatrix] = {}

            def acc(k, mat, s=1):
                if k in terms:
                    terms[k] = _mat_add(terms[k], mat, s)
                else:
                    terms[k] = [[p * s for p in row] for row in mat]

            for k, m in _apply_derivation(AY, conn.derivations[X], X == "lambda").items():
                acc(k, m)
            for k, m in _apply_derivation(AX, conn.derivations[Y], Y == "lambda").items():
                acc(k, m, -1)
            for i, P in AX.items():
                for j, Q in AY.items():
                    acc(i + j, _mat_mul(P, Q, conn.truncation))
                    acc(i + j, _mat_mul(Q, P, conn.truncation), -1)
            nz = {k: [[_truncate(p, conn.truncation) for p in row] for row in m] for k, m in terms.items()}
            nz = {k: m for k, m in nz.items() if any(p for row in m for p in row)}
            if nz:
                out[(X, Y)] = nz
    return out


def flatness_check(conn: Connection) -> bool:
    return not curvature(conn)


# ---------------------------------------------------------------------------
# standard tables


def classical_table(bc, euler: Optional[Sequence] = None, with_gamma: bool = True) -> QuantumTable:
    """Cup-product table of a BundleCohomology (no quantum parameters)."""
    from .bundle import BundleCohomology  # noqa: F401  (type only)

    n = bc.dim
    unit_vec = [Fraction(int(i == j)) for i in range(n) for j in range(n)]
    prods = {}
    for i in range(n):
        for j in range(n):
            v = bc.multiply(unit_vec[i * n:(i + 1) * n], unit_vec[j * n:(j + 1) * n])
            for k, x in enumerate(v):
                if x:
                    prods[(i, j, k)] = Polynomial.constant(x, 0)
    degrees = [Fraction(d) for d in bc.degrees()]
    frame = [i for i, d in enumerate(degrees) if d == 1]
    one = bc.one()
    unit = next(i for i, x in enumerate(one) if x)
    if euler is None:
        euler = [Fraction(0)] * n
    return QuantumTable(bc.names(), degrees, bc.dim_Y, [], [], unit, frame, 0, prods,
                        [Fraction(x) for x in euler], bc.gamma() if with_gamma else None)


def p1_small_quantum_table(truncation: int = 4) -> QuantumTable:
    """H*(P^1) with H*H = q, Euler field 2H."""
    q = Polynomial.variable(0, 1)
    one = Polynomial.constant(1, 1)
    prods = {(0, 0, 0): one, (0, 1, 1): one, (1, 0, 1): one, (1, 1, 0): q}
    return QuantumTable(["1", "H"], [Fraction(0), Fraction(1)], 1, ["q"], [Fraction(2)], 0, [1],
                        truncation, prods, [Fraction(0), Fraction(2)])
