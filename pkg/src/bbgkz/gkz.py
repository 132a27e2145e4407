"""GKZ ideals, better-behaved presentations, intertwiners and Gamma-series.

A truncated series is stored as a finite sum of terms
``x^l * (A + B * L)`` with ``L = sum_j u_j log x_j`` for a fixed log
direction ``u``.  Applying an operator keeps that shape, and a residual
compares the ``1`` and ``L`` parts separately, so it stays exact whenever
the exponents are integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BoundInsufficient, ConfigurationError
from .lattice import (
    PointConfiguration,
    cone_facets,
    kernel_lattice,
    semigroup_module_generators,
    semigroup_representation,
)
from .operators import (
    OperatorElement,
    box_operator,
    conjugation_report,
    dx_power,
    euler_operator,
    ldx_power,
    rtilde_euler,
    rtilde_grading,
    rtilde_membership,
)
from .polynomial import binomial_exponents, lattice_ideal

Number = Union[Fraction, float]


# ---------------------------------------------------------------------------
# presentations and ideals


@dataclass(frozen=True)
class RelationSchema:
    kind: str  # "shift" or "euler"
    c: Tuple[int, ...]
    index: int  # j for shift (1-based), i for euler (1-based)

    def to_text(self, config: PointConfiguration, beta: Sequence[Fraction]) -> str:
        c = list(self.c)
        if self.kind == "shift":
            a = config.points[self.index - 1]
            target = [x + y for x, y in zip(c, a)]
            return f"dx{self.index} e({_vec(c)}) = e({_vec(target)})"
        i = self.index - 1
        parts = [f"{a[i]}*x{j + 1}*dx{j + 1}" for j, a in enumerate(config.points) if a[i]]
        const = Fraction(c[i]) - Fraction(beta[i])
        return f"({' + '.join(parts)} + {const}) e({_vec(c)}) = 0"


def _vec(v) -> str:
    return ",".join(str(x) for x in v)


@dataclass(frozen=True)
class BBGKZPresentation:
    config: PointConfiguration
    gamma_set_spec: str
    beta: Tuple[Fraction, ...]
    module_generators: Tuple[Tuple[int, ...], ...]
    relation_schemas: Tuple[RelationSchema, ...]

    def to_json(self) -> dict:
        return {
            "gamma_set": self.gamma_set_spec,
            "beta": [str(b) for b in self.beta],
            "module_generators": [list(c) for c in self.module_generators],
            "relations": [r.to_text(self.config, self.beta) for r in self.relation_schemas],
        }


def build_bb_presentation(
    config: PointConfiguration,
    gamma_set_spec: Union[str, Sequence[Sequence[int]]],
    beta: Sequence,
    bound: int = 6,
) -> BBGKZPresentation:
    """Presentation of the better-behaved system for Gamma = union of c + Z_{>=0}A."""
    beta = tuple(Fraction(b) for b in beta)
    if len(beta) != config.n:
        raise ConfigurationError(f"beta has length {len(beta)}, expected {config.n}")
    if isinstance(gamma_set_spec, str):
        gens = semigroup_module_generators(config, gamma_set_spec, bound)
        if not gens:
            raise ConfigurationError(f"no lattice points found for Gamma = {gamma_set_spec}")
        spec = gamma_set_spec
    else:
        cone = cone_facets(config)
        gens = [tuple(int(x) for x in c) for c in gamma_set_spec]
        for c in gens:
            if len(c) != config.n or not cone.contains(c):
                raise ConfigurationError(f"module generator {list(c)} is not in K(A)")
        spec = "explicit"
    schemas = []
    for c in gens:
        for j in range(config.m):
            schemas.append(RelationSchema("shift", c, j + 1))
        for i in range(config.n):
            schemas.append(RelationSchema("euler", c, i + 1))
    return BBGKZPresentation(config, spec, beta, tuple(gens), tuple(schemas))


@dataclass(frozen=True)
class GKZIdeal:
    level: str  # "ordinary" or "lambda"
    generators: Tuple[OperatorElement, ...]
    labels: Tuple[str, ...]
    config: PointConfiguration
    gamma: Tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "gamma": [str(g) for g in self.gamma],
            "generators": [{"label": l, "text": g.to_str(), "operator": g.to_json()} for l, g in zip(self.labels, self.generators)],
        }


def box_vectors(config: PointConfiguration) -> List[Tuple[int, ...]]:
    """Exponent vectors p of a generating set of binomials of the lattice ideal."""
    seq = kernel_lattice(config)
    if not seq.kernel_basis:
        return []
    ideal = lattice_ideal(seq.kernel_basis, config.m)
    out = []
    for g in ideal.generators:
        p = binomial_exponents(g)
        if p is None:
            raise ArithmeticError(f"lattice ideal generator {g} is not a pure binomial")
        out.append(p)
    return out


def build_ordinary_ideal(config: PointConfiguration, gamma: Sequence) -> GKZIdeal:
    gamma = tuple(Fraction(g) for g in gamma)
    gens, labels = [], []
    for p in box_vectors(config):
        gens.append(box_operator(p))
        labels.append(f"box{list(p)}")
    for i in range(config.n):
        gens.append(euler_operator(config, i + 1, gamma))
        labels.append(f"euler{i + 1}")
    return GKZIdeal("ordinary", tuple(gens), tuple(labels), config, gamma)


def build_lambda_ideal(config: PointConfiguration, gamma: Sequence) -> GKZIdeal:
    gamma = tuple(Fraction(g) for g in gamma)
    gens, labels = [], []
    for p in box_vectors(config):
        gens.append(box_operator(p, "lambda"))
        labels.append(f"box{list(p)}")
    gens.append(rtilde_grading(config))
    labels.append("grading")
    for i in range(config.n):
        gens.append(rtilde_euler(config, i + 1, gamma))
        labels.append(f"euler{i + 1}")
    for g in gens:
        assert rtilde_membership(g), g
    return GKZIdeal("lambda", tuple(gens), tuple(labels), config, gamma)


@dataclass(frozen=True)
class Intertwiner:
    b: Tuple[int, ...]
    d_level: OperatorElement
    lambda_level: OperatorElement
    identities: Dict[str, bool]

    @property
    def verified(self) -> bool:
        return all(self.identities.values())


def intertwiner(config: PointConfiguration, beta: Sequence, c1: Sequence[int], c2: Sequence[int], bound: Optional[int] = None) -> Intertwiner:
    """Multiplication by prod dx^b from e(c1)-data to e(c2)-data, c1 = c2 + sum b_j a_j."""
    diff = [int(x) - int(y) for x, y in zip(c1, c2)]
    try:
        b = semigroup_representation(config, diff, bound)
    except BoundInsufficient as exc:
        raise BoundInsufficient(f"no representation found within bound: {exc}") from exc
    if b is None:
        raise BoundInsufficient(f"no representation found within bound: {diff} is not in Z_{{>=0}}A")
    report = conjugation_report(config, beta, c1, c2, b, box_vectors(config))
    return Intertwiner(tuple(b), dx_power(b), ldx_power(b), report)


# ---------------------------------------------------------------------------
# truncated log series


@dataclass(frozen=True)
class LogSeries:
    """Finite sum of x^l (A + B*L), L = sum u_j log x_j."""

    m: int
    u: Tuple[int, ...]
    terms: Mapping[Tuple[Fraction, ...], Tuple[Fraction, Fraction]]

    def __add__(self, other: "LogSeries") -> "LogSeries":
        self._compatible(other)
        out = dict(self.terms)
        for e, (a, b) in other.terms.items():
            a0, b0 = out.get(e, (Fraction(0), Fraction(0)))
            out[e] = (a0 + a, b0 + b)
        return LogSeries(self.m, self.u, _clean(out))

    def __neg__(self) -> "LogSeries":
        return self.scale(-1)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return self + (-other)

    def scale(self, c) -> "LogSeries":
        c = Fraction(c)
        return LogSeries(self.m, self.u, _clean({e: (a * c, b * c) for e, (a, b) in self.terms.items()}))

    def _compatible(self, other):
        if other.m != self.m:
            raise ValueError("series live in different variable counts")
        if other.u != self.u and other.terms and self.terms:
            if any(b for _, b in other.terms.values()) and any(b for _, b in self.terms.values()):
                raise ValueError("series have different log directions")

    def apply(self, op: OperatorElement) -> "LogSeries":
        if op.m != self.m:
            raise ValueError("operator and series have different variable counts")
        out: Dict[Tuple[Fraction, ...], Tuple[Fraction, Fraction]] = {}
        for (a, alpha, c, beta), coef in op.terms.items():
            if a or c:
                raise ValueError("series residuals are only defined for lambda-free operators")
            for e, (A, B) in self.terms.items():
                e2, A2, B2 = list(e), A, B
                for j, k in enumerate(beta):
                    for _ in range(k):
                        lj = e2[j]
                        A2, B2 = lj * A2 + self.u[j] * B2, lj * B2
                        e2[j] = lj - 1
                    if not A2 and not B2:
                        break
                if not A2 and not B2:
                    continue
                key = tuple(x + y for x, y in zip(e2, alpha))
                a0, b0 = out.get(key, (Fraction(0), Fraction(0)))
                out[key] = (a0 + coef * A2, b0 + coef * B2)
        return LogSeries(self.m, self.u, _clean(out))

    def evaluate(self, point: Sequence) -> Tuple[Number, Number]:
        """Values of the coefficient of 1 and of L at ``point``."""
        sa: Number = Fraction(0)
        sb: Number = Fraction(0)
        for e, (A, B) in self.terms.items():
            w = monomial_value(e, point)
            sa = sa + A * w if not isinstance(w, float) else float(sa) + float(A) * w
            sb = sb + B * w if not isinstance(w, float) else float(sb) + float(B) * w
        for s in (sa, sb):
            if isinstance(s, float) and not math.isfinite(s):
                raise ArithmeticError("divergent evaluation")
        return sa, sb

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "log_direction": list(self.u),
            "terms": [
                {"exp": [str(x) for x in e], "A": str(a), "B": str(b)}
                for e, (a, b) in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LogSeries":
        m = int(data["m"])
        u = tuple(int(x) for x in data.get("log_direction", [0] * m))
        terms = {}
        for t in data["terms"]:
            e = tuple(Fraction(x) for x in t["exp"])
            if len(e) != m:
                raise ConfigurationError(f"series term exponent has length {len(e)}, expected {m}")
            terms[e] = (Fraction(t.get("A", 0)), Fraction(t.get("B", 0)))
        return cls(m, u, _clean(terms))


def _clean(terms):
    return {e: (a, b) for e, (a, b) in terms.items() if a or b}


def monomial_value(e: Sequence[Fraction], point: Sequence) -> Number:
    exact = True
    val: Number = Fraction(1)
    for x, k in zip(point, e):
        if k == 0:
            continue
        x = Fraction(x) if not isinstance(x, float) else x
        if x == 0 and k < 0:
            raise ArithmeticError("divergent evaluation: negative power of a zero coordinate")
        if isinstance(k, Fraction) and k.denominator != 1 or isinstance(x, float):
            if x < 0:
                raise ArithmeticError("fractional power of a negative coordinate")
            exact = False
            val = float(val) * float(x) ** float(k)
        else:
            kk = int(k)
            val = val * Fraction(x) ** kk if exact else val * float(x) ** kk
    return val


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def _gamma_factors(l: Fraction, phi: Fraction, u: int) -> Tuple[Fraction, Fraction]:
    """(g0, g1): value and s-derivative of Gamma(phi+1)/Gamma(l + s*u + 1) at s = 0.

    For integer l (phi = 0) the constant Euler-gamma part of g1 is dropped.
    """
    if l.denominator == 1:
        n = int(l)
        if n >= 0:
            f = Fraction(1, math.factorial(n))
            return f, -u * _harmonic(n) * f
        k = -n - 1
        return Fraction(0), Fraction(u * (-1) ** k * math.factorial(k))
    if u:
        raise ConfigurationError("a log direction needs integer exponents on its support")
    # Pochhammer ratio Gamma(phi+1)/Gamma(l+1) with l - phi integer
    d = int(l - phi)
    r = Fraction(1)
    if d >= 0:
        for t in range(1, d + 1):
            r /= phi + t
    else:
        for t in range(0, -d):
            r *= phi - t
    return r, Fraction(0)


@dataclass(frozen=True)
class SeriesSolution:
    config: PointConfiguration
    gamma: Tuple[Fraction, ...]
    v: Tuple[Fraction, ...]
    radius: int
    log_direction: Optional[Tuple[int, ...]]
    support: Tuple[Tuple[int, ...], ...]
    series: LogSeries

    def to_json(self) -> dict:
        return {
            "gamma": [str(g) for g in self.gamma],
            "v": [str(x) for x in self.v],
            "radius": self.radius,
            "series": self.series.to_json(),
        }


def gamma_series(
    config: PointConfiguration,
    gamma: Sequence,
    v: Sequence,
    radius: int,
    log_direction: Optional[Sequence[int]] = None,
) -> SeriesSolution:
    """Truncated Gamma-series sum_{p in L_A} x^{v+p} / prod Gamma(v_j + p_j + 1).

    Non-integer coordinates are normalized by Gamma(frac(v_j) + 1), so all
    coefficients are rational.  With ``log_direction`` u (an element of
    L_A tensor Q) the series is the derivative in s at s = 0 of the series
    with base v + s*u, which brings in log terms.
    Truncation keeps p = sum k_i L_i with |k_i| <= radius.
    """
    gamma = tuple(Fraction(g) for g in gamma)
    v = tuple(Fraction(x) for x in v)
    if len(v) != config.m:
        raise ConfigurationError(f"v has length {len(v)}, expected {config.m}")
    if tuple(config.combination(v)) != gamma:
        raise ConfigurationError("sum v_j a_j must equal gamma")
    u = tuple(int(x) for x in log_direction) if log_direction is not None else (0,) * config.m
    if any(config.combination(u)):
        raise ConfigurationError("log direction must lie in the kernel lattice")
    phi = tuple(x - math.floor(x) for x in v)
    basis = kernel_lattice(config).kernel_basis
    import itertools

    terms: Dict[Tuple[Fraction, ...], Tuple[Fraction, Fraction]] = {}
    support = []
    for ks in itertools.product(range(-radius, radius + 1), repeat=len(basis)):
        p = tuple(sum(k * row[j] for k, row in zip(ks, basis)) for j in range(config.m))
        l = tuple(x + y for x, y in zip(v, p))
        facs = [_gamma_factors(lj, fj, uj) for lj, fj, uj in zip(l, phi, u)]
        g0s = [f[0] for f in facs]
        B = math.prod(g0s) if log_direction is not None else Fraction(0)
        A = Fraction(0)
        if log_direction is None:
            A = math.prod(g0s)
        else:
            for j, (g0, g1) in enumerate(facs):
                if g1:
                    A += g1 * math.prod(g0s[:j] + g0s[j + 1:])
        if A or B:
            terms[l] = (Fraction(A), Fraction(B))
            support.append(p)
    return SeriesSolution(
        config, gamma, v, radius,
        u if log_direction is not None else None,
        tuple(support),
        LogSeries(config.m, u, terms),
    )


def _abs(x: Number) -> Number:
    return abs(x)


def residual(ideal: GKZIdeal, s: Union[SeriesSolution, LogSeries], point: Sequence) -> Number:
    """max over generators P of max(|(P s)_1|, |(P s)_L|) at ``point``."""
    if ideal.level != "ordinary":
        raise ValueError("series residuals are defined for the ordinary ideal only")
    series = s.series if isinstance(s, SeriesSolution) else s
    worst: Number = Fraction(0)
    for g in ideal.generators:
        a, b = series.apply(g).evaluate(point)
        worst = max(worst, _abs(a), _abs(b))
    return worst


def residuals_by_generator(ideal: GKZIdeal, s: Union[SeriesSolution, LogSeries], point: Sequence) -> Dict[str, Number]:
    series = s.series if isinstance(s, SeriesSolution) else s
    out = {}
    for label, g in zip(ideal.labels, ideal.generators):
        a, b = series.apply(g).evaluate(point)
        out[label] = max(_abs(a), _abs(b))
    return out


# ---------------------------------------------------------------------------
# better-behaved tuples


def bb_tuple(
    pres: BBGKZPresentation,
    c0: Sequence[int],
    v0: Sequence,
    radius: int,
    bound: Optional[int] = None,
) -> Dict[Tuple[int, ...], LogSeries]:
    """Phi_c for every module generator c and every shift c + a_j.

    Base exponents are v_c = v0 - b with sum b_j a_j = c - c0 (b any
    integer solution), so that dx_j Phi_c = Phi_{c + a_j} termwise.
    Requires sum_j v0_j a_j = beta - c0.
    """
    from . import linalg

    config = pres.config
    c0 = tuple(int(x) for x in c0)
    v0 = tuple(Fraction(x) for x in v0)
    target = tuple(b - c for b, c in zip(pres.beta, c0))
    if tuple(config.combination(v0)) != target:
        raise ConfigurationError("sum v0_j a_j must equal beta - c0")
    out: Dict[Tuple[int, ...], LogSeries] = {}
    bases: Dict[Tuple[int, ...], Tuple[Fraction, ...]] = {}
    for c in pres.module_generators:
        diff = [x - y for x, y in zip(c, c0)]
        b = linalg.integer_solve([list(p) for p in config.points], diff)
        if b is None:
            raise ConfigurationError(f"{diff} is not in the lattice spanned by A")
        vc = tuple(x - y for x, y in zip(v0, b))
        bases.setdefault(tuple(c), vc)
        for j in range(config.m):
            cj = tuple(x + y for x, y in zip(c, config.points[j]))
            bases.setdefault(cj, tuple(x - int(k == j) for k, x in enumerate(vc)))
    for c, vc in bases.items():
        gam = tuple(pres.beta[i] - c[i] for i in range(config.n))
        out[c] = gamma_series(config, gam, vc, radius).series
    return out


@dataclass(frozen=True)
class BBCheckReport:
    residuals: Dict[str, Number]
    missing: Tuple[str, ...]

    @property
    def max_residual(self) -> Number:
        return max(self.residuals.values(), default=Fraction(0))

    def passed(self, tol: float = 1e-8) -> bool:
        return not self.missing and self.max_residual < tol


def bb_solution_check(pres: BBGKZPresentation, phis: Mapping[Tuple[int, ...], LogSeries], point: Sequence) -> BBCheckReport:
    """Residuals of dx_j Phi_c - Phi_{c+a_j} and of the Euler relations."""
    config = pres.config
    residuals: Dict[str, Number] = {}
    missing: List[str] = []
    for schema in pres.relation_schemas:
        c = schema.c
        label = schema.to_text(config, pres.beta)
        phi = phis.get(tuple(c))
        if phi is None:
            missing.append(f"Phi_{list(c)}")
            continue
        if schema.kind == "shift":
            j = schema.index - 1
            cj = tuple(x + y for x, y in zip(c, config.points[j]))
            target = phis.get(cj)
            if target is None:
                missing.append(f"Phi_{list(cj)}")
                continue
            diff = phi.apply(OperatorElement.dx(j, config.m)) - target
        else:
            i = schema.index
            op = euler_operator(config, i, [b - x for b, x in zip(pres.beta, c)])
            diff = phi.apply(op)
        a, b = diff.evaluate(point)
        residuals[label] = max(abs(a), abs(b))
    return BBCheckReport(residuals, tuple(dict.fromkeys(missing)))
