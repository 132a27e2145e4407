"""Face-wise certificate that a Laurent family has no critical points at infinity.

For a face sigma of Conv(A u {0}) not containing 0, the face polynomial is
F_sigma = sum_{a_i in sigma} gamma_i t^{a_i}.  The face passes when the
ideal generated by the t_k dF/dt_k has no zero on the torus, certified by
the Groebner basis of that ideal plus 1 - y*t_1*...*t_n being {1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import ConfigurationError
from .lattice import Face, PointConfiguration, faces
from .polynomial import MonomialOrder, Polynomial, groebner


@dataclass(frozen=True)
class FaceVerdict:
    index_set: Tuple[int, ...]
    dimension: int
    proper: bool
    polynomial: str
    nondegenerate: bool
    reason: str


@dataclass(frozen=True)
class NondegeneracyReport:
    faces: Tuple[FaceVerdict, ...]

    @property
    def nondegenerate(self) -> bool:
        return all(f.nondegenerate for f in self.faces)

    def failing(self) -> List[FaceVerdict]:
        return [f for f in self.faces if not f.nondegenerate]

    def to_json(self) -> dict:
        return {
            "nondegenerate": self.nondegenerate,
            "faces": [
                {
                    "index_set": list(f.index_set),
                    "dimension": f.dimension,
                    "proper": f.proper,
                    "polynomial": f.polynomial,
                    "nondegenerate": f.nondegenerate,
                    "reason": f.reason,
                }
                for f in self.faces
            ],
        }


def face_polynomial(config: PointConfiguration, gamma: Sequence[Fraction], index_set: Sequence[int]):
    """Face polynomial cleared of its monomial denominator: (G, shift) with F = t^shift * G."""
    n = config.n
    idx = [i for i in index_set if i > 0]
    exps = [config.points[i - 1] for i in idx]
    shift = tuple(min(e[k] for e in exps) for k in range(n))
    terms = {}
    for i, e in zip(idx, exps):
        key = tuple(x - s for x, s in zip(e, shift))
        terms[key] = terms.get(key, 0) + Fraction(gamma[i - 1])
    return Polynomial(terms, n), shift


def _laurent_str(G: Polynomial, shift, names):
    if G.is_zero():
        return "0"
    out = {tuple(x + s for x, s in zip(e, shift)): c for e, c in G.terms.items()}
    parts = []
    for e, c in sorted(out.items(), reverse=True):
        mono = "*".join((names[k] if x == 1 else f"{names[k]}^{x}") for k, x in enumerate(e) if x)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def torus_critical_ideal(G: Polynomial, shift, include_f: bool) -> List[Polynomial]:
    """Generators t_k dF/dt_k (and F itself if requested), written via G."""
    n = G.nvars
    gens = []
    for k in range(n):
        tk = Polynomial.variable(k, n)
        gens.append(tk * G.derivative(k) + G * shift[k])
    if include_f:
        gens.append(G)
    return [g for g in gens if not g.is_zero()]


def torus_empty(gens: Sequence[Polynomial], n: int) -> bool:
    """True when the polynomials have no common zero with all t_k != 0."""
    if not gens:
        return False
    ext = [g.extend(n + 1, 0) for g in gens]
    prod = Polynomial.monomial((1,) * n + (1,))
    ext.append(Polynomial.constant(1, n + 1) - prod)
    G = groebner(ext, MonomialOrder("grevlex", n + 1))
    return G.is_unit()


def nondegeneracy_check(config: PointConfiguration, gamma: Sequence) -> NondegeneracyReport:
    if len(gamma) != config.m:
        raise ConfigurationError(f"gamma has length {len(gamma)}, expected {config.m}")
    gamma = [Fraction(g) for g in gamma]
    lattice = faces(config)
    full = max(lattice.faces, key=lambda f: f.dimension)
    names = [f"t{k + 1}" for k in range(config.n)]
    verdicts = []
    for face in lattice.faces:
        if face.contains_zero:
            continue
        # a face avoiding 0 is never the whole polytope; kept general anyway
        proper = face.index_set != full.index_set
        G, shift = face_polynomial(config, gamma, face.index_set)
        text = _laurent_str(G, shift, names)
        if G.is_zero():
            verdicts.append(FaceVerdict(face.index_set, face.dimension, proper, text, False, "vanishing face coefficients"))
            continue
        gens = torus_critical_ideal(G, shift, include_f=not proper)
        ok = torus_empty(gens, config.n)
        reason = "critical locus empty on the torus" if ok else "critical point on the torus"
        verdicts.append(FaceVerdict(face.index_set, face.dimension, proper, text, ok, reason))
    return NondegeneracyReport(tuple(verdicts))
