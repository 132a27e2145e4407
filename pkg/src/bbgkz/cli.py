"""Command line entry point: ``bbgkz <command> ...``.

Exit codes: 0 when every check passes (computed facts such as "not
saturated" are not failures), 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from typing import List, Optional

from . import bundle, gkz, lattice, linalg, nondegeneracy, quantum, tep, toric
from .errors import BbgkzError, BoundInsufficient, ConfigurationError, ResourceLimit
from .io import RunReport, parse_int_matrix, parse_int_vector, parse_vector, read_json

BUILTIN_CONFIGS = {
    "A23": [[2], [3]],
    "gauss": [[1, 0], [1, 1], [1, 2]],
    "local-p2": [[1, 0, 1], [0, 1, 1], [-1, -1, 1], [0, 0, 1]],
    "twisted-cubic": [[1, 0], [1, 1], [1, 2], [1, 3]],
}


def _fan_by_name(name: str) -> Optional[toric.Fan]:
    key = name.lower()
    if key in ("p1xp1", "p1*p1"):
        p1 = toric.projective_space_fan(1)
        return toric.product_fan(p1, p1)
    if key.startswith("p") and key[1:].isdigit() and int(key[1:]) >= 1:
        return toric.projective_space_fan(int(key[1:]))
    if key.startswith("f") and key[1:].isdigit():
        return toric.hirzebruch_fan(int(key[1:]))
    return None


def load_config(arg: str, report: RunReport) -> lattice.PointConfiguration:
    if not os.path.exists(arg) and arg in BUILTIN_CONFIGS:
        report.fact("configuration", arg)
        return lattice.PointConfiguration.from_points(BUILTIN_CONFIGS[arg])
    report.add_input(arg)
    data = read_json(arg)
    if isinstance(data, list):
        data = {"points": data}
    return lattice.PointConfiguration.from_json(data)


def load_fan(arg: str, report: RunReport) -> toric.Fan:
    if not os.path.exists(arg):
        fan = _fan_by_name(arg)
        if fan is not None:
            report.fact("fan", arg)
            return fan
    report.add_input(arg)
    return toric.Fan.from_json(read_json(arg))


@contextmanager
def _timed(report: RunReport, stage: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        report.timings[stage] = time.perf_counter() - t0


def _vec_text(v) -> str:
    return "[" + ", ".join(str(x) for x in v) + "]"


# ---------------------------------------------------------------------------
# lattice


def cmd_lattice(args, report: RunReport):
    config = load_config(args.config, report)
    bound = args.bound
    report.fact("points", [list(p) for p in config.points])
    with _timed(report, "kernel"):
        ls = lattice.kernel_lattice(config)
    report.fact("kernel_basis", [list(r) for r in ls.kernel_basis])
    cone = None
    if args.facets or args.interior or not (args.saturation or args.faces or args.member):
        with _timed(report, "facets"):
            cone = lattice.cone_facets(config)
        report.fact("facet_normals", [list(u) for u in cone.facet_normals])
    if args.saturation:
        with _timed(report, "saturation"):
            sat = lattice.saturation_check(config, bound)
        report.fact("saturated", sat.saturated)
        if not sat.saturated:
            report.fact("witness", list(sat.witness))
    if args.member:
        c = parse_int_vector(args.member, "--member")
        _check_len(c, config.n, "--member")
        with _timed(report, "membership"):
            report.fact(f"member {_vec_text(c)}", lattice.semigroup_membership(config, c, None))
    if args.interior:
        c = parse_int_vector(args.interior, "--interior")
        _check_len(c, config.n, "--interior")
        report.fact(f"interior {_vec_text(c)}", lattice.interior_test(config, c, cone))
    if args.generators:
        with _timed(report, "generators"):
            gens = lattice.semigroup_module_generators(config, args.generators, bound)
        report.fact(f"module_generators[{args.generators}]", [list(g) for g in gens])
    if args.faces:
        with _timed(report, "faces"):
            fl = lattice.faces(config)
        report.fact("faces", [
            {"dimension": f.dimension, "index_set": list(f.index_set), "contains_zero": f.contains_zero}
            for f in fl.faces
        ])


def _check_len(v, n, what):
    if len(v) != n:
        raise ConfigurationError(f"{what} has length {len(v)}, expected {n}")


# ---------------------------------------------------------------------------
# gkz


def cmd_gkz(args, report: RunReport):
    config = load_config(args.config, report)
    gamma = parse_vector(args.gamma, "--gamma") if args.gamma else [Fraction(0)] * config.n
    _check_len(gamma, config.n, "--gamma")
    report.fact("gamma", gamma)
    did = False
    if args.ideal or args.lam:
        did = True
        with _timed(report, "ideal"):
            ideal = gkz.build_lambda_ideal(config, gamma) if args.lam else gkz.build_ordinary_ideal(config, gamma)
        report.fact("level", ideal.level)
        report.fact("generators", [f"{l}: {g.to_str()}" for l, g in zip(ideal.labels, ideal.generators)])
    if args.presentation:
        did = True
        with _timed(report, "presentation"):
            pres = gkz.build_bb_presentation(config, args.presentation, gamma, args.bound)
        report.fact("module_generators", [list(c) for c in pres.module_generators])
        report.fact("relations", [r.to_text(config, pres.beta) for r in pres.relation_schemas])
    if args.intertwine is not None:
        did = True
        c1, c2 = (parse_int_vector(x, "--intertwine") for x in args.intertwine)
        _check_len(c1, config.n, "--intertwine c1")
        _check_len(c2, config.n, "--intertwine c2")
        with _timed(report, "intertwiner"):
            it = gkz.intertwiner(config, gamma, c1, c2)
        report.fact("b", list(it.b))
        report.fact("d_level", it.d_level.to_str())
        report.fact("lambda_level", it.lambda_level.to_str())
        for name, ok in it.identities.items():
            report.check(f"intertwiner.{name}", ok)
    if args.series is not None:
        did = True
        v = parse_vector(args.series, "--series")
        u = parse_int_vector(args.log, "--log") if args.log else None
        with _timed(report, "series"):
            sol = gkz.gamma_series(config, gamma, v, args.radius, u)
        report.fact("series_terms", len(sol.series.terms))
        if args.save:
            with open(args.save, "w") as fh:
                json.dump(sol.series.to_json(), fh, indent=1, sort_keys=True)
            report.fact("saved", args.save)
    if args.residual is not None:
        did = True
        path, point_text = args.residual
        report.add_input(path)
        try:
            series = gkz.LogSeries.from_json(read_json(path))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"{path}: malformed series ({exc})")
        _check_len([0] * series.m, config.m, "series variable count")
        point = parse_vector(point_text, "point")
        _check_len(point, config.m, "point")
        ideal = gkz.build_ordinary_ideal(config, gamma)
        with _timed(report, "residual"):
            res = gkz.residuals_by_generator(ideal, series, point)
        for k, r in res.items():
            report.residuals[k] = float(r)
        worst = max((float(r) for r in res.values()), default=0.0)
        report.fact("max_residual", worst)
        report.check(f"residual < {args.tol:g}", worst < args.tol)
    if not did:
        ideal = gkz.build_ordinary_ideal(config, gamma)
        report.fact("generators", [f"{l}: {g.to_str()}" for l, g in zip(ideal.labels, ideal.generators)])


# ---------------------------------------------------------------------------
# nondeg


def cmd_nondeg(args, report: RunReport):
    config = load_config(args.config, report)
    coeffs = parse_vector(args.coeffs, "--coeffs")
    _check_len(coeffs, config.m, "--coeffs")
    with _timed(report, "nondegeneracy"):
        rep = nondegeneracy.nondegeneracy_check(config, coeffs)
    report.fact("nondegenerate", rep.nondegenerate)
    report.fact("faces", [
        f"{_vec_text(f.index_set)} dim {f.dimension}: {'ok' if f.nondegenerate else 'FAILS'} ({f.reason})"
        for f in rep.faces
    ])


# ---------------------------------------------------------------------------
# cohom


def _beta_rows(text: Optional[str], m: int) -> List[List[int]]:
    rows = parse_int_matrix(text, "--beta") if text else []
    for r in rows:
        _check_len(r, m, "--beta row")
    return rows


def cohomology_checks(report: RunReport, bc: bundle.BundleCohomology, prefix: str = ""):
    ring = bc.base
    report.check(prefix + "poincare_nondegenerate_X", linalg.det(ring.pairing_matrix()) != 0)
    report.check(prefix + "poincare_nondegenerate_Y", linalg.det(bc.pairing_matrix()) != 0)
    report.check(prefix + "ring_relation", bc.ring_relation_holds())
    N = bc.N()
    ker = tep.kernel(N, bc.dim)
    report.check(prefix + "ker_N_equals_pushforward", linalg.same_span(ker, bc.pushforward_image()))
    report.check(prefix + "dim_cok_N", bc.dim - linalg.rank(N) == ring.dim)
    gs = bundle.graded_structure(bc)
    for k, ok in tep.check_weight_filtration(N, gs.weight_filtration).items():
        report.check(prefix + f"weight_filtration.{k}", ok)
    for k, p in sorted(gs.pairings.items()):
        report.check(prefix + f"pairing[{k}].nondegenerate", p.determinant != 0)
    return gs


def cmd_cohom(args, report: RunReport):
    fan = load_fan(args.fan, report)
    with _timed(report, "ring"):
        ring = toric.cohomology_ring(fan)
    report.fact("basis", ring.names())
    report.fact("betti", ring.betti())
    beta = _beta_rows(args.beta, fan.m)
    chern = toric.chern_classes(ring, beta)
    report.fact("chern_classes", [_class_text(ring.names(), c) for c in chern])
    with _timed(report, "bundle"):
        bc = bundle.bundle_cohomology(ring, chern)
    report.fact("dim_H_Y", bc.dim)
    names = bc.names()
    g = bc.gamma()
    report.fact("gamma_squared", _class_text(names, bc.multiply(g, g)))
    with _timed(report, "graded_structure"):
        gs = cohomology_checks(report, bc)
    report.fact("jordan_type", list(gs.weight_filtration.jordan_type()))
    report.fact("gr_W_dims", gs.gr_dims)
    report.fact("cok_gr_dims", gs.cok_dims)
    report.fact("ker_gr_dims", gs.ker_dims)
    report.fact("pairings", {
        k: {"gram": p.gram, "det": p.determinant, "sign": p.sign} for k, p in sorted(gs.pairings.items())
    })
    if args.quantum:
        report.add_input(args.quantum)
        table = quantum.quantum_table_from_json(read_json(args.quantum))
        _quantum_checks(report, table, args.truncation)


def _quantum_checks(report: RunReport, table: quantum.QuantumTable, truncation: Optional[int]):
    with _timed(report, "quantum"):
        ax = quantum.check_axioms(table)
        for k, ok in ax.checks.items():
            report.check(f"quantum.{k}", ok)
        for k, d in ax.details.items():
            report.fact(f"quantum.{k}", d)
        if ax.passed:
            conn = quantum.qdm_connection(table, truncation)
            report.check("quantum.flat", quantum.flatness_check(conn))


def _class_text(names: List[str], v) -> str:
    parts = []
    for n, x in zip(names, v):
        if x:
            parts.append(n if x == 1 and n != "1" else (f"-{n}" if x == -1 and n != "1" else (str(x) if n == "1" else f"{x}*{n}")))
    return " + ".join(parts).replace("+ -", "- ") or "0"


# ---------------------------------------------------------------------------
# tep


def cmd_tep(args, report: RunReport):
    if args.model:
        report.add_input(args.model)
        data = read_json(args.model)
        try:
            Q = tep.LaurentMatrix.from_json(data["Q"])
            N0 = tuple(tuple(Fraction(x) for x in row) for row in data["N0"])
            nps = tep.NilpotentPairedSpace(tep.PairingModel(len(N0), int(data["weight"]), Q), N0)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"{args.model}: malformed model ({exc})")
        spaces = [nps]
    else:
        rng = random.Random(args.seed)
        spaces = []
        for _ in range(args.random):
            spaces.append(tep.random_paired_space(rng, rng.randint(1, args.dim), rng.randint(-3, 3)))
    report.fact("models", len(spaces))
    with _timed(report, "tep"):
        for idx, nps in enumerate(spaces):
            tag = f"model[{idx}]"
            report.check(f"{tag}.symmetry", nps.model.symmetry_ok())
            report.check(f"{tag}.nondegenerate", nps.model.is_nondegenerate())
            report.check(f"{tag}.compatible", nps.compatibility_ok())
            N0 = [list(r) for r in nps.N0]
            W = tep.weight_filtration(N0)
            report.check(f"{tag}.weight_filtration", all(tep.check_weight_filtration(N0, W).values()))
            sp = tep.specialize_pairing(nps)
            ok_sign = all(s.model().symmetry_ok() and s.model().is_nondegenerate() for s in sp.values())
            report.check(f"{tag}.specialized_pairings", ok_sign)
            for side, model in tep.mixed_tep_assemble(nps).items():
                report.check(f"{tag}.mixed_{side}", all(tep.mixed_tep_validate(model).values()))
            if len(spaces) == 1:
                report.fact("jordan_type", list(W.jordan_type()))
                report.fact("specialized", {k: s.Q.to_json() for k, s in sorted(sp.items())})


# ---------------------------------------------------------------------------
# demo


def cmd_demo(args, report: RunReport):
    beta = parse_int_matrix(args.beta, "--beta") if args.beta else [[1, 1, 1]]
    report.fact("beta", beta)
    fan = toric.projective_space_fan(2)
    report.fact("nef", all(b >= 0 for row in beta for b in row))
    stages = [
        ("local_data", lambda st: _demo_local_data(st, fan, beta, report)),
        ("lattice", lambda st: _demo_lattice(st, report)),
        ("ideals", lambda st: _demo_ideals(st, report)),
        ("cohomology", lambda st: _demo_cohomology(st, fan, beta, report)),
        ("tep", lambda st: _demo_tep(st, report)),
    ]
    state = {}
    for name, fn in stages:
        with _timed(report, name):
            try:
                ok = fn(state)
            except BbgkzError as exc:
                report.fact(f"{name}.error", str(exc))
                ok = False
        if not ok:
            report.failed_stage = name
            return


def _demo_local_data(st, fan, beta, report) -> bool:
    config, extra = lattice.build_local_data(fan, beta)
    st["config"] = config
    report.fact("configuration", [list(p) for p in config.points])
    return True


def _demo_lattice(st, report) -> bool:
    config = st["config"]
    sat = lattice.saturation_check(config, 5)
    report.fact("saturated", sat.saturated)
    gens = lattice.semigroup_module_generators(config, "interior", 4)
    report.fact("interior_generators", [list(g) for g in gens])
    return report.check("saturated", sat.saturated) & report.check("interior_shift", gens == [(0, 0, 1)])


def _demo_ideals(st, report) -> bool:
    config = st["config"]
    gamma = [0] * config.n
    ideal = gkz.build_lambda_ideal(config, gamma)
    report.fact("lambda_ideal_generators", len(ideal.generators))
    pres = gkz.build_bb_presentation(config, "interior", gamma, 4)
    report.fact("presentation_generators", [list(c) for c in pres.module_generators])
    return True


def _demo_cohomology(st, fan, beta, report) -> bool:
    ring = toric.cohomology_ring(fan)
    bc = bundle.bundle_cohomology(ring, toric.chern_classes(ring, beta))
    st["bc"] = bc
    gs = cohomology_checks(report, bc, "cohomology.")
    g = bc.gamma()
    expected = [Fraction(0)] * bc.dim
    expected[bc.names().index("g*D3")] = Fraction(3)
    report.fact("jordan_type", list(gs.weight_filtration.jordan_type()))
    report.fact("cok_gr_dims", gs.cok_dims)
    ok = report.check("relation g^2 = 3Hg", bc.multiply(g, g) == expected)
    ok &= report.check("jordan_type (4,1,1)", gs.weight_filtration.jordan_type() == (4, 1, 1))
    ok &= report.check("cok_gr_dims", gs.cok_dims == {-3: 2, 0: 1})
    return ok and all(report.checks.values())


def _demo_tep(st, report) -> bool:
    nps = bundle.paired_space(st["bc"])
    ok = report.check("tep.compatible", nps.compatibility_ok())
    for side, model in tep.mixed_tep_assemble(nps).items():
        v = tep.mixed_tep_validate(model)
        report.fact(f"mixed_{side}_gr_dims", model.graded_dims())
        ok &= report.check(f"tep.mixed_{side}", all(v.values()))
    return ok


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS, help="enumeration bound (default 6)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")

    p = argparse.ArgumentParser(prog="bbgkz", description="Exact GKZ, toric and TEP computations.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--bound", type=int, default=6, help="enumeration bound (default 6)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lattice", parents=[common], help="kernel, cone, saturation and faces of a configuration")
    s.add_argument("config", help="JSON file {\"points\": [[...]]} or a builtin name (A23, gauss, local-p2, twisted-cubic)")
    s.add_argument("--facets", action="store_true")
    s.add_argument("--saturation", action="store_true")
    s.add_argument("--interior", metavar="C", help="test whether C lies in the interior lattice points")
    s.add_argument("--member", metavar="C", help="test whether C lies in the semigroup")
    s.add_argument("--generators", choices=["all", "interior"], help="module generators of K(A) or its interior")
    s.add_argument("--faces", action="store_true")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("gkz", parents=[common], help="GKZ ideals, intertwiners and series residuals")
    s.add_argument("config")
    s.add_argument("--gamma", metavar="G", help="parameter vector (default 0)")
    s.add_argument("--ideal", action="store_true", help="ordinary ideal generators")
    s.add_argument("--lambda", dest="lam", action="store_true", help="lambda-scaled ideal generators")
    s.add_argument("--presentation", choices=["all", "interior"], help="better-behaved presentation")
    s.add_argument("--intertwine", nargs=2, metavar=("C1", "C2"))
    s.add_argument("--series", metavar="V", help="base exponent of a Gamma-series")
    s.add_argument("--log", metavar="U", help="log direction for --series")
    s.add_argument("--radius", type=int, default=6)
    s.add_argument("--save", metavar="FILE", help="write the --series result as JSON")
    s.add_argument("--residual", nargs=2, metavar=("SERIES", "POINT"))
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_gkz)

    s = sub.add_parser("nondeg", parents=[common], help="face-wise non-degeneracy certificates")
    s.add_argument("config")
    s.add_argument("--coeffs", required=True, metavar="G", help="coefficients of the Laurent family")
    s.set_defaults(func=cmd_nondeg)

    s = sub.add_parser("cohom", parents=[common], help="toric and projective-bundle cohomology")
    s.add_argument("fan", help="fan JSON {\"rays\", \"cones\"} or a builtin name (P1, P2, P1xP1, F1, ...)")
    s.add_argument("--beta", metavar="ROWS", help="line bundle coefficients, rows separated by ';'")
    s.add_argument("--quantum", metavar="TABLE", help="quantum product table JSON")
    s.add_argument("--truncation", type=int, help="override the table's q-truncation")
    s.set_defaults(func=cmd_cohom)

    s = sub.add_parser("tep", parents=[common], help="pairing models, weight filtrations and mixed structures")
    s.add_argument("model", nargs="?", help="JSON {\"weight\", \"Q\", \"N0\"}; omit to test random models")
    s.add_argument("--random", type=int, default=20, metavar="K")
    s.add_argument("--dim", type=int, default=6)
    s.set_defaults(func=cmd_tep)

    s = sub.add_parser("demo", parents=[common], help="end-to-end walkthrough for the local projective plane")
    s.add_argument("--beta", metavar="ROWS", help="inject a different bundle (default 1,1,1)")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report = RunReport(command=["bbgkz"] + argv)
    try:
        args.func(args, report)
    except (ConfigurationError, BoundInsufficient) as exc:
        print(f"bbgkz: error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimit as exc:
        print(f"bbgkz: resource limit: {exc}", file=sys.stderr)
        return 2
    print(report.dumps() if args.json else report.render_text())
    print(report.timing_line(), file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
