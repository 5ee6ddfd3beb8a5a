"""Command-line front end: ``polystab <subcommand> ...``.

Exit codes: 0 success, 1 a checked property failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import corpus
from .errors import InvalidCertificate, PolystabError
from .formats import (
    atomic_write,
    canonical_json,
    instance_sha256,
    parse_certificate,
    parse_instance,
    trajectory_csv,
    write_certificate,
    write_instance,
    write_qt_instance,
)
from .gadgets import (
    build_nonsingularity_gadget,
    build_qt_instance,
    build_stability_gadget,
    check_determinantal_identity,
    qt_from_nonsingularity,
    random_simplex_point,
    recover_clique_number,
    sandwich_holds,
    schur_identity_holds,
    spectrum_relation_residual,
    stability_block,
    threshold_ladder,
    unwrap_stability_gadget,
)
from .graph import Graph, max_clique_exact, parse_dimacs
from .matrix import is_hurwitz, mat_determinant
from .oracles import (
    find_singular_combination,
    polytope_hurwitz_check,
    qt_decide,
    verify_singularity_certificate,
)
from .rational import format_rat, parse_rat
from .switched import (
    SwitchingSignal,
    check_monotone_norm,
    random_signal,
    random_unit_vector,
    simulate,
    stationary_certificate,
)


class UsageError(Exception):
    pass


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("POLYSTAB_THREADS", "1")))
    except ValueError:
        return 1


def _read_graph(path: str) -> Graph:
    return parse_dimacs(Path(path).read_text())


def cmd_reduce(args) -> int:
    g = _read_graph(args.graph)
    if g.n < 2 and args.tau is None:
        raise UsageError("graphs with one vertex have no positive threshold")
    tau = parse_rat(args.tau) if args.tau is not None else Fraction(1, 2)
    if tau not in threshold_ladder(g.n) or tau <= 0:
        raise UsageError(f"--tau must be a positive ladder value 1-1/w, w <= {g.n}")
    q = build_qt_instance(g, tau)
    ns = build_nonsingularity_gadget(q)
    st = build_stability_gadget(ns)
    out = Path(args.out)
    atomic_write(out / "qt_instance.json", write_qt_instance(q))
    atomic_write(out / "nonsingularity.json", write_instance(ns))
    atomic_write(out / "stability.json", write_instance(st))
    print(f"qt_instance.json      dim {q.n}")
    print(f"nonsingularity.json   {ns.k} matrices of dim {ns.dim}")
    print(f"stability.json        {st.k} matrices of dim {st.dim}")
    return 0


def cmd_clique(args) -> int:
    g = _read_graph(args.graph)
    omega, witness = max_clique_exact(g, cap=args.max_n)
    if not args.via_reduction:
        print(f"omega = {omega} (exact)  witness = {sorted(v + 1 for v in witness)}")
        return 0
    red = recover_clique_number(g)
    verdict = "AGREE" if red == omega else "DISAGREE"
    print(f"omega = {omega} (exact) / {red} (reduction) {verdict}")
    return 0 if red == omega else 1


def cmd_check(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    out = Path(args.out) if args.out else None
    cert = None
    target = None
    if inst.kind == "nonsingularity-gadget":
        qt = qt_from_nonsingularity(inst.matrices)
        if qt is None:
            raise UsageError("instance is tagged nonsingularity-gadget but lacks the block structure")
        singular = qt_decide(qt)
        print(f"singular combination exists: {'yes' if singular else 'no'} (exact)")
        if singular:
            cert, target = find_singular_combination(qt), inst
    else:
        verdict = polytope_hurwitz_check(inst, budget=args.trials, seed=args.seed)
        print(f"outcome: {verdict.outcome}  method: {verdict.method}  stable: {verdict.stable}")
        if verdict.weights is not None:
            print("weights: " + " ".join(_fmt_weight(w) for w in verdict.weights))
            print(f"max real part: {verdict.max_real_part:.6g}")
        if verdict.certificate is not None:
            cert, target = verdict.certificate, unwrap_stability_gadget(inst)
    if cert is not None and out is not None:
        path = out / "certificate.json"
        atomic_write(path, write_certificate(cert))
        reloaded = parse_certificate(path.read_text())
        if reloaded.instance_sha256 != instance_sha256(target) or not verify_singularity_certificate(reloaded, target):
            print("certificate FAILED re-verification")
            return 1
        print(f"certificate written to {path} (re-verified)")
    return 0


def _fmt_weight(w) -> str:
    if isinstance(w, Fraction):
        return format_rat(w)
    return f"{float(w):.12g}"


def _load_signal(path: str) -> SwitchingSignal:
    obj = json.loads(Path(path).read_text())
    return SwitchingSignal(np.array(obj["breakpoints"], dtype=float), np.array(obj["controls"], dtype=float))


def cmd_simulate(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    gadget = inst if inst.kind == "stability-gadget" else build_stability_gadget(inst)
    out = Path(args.out)
    reports = {}
    status = 0
    if args.certificate:
        cert = parse_certificate(Path(args.certificate).read_text())
        x0, signal = stationary_certificate(cert, gadget)
        traj = simulate(gadget, signal, x0, args.samples)
        atomic_write(out / "trajectory_certificate.csv", trajectory_csv(traj.times, traj.states))
        report = check_monotone_norm(traj, gadget)
        reports["certificate"] = report.to_json()
        half = gadget.dim // 2
        drift = abs(report.final_norm - 1.0)
        leak = float(np.max(np.abs(traj.states[:, half:])))
        ok = drift <= args.tol and leak <= args.tol
        print(f"certificate trajectory: final l2norm {report.final_norm:.17g}  "
              f"lower-block max {leak:.3g}  {'PASS' if ok else 'FAIL'}")
        status |= 0 if ok else 1
    rng = np.random.default_rng(args.seed)
    jobs = []
    if args.signal:
        jobs.append(("signal", _load_signal(args.signal), random_unit_vector(gadget.dim, rng)))
    for i in range(args.random):
        jobs.append((f"random_{i:03d}", random_signal(gadget.k, rng), random_unit_vector(gadget.dim, rng)))

    def run(job):
        name, sig, x0 = job
        traj = simulate(gadget, sig, x0, args.samples)
        return name, traj, check_monotone_norm(traj, gadget)

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        results = list(pool.map(run, jobs))
    for name, traj, report in results:
        atomic_write(out / f"trajectory_{name}.csv", trajectory_csv(traj.times, traj.states))
        reports[name] = report.to_json()
        if report.violation:
            print(f"{name}: norm increased by {report.max_increase:.3g}  FAIL")
            status |= 1
    if results:
        worst = max(r.final_norm for _, _, r in results)
        print(f"{len(results)} signal(s): largest final l2norm {worst:.17g}")
    atomic_write(out / "decay_report.json", canonical_json(reports))
    return status


def cmd_verify_gadgets(args) -> int:
    rng = random.Random(args.seed)
    tol = args.tol
    results = []

    spectrum_ok = equiv_ok = True
    for t in range(args.trials):
        n = rng.randint(1, 4)
        a = corpus.random_singular_matrix(n, rng) if t % 10 == 0 else corpus.random_rational_matrix(n, None, rng)
        equiv_ok &= is_hurwitz(stability_block(a)) == (mat_determinant(a) != 0)
        spectrum_ok &= spectrum_relation_residual(a) <= tol
    results.append(("stability gadget: Hurwitz iff nonsingular", equiv_ok))
    results.append((f"spectrum relation lam^2 + lam + s^2 = 0 (tol {tol:g})", spectrum_ok))

    schur_ok = True
    for _ in range(args.trials):
        n = rng.randint(1, 5)
        m = corpus.random_rational_matrix(n, None, rng)
        if mat_determinant(m) == 0:
            continue
        schur_ok &= schur_identity_holds(m, random_simplex_point(n, rng).weights)
    results.append(("Schur identity det(M) det(X(p)) = 1 - p^T M p", schur_ok))

    graphs = [Graph.complete(3), Graph.cycle(5), corpus.random_graph(6, rng)]
    det_ok = all(
        check_determinantal_identity(g, tau, trials=3, seed=args.seed)
        for g in graphs for tau in threshold_ladder(g.n)[1:]
    )
    results.append(("determinantal identity on reduction instances", det_ok))

    sandwich_ok = all(
        sandwich_holds(g, random_simplex_point(g.n, rng).weights) for g in graphs for _ in range(args.trials)
    )
    results.append(("sandwich bounds p^T M p <= p^T M_i* p <= p^T M p + 1/(n^2+i*)", sandwich_ok))

    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(ok for _, ok in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polystab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="build QT, nonsingularity and stability instances from a graph")
    p.add_argument("graph")
    p.add_argument("--tau", help="ladder threshold, e.g. 1/2 (default 1/2)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("clique", help="clique number by branch and bound, optionally via the reduction")
    p.add_argument("graph")
    p.add_argument("--via-reduction", action="store_true")
    p.add_argument("--max-n", type=int, default=32)
    p.set_defaults(func=cmd_clique)

    p = sub.add_parser("check", help="decide singularity / stability of a polytope instance")
    p.add_argument("instance")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20, help="random starts for the numeric search")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="simulate the switched system of a stability gadget")
    p.add_argument("instance")
    p.add_argument("--signal")
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--certificate")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=8, help="samples per signal segment")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-gadgets", help="randomized checks of the gadget identities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_verify_gadgets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polystab: {exc}", file=sys.stderr)
        return 2
    except InvalidCertificate as exc:
        print(f"polystab: {exc}", file=sys.stderr)
        return 1
    except (PolystabError, OSError, json.JSONDecodeError) as exc:
        print(f"polystab: {exc}", file=sys.stderr)
        return 2


# name used by the interface description; same behaviour as main
cli_dispatch = main


if __name__ == "__main__":
    sys.exit(main())
