"""Command-line front end.

    ppsur fig1|fig2|obs2|purity-demo|verify|search|eval [--scenario FILE]
          [--out PATH] [--seed N] [--samples N] [--tolerance X]

Curves are written as CSV (header row, 12 significant digits), everything
else as JSON. Exit status: 0 on success, 1 when a checked property fails,
2 for an invalid scenario, invalid arguments or an unwritable output path.
"""
import argparse
import csv
import io
import json
import sys

import numpy as np

from . import relations as rel
from . import scenario as sc
from .errors import InvalidScenarioError, PPSError
from .figures import (FIG1_COLUMNS, FIG2_COLUMNS, FIG2_V, FIG2_W, amplitude_state, fig1_rows,
                      fig2_rows, obs2_report, theta_grid)
from .purity import (CERTIFIED_PURE_THRESHOLD, MIXED, MIXED_FLAG_THRESHOLD, PURE,
                     detect_qubit, detect_qubit_qubit, detect_qubit_qutrit, detect_qutrit,
                     qutrit_basis)
from .search import SearchConfig, make_objective, optimize_postselection
from .states import (SX, SY, PureState, make_qubit_state, purity, random_density_matrix,
                     random_observable, random_pure_state)
from .stats import classical_uncertainty, std_pps, std_standard, weak_value
from .verify import MIXED_PURITY_MAX, run_verify

EXIT_OK, EXIT_PROPERTY_FAILURE, EXIT_INVALID = 0, 1, 2
CSV_FORMAT = "%.12g"
FIG_TOL = 1e-9
OBS2_TOL = 1e-12


def to_jsonable(obj):
    """Recursively convert reports, arrays and complex numbers for ``json``."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, PureState):
        return sc.encode_complex(obj.vec)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return sc.encode_complex(obj)
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return sc.encode_complex(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dump_json(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def format_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([CSV_FORMAT % v for v in row])
    return buf.getvalue()


def _grid(spec):
    if spec is None:
        return theta_grid()
    if isinstance(spec, dict):
        return theta_grid(spec["n"], spec.get("lo", -np.pi), spec.get("hi", np.pi))
    return np.asarray(spec, dtype=float)


# -- runners: each returns (text, ok, messages) --------------------------------

def run_fig1(p):
    tol = p.get("tolerance", FIG_TOL)
    rows = fig1_rows(_grid(p.get("grid")), p.get("omega", np.pi / 3), p.get("eta", np.pi / 5),
                     p.get("xi", 0.0))
    msgs = []
    for t, rh_l, rh_r, s1, s3_l, s3_r in rows:
        if s3_l - s3_r < -tol or rh_l - rh_r < -tol:
            msgs.append(f"relation violated at theta={t:.6g}")
        if np.isclose(abs(t), np.pi / 2, rtol=0, atol=1e-12) and not (rh_r <= 1e-12 and s1 > 1e-6):
            msgs.append(f"RHUR/strong1 contrast missing at theta={t:.6g}")
    return format_csv(FIG1_COLUMNS, rows), not msgs, msgs


def run_fig2(p):
    tol = p.get("tolerance", FIG_TOL)
    identity_w = p.get("identity_w", False)
    rows = fig2_rows(_grid(p.get("grid")), p.get("psi_phase", np.pi / 11),
                     tuple(p.get("phi1", (np.pi / 2, np.pi / 2))),
                     tuple(p.get("phi2", (np.pi / 4, np.pi / 2))), identity_w)
    msgs = []
    for t, f, bong, p1, p2, comb in rows:
        if f > min(bong, p1, p2, comb) + tol:
            msgs.append(f"|F| exceeds a bound at theta={t:.6g}")
        if comb > bong + tol:
            msgs.append(f"combined bound above the Bong bound at theta={t:.6g}")
    if not identity_w and not any(comb < bong - 1e-3 for _, _, bong, _, _, comb in rows):
        msgs.append("combined bound is never tighter than the Bong bound by more than 1e-3")
    return format_csv(FIG2_COLUMNS, rows), not msgs, msgs


def run_obs2(p):
    tol = p.get("tolerance", OBS2_TOL)
    kwargs = {k: p[k] for k in ("A", "B") if k in p}
    if "psi" in p:
        kwargs["psi"] = PureState(p["psi"])
    rep = obs2_report(**kwargs)
    msgs = []
    if rep["common_post_selection"] is not None:
        ur = rep["pps_ur"]
        if max(rep["std_pps_A"], rep["std_pps_B"], abs(ur.lhs), abs(ur.rhs_total)) > tol:
            msgs.append("common post-selection does not give zero deviations")
    return dump_json(rep), not msgs, msgs


def correlated_counterexample_state():
    """``1/2 |0><0| (x) |0><0| + 1/2 |1><1| (x) |1><1|`` probed with ``A = sigma_x``."""
    k0, k1 = np.array([1, 0], complex), np.array([0, 1], complex)
    rho = 0.5 * np.kron(np.outer(k0, k0), np.outer(k0, k0)) + 0.5 * np.kron(np.outer(k1, k1),
                                                                           np.outer(k1, k1))
    plus = np.array([1, 1], complex) / np.sqrt(2)
    return rho, SX, k0, k0, plus


def _purity_case(case, rng, mixed, threshold):
    if case == "qubit":
        rho = random_density_matrix(2, rng) if mixed else random_pure_state(2, rng).to_density()
        return rho, detect_qubit(rho, random_observable(2, rng), random_pure_state(2, rng), threshold)
    if case == "qutrit":
        rho = random_density_matrix(3, rng) if mixed else random_pure_state(3, rng).to_density()
        a = random_observable(3, rng)
        return rho, detect_qutrit(rho, a, qutrit_basis(a, rng), threshold)
    if case == "qubit_qubit":
        rho = random_density_matrix(4, rng) if mixed else random_pure_state(4, rng).to_density()
        return rho, detect_qubit_qubit(rho, random_observable(2, rng), random_pure_state(2, rng),
                                       random_pure_state(2, rng), random_pure_state(2, rng), threshold)
    rho = random_density_matrix(6, rng) if mixed else random_pure_state(6, rng).to_density()
    a = random_observable(3, rng)
    return rho, detect_qubit_qutrit(rho, a, qutrit_basis(a, rng), random_pure_state(2, rng),
                                    random_pure_state(2, rng), threshold)


def run_purity_demo(p):
    rng = np.random.default_rng(p.get("seed", 0))
    cases = p.get("cases", list(sc.PURITY_CASES))
    msgs, entries = [], []
    for case in cases:
        if case == "counterexample":
            rho, a, fa, fb, fb2 = correlated_counterexample_state()
            th = p.get("threshold", MIXED_FLAG_THRESHOLD)
            v = detect_qubit_qubit(rho, a, fa, fb, fb2, th)
            entries.append({"case": case, "state": "counterexample", "purity": purity(rho),
                            "result": v})
            if not (v.verdict == MIXED and v.gap_values[0] <= CERTIFIED_PURE_THRESHOLD):
                msgs.append("counterexample not flagged through the second post-selection only")
            continue
        for mixed in (False, True):
            th = p.get("threshold", MIXED_FLAG_THRESHOLD if mixed else CERTIFIED_PURE_THRESHOLD)
            while True:
                rho, v = _purity_case(case, rng, mixed, th)
                if not mixed or purity(rho) <= MIXED_PURITY_MAX:
                    break
            expected = MIXED if mixed else PURE
            entries.append({"case": case, "state": "mixed" if mixed else "pure",
                            "purity": purity(rho), "result": v})
            if v.verdict != expected:
                msgs.append(f"{case}: expected {expected}, got {v.verdict}")
    return dump_json({"cases": entries}), not msgs, msgs


def run_verify_cmd(p):
    summary = run_verify(p.get("seed", 0), p.get("samples", 1000), tuple(p.get("dims", (2, 3, 4))),
                         p.get("inject_bug", False))
    msgs = [f"property failed: {k}" for k, v in summary["properties"].items() if not v["ok"]]
    return dump_json(summary), summary["all_passed"], msgs


def run_search(p):
    name = p["objective"]
    if name == "otoc-pps-bound-min":
        ops = {"V": p.get("V", FIG2_V), "W_t": p.get("W_t", FIG2_W),
               "rho": p.get("rho", make_qubit_state(1.0, np.pi / 11).projector())}
    else:
        ops = {"A": p.get("A", SX), "B": p.get("B", SY),
               "psi": p.get("psi", PureState.basis(2, 0).vec)}
        if name == "stronger-ur-rhs-max":
            ops["include_schrodinger"] = p.get("include_schrodinger", False)
    defaults = SearchConfig()
    cfg = SearchConfig(p.get("restarts", defaults.restarts), p.get("max_iters", defaults.max_iters),
                       p.get("step_init", defaults.step_init), p.get("step_min", defaults.step_min),
                       p.get("seed", defaults.rng_seed))
    obj = make_objective(name, **ops)
    res = optimize_postselection(obj, obj.dim, cfg)
    out = {"objective": name, "best_phi": res.best_phi.vec, "best_objective": res.best_objective,
           "trace": res.trace, "converged": res.converged,
           "config": {"restarts": cfg.restarts, "max_iters": cfg.max_iters,
                      "step_init": cfg.step_init, "step_min": cfg.step_min, "rng_seed": cfg.rng_seed}}
    return dump_json(out), True, []


def _need(p, *keys):
    missing = [k for k in keys if k not in p]
    if missing:
        raise InvalidScenarioError(f"relation {p['relation']!r} needs {', '.join(missing)}")
    return [p[k] for k in keys]


def _eval_value(p):
    name = p["relation"]
    schro = p.get("include_schrodinger", False)
    seed = p.get("seed", 0)
    if name == "std_standard":
        return std_standard(*_need(p, "A", "psi"))
    if name == "std_pps":
        return std_pps(*_need(p, "A", "psi", "phi"))
    if name == "weak_value":
        return weak_value(*_need(p, "A", "psi", "phi"))
    if name == "rhur":
        return rel.rhur(*_need(p, "A", "B", "psi"), include_schrodinger=schro)
    if name in ("pps_ur", "stronger_ur"):
        return getattr(rel, name)(*_need(p, "A", "B", "psi", "phi"), include_schrodinger=schro)
    if name == "pps_ur_mixed":
        return rel.pps_ur_mixed(*_need(p, "A", "B", "rho", "phi"), include_schrodinger=schro,
                                weak_deviations=p.get("weak_deviations", False))
    if name == "combined_stronger":
        return rel.combined_stronger(*_need(p, "A", "B", "psi", "phi"))
    if name == "mpur_bounds":
        return rel.mpur_bounds(*_need(p, "A", "B", "psi", "psi_perp"))
    if name == "tighter_sum_ur":
        return rel.tighter_sum_ur(*_need(p, "A", "B", "rho", "phi"), sign=p.get("sign"))
    if name == "unitary_pps_ur":
        return rel.unitary_pps_ur(*_need(p, "U", "V", "rho", "phi"))
    if name == "otoc_bounds":
        return rel.otoc_bounds(*_need(p, "V", "W_t", "rho"), phis=p.get("phis", []))
    if name in ("equality_product", "equality_sum"):
        return getattr(rel, name)(*_need(p, "A", "B", "psi", "phi"), rng_seed=seed, sign=p.get("sign"))
    if name == "intelligent_residual":
        a, b, psi, phi = _need(p, "A", "B", "psi", "phi")
        signs = [p["sign"]] if "sign" in p else [1, -1]
        return {str(s): rel.intelligent_residual(a, b, psi, phi, s) for s in signs}
    if name == "classical_uncertainty":
        return classical_uncertainty(*_need(p, "rho", "A", "phi"))
    return purity(*_need(p, "rho"))


def run_eval(p):
    tol = p.get("tolerance", 1e-9)
    val = _eval_value(p)
    msgs = []
    if isinstance(val, rel.BoundReport) and val.gap < -tol:
        msgs.append(f"{val.relation}: gap {val.gap:.3e} is negative")
    if isinstance(val, rel.EqualityReport) and abs(val.residual) > max(tol, 1e-8):
        msgs.append(f"{val.relation}: residual {abs(val.residual):.3e}")
    return dump_json({"relation": p["relation"], "result": val}), not msgs, msgs


RUNNERS = {"fig1": run_fig1, "fig2": run_fig2, "obs2": run_obs2, "purity-demo": run_purity_demo,
           "verify": run_verify_cmd, "search": run_search, "eval": run_eval}

# which scenario parameter a generic flag maps to, per kind
_FLAG_KEYS = {
    "seed": {"purity-demo": "seed", "verify": "seed", "search": "seed", "eval": "seed"},
    "samples": {"verify": "samples"},
    "tolerance": {"fig1": "tolerance", "fig2": "tolerance", "obs2": "tolerance",
                  "purity-demo": "threshold", "eval": "tolerance"},
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ppsur", description="Uncertainty relations in pre- and post-selected systems.")
    sub = parser.add_subparsers(dest="kind", required=True, metavar="COMMAND")
    helps = {"fig1": "RHUR versus the post-selected relations (CSV)",
             "fig2": "OTOC modulus and its upper bounds (CSV)",
             "obs2": "sharp joint preparation via a common post-selection (JSON)",
             "purity-demo": "purity detection on random and counterexample states (JSON)",
             "verify": "randomized property sweep over all modules (JSON)",
             "search": "optimize a post-selection for a named objective (JSON)",
             "eval": "evaluate one relation on explicit operators (JSON)"}
    for kind in sc.KINDS:
        p = sub.add_parser(kind, help=helps[kind])
        p.add_argument("--scenario", metavar="FILE", help="scenario JSON file")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--tolerance", type=float)
        if kind == "verify":
            p.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    return parser


def resolve_scenario(args):
    """Scenario from ``--scenario`` (or an empty one) with command-line overrides applied."""
    scen = sc.load(args.scenario) if args.scenario else sc.Scenario(args.kind, {})
    if scen.kind != args.kind:
        raise InvalidScenarioError(f"scenario kind {scen.kind!r} does not match command {args.kind!r}")
    params = scen.to_dict()["parameters"]
    for flag, by_kind in _FLAG_KEYS.items():
        value = getattr(args, flag)
        if value is None:
            continue
        if args.kind not in by_kind:
            raise InvalidScenarioError(f"--{flag} does not apply to {args.kind}")
        params[by_kind[args.kind]] = value
    if args.out is not None:
        params["out"] = args.out
    if getattr(args, "inject_bug", False):
        params["inject_bug"] = True
    return sc.from_dict({"version": sc.SCHEMA_VERSION, "kind": args.kind, "parameters": params})


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        scen = resolve_scenario(args)
        text, ok, msgs = RUNNERS[scen.kind](scen.parameters)
    except PPSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _write(text, scen.parameters.get("out"))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for m in msgs[:20]:
        print(f"check failed: {m}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_PROPERTY_FAILURE


if __name__ == "__main__":
    sys.exit(main())
