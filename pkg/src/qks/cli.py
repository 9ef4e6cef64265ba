"""Command-line front end: every library capability as a subcommand.

Subcommands emit machine-readable tables (CSV with 17-significant-digit
reals, or JSON as {"columns": [...], "rows": [...]}) to stdout or a
file; diagnostics go to stderr.  Exit codes: 0 success, 1 failed
verification checks, 2 validation errors, 3 numerical-regime errors.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .coalgebra import DEFAULT_SIZE_CAP, SiteLayout, SizeCapError
from .curie import (NoTransitionError, RegimeError, curie_analytic,
                    curie_equal_maxima, curie_fit_reference, curie_limit,
                    curie_susceptibility)
from .hamiltonian import ModelConfig, build_qks, route_deviation
from .kernels import backend_name
from .qcg import couple_all, q_dicke_state
from .spectrum import (analytic_levels, density_of_states,
                       density_of_states_log, diagonalize_oracle)
from .thermo import BlockModel, partition_function


def parse_spin(text):
    """Parse a spin value: a fraction like 3/2 or a decimal like 1.5."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            value = float(int(num)) / float(int(den))
        else:
            value = float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse spin {text!r}")
    if (2.0 * value) != round(2.0 * value):
        raise argparse.ArgumentTypeError(f"{text!r} is not a half-integer")
    return value


def parse_spin_list(text):
    return tuple(parse_spin(tok) for tok in text.split(","))


def _add_model_args(sp):
    sp.add_argument("--N", type=int, help="number of sites")
    sp.add_argument("--j", type=parse_spin, default=0.5,
                    help="uniform site spin (default 1/2)")
    sp.add_argument("--spins", type=parse_spin_list,
                    help="comma-separated per-site spins (overrides --j)")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--eta", type=float, help="deformation eta = ln q")
    group.add_argument("--q", type=float, help="deformation q > 0")
    sp.add_argument("--I", type=float, default=1.0, help="pair coupling")
    sp.add_argument("--h", type=float, default=0.0, help="magnetic field")
    sp.add_argument("--gamma", type=float, default=1.0,
                    help="gyromagnetic factor")
    sp.add_argument("--k-B", dest="k_B", type=float, default=1.0,
                    help="Boltzmann constant")
    sp.add_argument("--scaling", choices=("raw", "thermodynamic"),
                    default="raw",
                    help="thermodynamic applies I->I/N, eta->eta/N")
    sp.add_argument("--size-cap", type=int,
                    help="matrix-dimension cap override")
    sp.add_argument("--confirm-large", action="store_true",
                    help="required to raise --size-cap above the default")


def _add_output_args(sp):
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", help="output path (default stdout)")


def _resolve_eta(args):
    if args.q is not None:
        if not (args.q > 0.0) or not math.isfinite(args.q):
            raise ValueError(f"q must be positive and finite, got {args.q}")
        return math.log(args.q)
    return args.eta if args.eta is not None else 0.0


def build_config(args):
    """ModelConfig from parsed CLI arguments."""
    if args.size_cap is not None:
        if args.size_cap > DEFAULT_SIZE_CAP and not args.confirm_large:
            raise ValueError(
                f"--size-cap {args.size_cap} exceeds the default "
                f"{DEFAULT_SIZE_CAP}; pass --confirm-large to accept the "
                "memory cost")
        os.environ["QKS_SIZE_CAP"] = str(args.size_cap)
    eta = _resolve_eta(args)
    if args.spins is not None:
        if args.N is not None and args.N != len(args.spins):
            raise ValueError(
                f"--N {args.N} contradicts --spins of length "
                f"{len(args.spins)}")
        spins = args.spins
        n = len(spins)
    else:
        if args.N is None:
            raise ValueError("--N is required (or provide --spins)")
        n = args.N
        spins = (args.j,) * max(n, 0)
    return ModelConfig(N=n, spins=spins, I=args.I, h=args.h,
                       gamma=args.gamma, eta=eta, scaling=args.scaling,
                       k_B=args.k_B)


def _fmt_csv(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def emit(columns, rows, fmt, path):
    """Write a table as CSV or JSON to path (or stdout)."""
    if fmt == "json":
        text = json.dumps({"columns": list(columns),
                           "rows": [list(r) for r in rows]})
        text += "\n"
    else:
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt_csv(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _analytic_multiset(lines):
    values = []
    for line in lines:
        values.extend([line.E] * int(line.weight))
    return np.sort(np.asarray(values, dtype=np.float64))


def cmd_spectrum(args):
    cfg = build_config(args)
    lines = analytic_levels(cfg)
    if args.verify:
        cfg.layout.check_cap()
        H = build_qks(cfg)
        oracle = diagonalize_oracle(H)
        expect = _analytic_multiset(lines)
        scale = max(1.0, float(np.max(np.abs(expect))))
        dev = float(np.max(np.abs(oracle - expect))) / scale
        print(f"oracle max relative deviation: {dev:.3e}", file=sys.stderr)
    rows = [[line.J, line.d, line.m, line.E, line.E_corr] for line in lines]
    emit(("J", "d", "m", "E", "E_corr"), rows, args.format, args.output)
    return 0


def cmd_dos(args):
    cfg = build_config(args)
    if cfg.uniform_spin == 0.5 and cfg.N > 1000:
        hist = density_of_states_log(cfg, args.bins)
        wcol = "log_weight"
    else:
        hist = density_of_states(analytic_levels(cfg), args.bins)
        wcol = "weight"
    centers = 0.5 * (hist.edges[:-1] + hist.edges[1:])
    rows = [[float(c), float(w)] for c, w in zip(centers, hist.weights)]
    emit(("bin_center", wcol), rows, args.format, args.output)
    return 0


def _basis_labels(layout):
    from itertools import product
    from .representations import m_values
    per_site = [m_values(j) for j in layout.spins]
    half = all(j == 0.5 for j in layout.spins)
    labels = []
    for combo in product(*per_site):
        if half:
            labels.append("".join("u" if m > 0 else "d" for m in combo))
        else:
            labels.append(";".join("%g" % m for m in combo))
    return labels


def cmd_states(args):
    cfg = build_config(args)
    layout = cfg.layout
    if args.dicke is not None:
        if cfg.uniform_spin != 0.5:
            raise ValueError("--dicke requires uniform spin-1/2 sites")
        vec = q_dicke_state(cfg.N, args.dicke, cfg.deformation)
        labels = _basis_labels(layout)
        rows = [[lab, float(amp)] for lab, amp in zip(labels, vec)
                if not args.nonzero or abs(amp) > 1e-14]
        emit(("basis", "amplitude"), rows, args.format, args.output)
        return 0
    transform = couple_all(layout, cfg.deformation)
    labels = _basis_labels(layout)
    rows = []
    for col, (J, copy, m) in enumerate(transform.block_labels):
        for row_idx, lab in enumerate(labels):
            amp = float(transform.matrix[row_idx, col])
            if args.nonzero and abs(amp) <= 1e-14:
                continue
            rows.append([J, copy, m, lab, amp])
    emit(("J", "copy", "m", "basis", "amplitude"), rows, args.format,
         args.output)
    return 0


def cmd_thermo(args):
    cfg = build_config(args)
    model = BlockModel(cfg)
    if args.T is not None:
        temps = [args.T]
    else:
        if args.T_points < 1 or not (0.0 < args.T_min <= args.T_max):
            raise ValueError("invalid temperature grid")
        temps = np.linspace(args.T_min, args.T_max, args.T_points)
    rows = []
    for T in temps:
        pt = model.thermo_point(float(T))
        rows.append([pt.T, pt.log_Z, pt.F, pt.C_V, pt.chi, pt.M])
    emit(("T", "log_Z", "F", "C_V", "chi", "M"), rows, args.format,
         args.output)
    return 0


def cmd_weights(args):
    cfg = build_config(args)
    _, weights = partition_function(cfg, args.T)
    rows = [[int(p), float(e), float(lz), float(w)]
            for p, e, lz, w in zip(weights.p, weights.E, weights.log_z,
                                   weights.weight)]
    emit(("p", "E", "log_z", "weight"), rows, args.format, args.output)
    return 0


def cmd_curie(args):
    method = args.method
    if method in ("limit", "fit", "analytic"):
        eta = _resolve_eta(args)
        if method == "limit":
            value = curie_limit(eta)
            row = [eta, args.N, "limit_formula", value, None]
        elif method == "fit":
            value = curie_fit_reference(eta)
            row = [eta, args.N, "fit_reference", value, None]
        else:
            if args.N is None:
                raise ValueError("--N is required for the analytic formula")
            value = curie_analytic(args.N, eta, I=args.I, k_B=args.k_B)
            row = [eta, args.N, "analytic_formula", value, None]
        emit(("eta", "N", "method", "T_C", "regime"), [row], args.format,
             args.output)
        return 0
    cfg = build_config(args)
    if method == "susceptibility":
        t_range = (args.T_min or 0.05, args.T_max or 1.5)
        est = curie_susceptibility(cfg, t_range)
    else:
        t_range = (args.T_min or 0.2, args.T_max or 1.4)
        est = curie_equal_maxima(cfg, t_range)
    print(f"diagnostics: {est.diagnostics}", file=sys.stderr)
    row = [est.eta, est.N, est.method, est.T_C, est.regime]
    emit(("eta", "N", "method", "T_C", "regime"), [row], args.format,
         args.output)
    return 0


def cmd_verify(args):
    cfg = build_config(args)
    cfg.layout.check_cap()
    checks = []

    H = build_qks(cfg, check=False)
    dev_route = route_deviation(cfg)
    scale = max(1.0, float(np.max(np.abs(H))))
    checks.append(("route_agreement", dev_route / scale, 1e-10))
    dev_herm = float(np.max(np.abs(H - H.conj().T)))
    checks.append(("hermiticity", dev_herm / scale, 1e-12))

    oracle = diagonalize_oracle(H)
    expect = _analytic_multiset(analytic_levels(cfg))
    escale = max(1.0, float(np.max(np.abs(expect))))
    dev_spec = float(np.max(np.abs(oracle - expect))) / escale
    checks.append(("oracle_vs_analytic", dev_spec, 1e-9))

    transform = couple_all(cfg.layout, cfg.deformation)
    U = transform.matrix
    dev_unit = float(np.max(np.abs(U.T @ U - np.eye(U.shape[0]))))
    checks.append(("transform_unitarity", dev_unit, 1e-10))
    if cfg.h == 0.0:
        energies = {}
        for line in analytic_levels(cfg):
            energies[line.J] = line.E
        lam = np.array([energies[J] for J, _, _ in transform.block_labels])
        resid = np.abs(H @ U - U * lam[None, :]).max()
        checks.append(("eigenvector_residual", float(resid) / escale, 1e-9))

    rows = []
    failed = 0
    for name, dev, tol in checks:
        ok = dev <= tol
        failed += 0 if ok else 1
        rows.append([name, float(dev), float(tol),
                     "pass" if ok else "FAIL"])
    rows.append(["kernel_backend", None, None, backend_name()])
    emit(("check", "deviation", "tolerance", "status"), rows, args.format,
         args.output)
    return 0 if failed == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qks",
        description="Exact solver for the Kittel-Shore spin model and its "
                    "q-deformed generalization")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="analytic energy levels")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.add_argument("--verify", action="store_true",
                    help="cross-check against dense diagonalization")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("dos", help="density of states histogram")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.add_argument("--bins", type=int, default=100)
    sp.set_defaults(func=cmd_dos)

    sp = sub.add_parser("states", help="coupled-basis eigenstates")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.add_argument("--dicke", type=parse_spin, default=None,
                    help="emit only the maximal-spin state with this m")
    sp.add_argument("--nonzero", action="store_true",
                    help="drop zero amplitudes")
    sp.set_defaults(func=cmd_states)

    sp = sub.add_parser("thermo", help="thermodynamic observables")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.add_argument("--T", type=float, help="single temperature")
    sp.add_argument("--T-min", dest="T_min", type=float, default=0.05)
    sp.add_argument("--T-max", dest="T_max", type=float, default=2.0)
    sp.add_argument("--T-points", dest="T_points", type=int, default=50)
    sp.set_defaults(func=cmd_thermo)

    sp = sub.add_parser("weights", help="per-level partition weights")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.add_argument("--T", type=float, required=True)
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("curie", help="Curie-temperature estimates")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.add_argument("--method",
                    choices=("susceptibility", "equal-maxima", "analytic",
                             "limit", "fit"),
                    default="susceptibility")
    sp.add_argument("--T-min", dest="T_min", type=float)
    sp.add_argument("--T-max", dest="T_max", type=float)
    sp.set_defaults(func=cmd_curie)

    sp = sub.add_parser("verify", help="internal consistency checks")
    _add_model_args(sp)
    _add_output_args(sp)
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NoTransitionError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, SizeCapError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
