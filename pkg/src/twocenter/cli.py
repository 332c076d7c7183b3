"""Command-line surface: bifurcation diagrams, monodromy reports, scattering runs.

Exit codes: 0 success, 2 configuration error, 3 numerical-reliability failure.
A config file (INI: [common] plus per-subcommand sections, key = value) may
supply any flag; explicit flags override the file.
"""
from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from . import bifurcation, dynamics, formats, monodromy, presets, scattering
from .errors import ConfigError, TwoCenterError
from .model import InvariantPoint, Params, PhaseState, ReferenceChoice

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNRELIABLE = 3

_REFS = {"o1": ReferenceChoice.KEPLER_AT_O1, "o2": ReferenceChoice.KEPLER_AT_O2,
         "self": ReferenceChoice.SELF}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twocenter",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, help="INI file with defaults")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mu1", type=float, default=None)
        p.add_argument("--mu2", type=float, default=None)
        p.add_argument("--a", type=float, default=1.0)
        p.add_argument("--out", type=Path, default=Path("out"))
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--preset", default=None)

    p = sub.add_parser("bifdiag", help="critical sets and classification grids")
    common(p)
    p.add_argument("--plane", choices=("planar", "spatial"), default="spatial")
    p.add_argument("--h", type=float, action="append", default=None,
                   help="slice energy (repeatable)")
    p.add_argument("--grid", type=int, default=160, help="grid points per axis")
    p.add_argument("--samples", type=int, default=2000, help="samples per curve")
    p.add_argument("--g-range", type=float, nargs=2, default=None)
    p.add_argument("--l-range", type=float, nargs=2, default=None)
    p.add_argument("--h-range", type=float, nargs=2, default=None)

    p = sub.add_parser("monodromy", help="integer monodromy matrices along loops")
    common(p)
    p.add_argument("--ref", choices=tuple(_REFS), default="o2")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--loop", default=None,
                   help="gamma1|gamma2|gamma3 or comma-separated line indices")
    p.add_argument("--dg", type=float, default=None)
    p.add_argument("--dl", type=float, default=0.25)
    p.add_argument("--orientation", type=int, choices=(-1, 1), default=1)
    p.add_argument("--eps", type=float, default=1e-4)

    p = sub.add_parser("scatter", help="trajectories, asymptotes, deflection, degree")
    common(p)
    p.add_argument("--ref", choices=tuple(_REFS), default="o2")
    p.add_argument("--state", type=float, nargs=6, metavar=("QX", "QY", "QZ", "PX", "PY", "PZ"),
                   help="initial condition for a trajectory run")
    p.add_argument("--fiber", type=float, nargs=3, metavar=("H", "L", "G"),
                   help="invariant labels; a scattering state is constructed on the set")
    p.add_argument("--r-max", type=float, default=4000.0)
    p.add_argument("--t-max", type=float, default=1e6)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--deflection-loop", default=None,
                   help="gamma3 (preset) for the loop-variation check")
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--knauf", default=None,
                   help="gaussian | kepler | two-center | CSV path of r,V samples")
    p.add_argument("--h", type=float, default=None, help="sweep energy for --knauf")
    p.add_argument("--v0", type=float, default=1.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--sweep", type=int, default=2048)
    return ap


def _apply_config(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    """Fill in values from the INI file for flags not given on the command line."""
    if not args.config:
        return args
    if not args.config.exists():
        raise ConfigError(f"config file {args.config} not found")
    ini = configparser.ConfigParser()
    ini.read(args.config)
    given = {tok.split("=")[0].lstrip("-").replace("-", "_")
             for tok in argv if tok.startswith("--")}
    for section in ("common", args.command):
        if not ini.has_section(section):
            continue
        for key, val in ini.items(section):
            attr = key.replace("-", "_")
            if attr in given or not hasattr(args, attr):
                continue
            cur = getattr(args, attr)
            if isinstance(cur, bool):
                setattr(args, attr, ini.getboolean(section, key))
            elif isinstance(cur, int):
                setattr(args, attr, int(val))
            elif isinstance(cur, float):
                setattr(args, attr, float(val))
            elif isinstance(cur, Path):
                setattr(args, attr, Path(val))
            elif cur is None:
                setattr(args, attr, _coerce_ini(val))
            else:
                setattr(args, attr, val)
    return args


def _coerce_ini(val: str):
    for cast in (int, float):
        try:
            return cast(val)
        except ValueError:
            continue
    return val


def _params(args) -> Params:
    if args.mu1 is None or args.mu2 is None:
        raise ConfigError("mu1 and mu2 are required (flag, config file or preset)")
    return Params(args.mu1, args.mu2, args.a)


def _base_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("config", "out") and v is not None}
    return cfg


# ---------------------------------------------------------------------------

def cmd_bifdiag(args) -> int:
    if args.preset == "fig1":
        args.mu1, args.mu2 = presets.GRAVITATIONAL.mu1, presets.GRAVITATIONAL.mu2
        args.plane = "spatial"
        if args.h is None:
            args.h = list(presets.FIG1_ENERGIES)
    elif args.preset in presets.PLANAR_CASES:
        args.mu1, args.mu2 = presets.PLANAR_CASES[args.preset]
        args.plane = "planar"
    elif args.preset is not None:
        raise ConfigError(f"unknown bifdiag preset {args.preset!r}")
    params = _params(args)
    cfg = _base_config(args)
    stem = args.preset or f"mu{params.mu1:g}_{params.mu2:g}"
    written = []
    if args.plane == "spatial":
        energies = args.h or [1.0]
        for h in energies:
            written += _spatial_slice(params, float(h), args, cfg, stem)
    else:
        written += _planar_diagram(params, args, cfg, stem)
    for p in written:
        print(p)
    return EXIT_OK


def _write_table(args, name, schema, config, columns, rows, meta):
    """Emit one logical table in the configured output format."""
    if args.format == "json":
        return formats.write_json(args.out / f"{name}.json", schema, config,
                                  {"columns": columns,
                                   "rows": [list(r) for r in rows]}, meta)
    return formats.write_csv(args.out / f"{name}.csv", schema, config,
                             columns, rows, meta=meta)


def _spatial_slice(params, h, args, cfg, stem):
    curves = bifurcation.critical_curves_spatial(params, h, args.samples)
    lines = bifurcation.critical_lines(params)
    rows = [(f"line-{ln.index}", 0.0, 0.0, ln.g_at(h), 1) for ln in lines]
    for cur in curves:
        rows += [(cur.family, cur.param[i], cur.l[i], cur.g[i], int(cur.physical[i]))
                 for i in range(len(cur.param))]
    diag = _write_table(args, f"{stem}_h{h:g}_diagram", "bifdiag.spatial.v1",
                        dict(cfg, h=h),
                        ["family", "param", "l", "g", "physical"], rows,
                        meta={"h": h})
    if args.g_range is None:
        offs = [ln.offset for ln in lines]
        glo, ghi = h + min(offs) - 2.0, h + max(offs) + 2.0
    else:
        glo, ghi = args.g_range
    lhi = args.l_range[1] if args.l_range else max(2.5, 0.5 * (ghi - glo))
    gs = np.linspace(glo, ghi, args.grid)
    ls = np.linspace(-lhi, lhi, args.grid)
    grid_rows = []
    phys = np.zeros((args.grid, args.grid), dtype=bool)
    for i, g in enumerate(gs):
        for j, l in enumerate(ls):
            c = bifurcation.classify(InvariantPoint(h, l, g), params)
            phys[i, j] = c.physical
            grid_rows.append((g, l, int(c.physical), len(c.xi_intervals),
                              len(c.eta_intervals), int(c.borderline)))
    region_count = formats.grid_region_count(phys)
    grid = _write_table(args, f"{stem}_h{h:g}_grid", "bifdiag.grid.v1",
                        dict(cfg, h=h),
                        ["g", "l", "physical", "n_xi", "n_eta", "borderline"],
                        grid_rows,
                        meta={"h": h, "region-count": region_count,
                              "rows": args.grid, "cols": args.grid})
    return [diag, grid]


def _planar_diagram(params, args, cfg, stem):
    curves = bifurcation.critical_curves_planar(params, args.samples)
    lines = bifurcation.critical_lines(params)
    scale = max(1.0, abs(params.mu1) + abs(params.mu2))
    hlo, hhi = args.h_range if args.h_range else (-1.5 * scale, 1.5 * scale)
    glo, ghi = args.g_range if args.g_range else (-2.0 * scale, 3.0 * scale)
    rows = []
    for ln in lines:
        for h in np.linspace(hlo, hhi, 64):
            rows.append((f"line-{ln.index}", h, h, ln.g_at(h), 1))
    for cur in curves:
        rows += [(cur.family, cur.param[i], cur.h[i], cur.g[i], int(cur.physical[i]))
                 for i in range(len(cur.param))]
    diag = _write_table(args, f"{stem}_planar_diagram", "bifdiag.planar.v1",
                        cfg, ["family", "param", "h", "g", "physical"], rows,
                        meta=None)
    hs = np.linspace(hlo, hhi, args.grid)
    gs = np.linspace(glo, ghi, args.grid)
    grid_rows = []
    phys = np.zeros((args.grid, args.grid), dtype=bool)
    for i, h in enumerate(hs):
        for j, g in enumerate(gs):
            ok = (bifurcation._planar_point_allowed(h, g, params, "nu")
                  and bifurcation._planar_point_allowed(h, g, params, "lambda"))
            phys[i, j] = ok
            grid_rows.append((h, g, int(ok)))
    grid = _write_table(args, f"{stem}_planar_grid", "bifdiag.grid.v1", cfg,
                        ["h", "g", "physical"], grid_rows,
                        meta={"region-count": formats.grid_region_count(phys),
                              "rows": args.grid, "cols": args.grid})
    return [diag, grid]


# ---------------------------------------------------------------------------

def cmd_monodromy(args) -> int:
    results = []
    worst_residual = 0.0
    if args.preset in ("thm62", "hamiltonian"):
        pre = presets.thm62_preset(_REFS[args.ref]) if args.preset == "thm62" \
            else presets.hamiltonian_preset()
        params = pre.params
        cfg = dict(_base_config(args), mu1=params.mu1, mu2=params.mu2)
        for label, loop in pre.loops.items():
            res = monodromy.monodromy_matrix(loop, params, pre.reference)
            results.append(_mono_record(label, res))
            worst_residual = max(worst_residual, res.residual)
    elif args.preset == "table1":
        cfg = _base_config(args)
        for label, mu1, mu2 in presets.TABLE_CASES:
            params = Params(mu1, mu2)
            for refname in ("o1", "o2"):
                for row in monodromy.table_rows(params, _REFS[refname]):
                    rec = _mono_record(f"{label}/{refname}/{row.label}", row.result)
                    rec["mu1"], rec["mu2"] = mu1, mu2
                    results.append(rec)
                    worst_residual = max(worst_residual, row.result.residual)
    elif args.preset is None:
        params = _params(args)
        cfg = _base_config(args)
        h = args.h if args.h is not None else monodromy.default_slice_energy(params)
        loop_spec = args.loop or "gamma3"
        if loop_spec.startswith("gamma"):
            indices = tuple(int(c) for c in loop_spec.removeprefix("gamma"))
        else:
            indices = tuple(int(s) for s in loop_spec.split(","))
        kwargs = {"dl": args.dl, "orientation": args.orientation}
        if args.dg is not None:
            kwargs["dg_margin"] = args.dg
        loop = monodromy.loop_around_lines(params, h, indices, **kwargs)
        res = monodromy.monodromy_matrix(loop, params, _REFS[args.ref],
                                         eps=args.eps)
        results.append(_mono_record(loop_spec, res))
        worst_residual = res.residual
    else:
        raise ConfigError(f"unknown monodromy preset {args.preset!r}")
    out = args.out if args.out.suffix == ".json" else args.out / "monodromy.json"
    reliable = worst_residual < monodromy.RESIDUAL_LIMIT
    formats.write_json(out, "monodromy.v1", cfg, results,
                       {"worst_residual": worst_residual, "reliable": reliable})
    print(out)
    return EXIT_OK if reliable else EXIT_UNRELIABLE


def _mono_record(label: str, res: monodromy.MonodromyResult) -> dict:
    return {
        "label": label,
        "reference": res.reference.value,
        "loop": {"h": res.loop.h, "center_g": res.loop.center_g,
                 "dg": res.loop.dg, "dl": res.loop.dl,
                 "orientation": res.loop.orientation},
        "matrix": res.matrix.tolist(),
        "m": res.mn[0],
        "n": res.mn[1],
        "raw_m": res.raw_m,
        "raw_n": res.raw_n,
        "residual": res.residual,
        "reliable": res.reliable,
        "jumps": {f"{g:.6g}": list(j) for g, j in res.jumps.items()},
    }


# ---------------------------------------------------------------------------

def cmd_scatter(args) -> int:
    cfg = _base_config(args)
    wrote = []
    code = EXIT_OK
    if args.knauf:
        code = max(code, _scatter_knauf(args, cfg, wrote))
    if args.deflection_loop:
        code = max(code, _scatter_deflection(args, cfg, wrote))
    if args.state or args.fiber:
        code = max(code, _scatter_trajectory(args, cfg, wrote))
    if not wrote:
        raise ConfigError("scatter: nothing to do "
                          "(need --state, --fiber, --deflection-loop or --knauf)")
    for p in wrote:
        print(p)
    return code


def _scatter_trajectory(args, cfg, wrote) -> int:
    params = _params(args)
    if args.state:
        s0 = PhaseState(np.array(args.state[:3]), np.array(args.state[3:]))
    else:
        h, l, g = args.fiber
        s0 = dynamics.fiber_state(InvariantPoint(h, l, g), params,
                                  xi0=args.r_max / (2 * params.a))
    traj = dynamics.integrate(s0, params, t_max=args.t_max, r_max=args.r_max,
                              tol=args.tol)
    rows = [tuple(row) for row in traj.states]
    wrote.append(formats.write_csv(
        args.out / "trajectory.csv", "trajectory.v1", cfg,
        ["t", "x", "y", "z", "px", "py", "pz", "phi"], rows,
        meta={"reason": traj.reason.value, "nsteps": traj.nsteps}))
    diag = {"reason": traj.reason.value, "nsteps": traj.nsteps,
            "drift": dynamics.conservation_drift(traj)}
    results = {}
    if traj.reason.value == "radius-reached":
        for side, name in ((-1, "incoming"), (1, "outgoing")):
            asym = scattering.extract_asymptote(traj, side)
            results[name] = {"p_hat": asym.p_hat, "q_perp": asym.q_perp,
                             "error": asym.error, "lz": asym.lz}
    wrote.append(formats.write_json(args.out / "asymptotes.json",
                                    "asymptotes.v1", cfg, results, diag))
    return EXIT_OK


def _scatter_deflection(args, cfg, wrote) -> int:
    if args.deflection_loop != "gamma3":
        raise ConfigError("only the gamma3 deflection-loop preset is defined")
    params = presets.GRAVITATIONAL
    loop = presets.gamma3_deflection_loop()
    variation, ds = scattering.deflection_loop_variation(
        loop, params, _REFS[args.ref], n_points=args.points)
    rows = []
    for k, d in enumerate(ds):
        t = 2.0 * np.pi * (k + 0.5) / args.points
        rows.append((k, loop.center_g + loop.dg * np.cos(t),
                     loop.dl * np.sin(t), d))
    wrote.append(formats.write_csv(
        args.out / "deflection_gamma3.csv", "deflection.v1",
        dict(cfg, mu1=params.mu1, mu2=params.mu2, h=loop.h),
        ["k", "g", "l", "deflection_difference"], rows,
        meta={"h": loop.h, "variation": formats.fmt_float(variation),
              "winding": formats.fmt_float(variation / (2 * np.pi)),
              "points": args.points, "reference": args.ref}))
    wrote.append(formats.write_json(
        args.out / "deflection_gamma3.json", "deflection.v1", cfg,
        {"variation": variation, "winding": variation / (2 * np.pi),
         "values": ds},
        {"n_points": args.points}))
    ok = abs(variation / (2 * np.pi) - round(variation / (2 * np.pi))) < 0.05
    return EXIT_OK if ok else EXIT_UNRELIABLE


def _scatter_knauf(args, cfg, wrote) -> int:
    if args.h is None:
        raise ConfigError("--knauf needs --h")
    spec = _potential_spec(args)
    sweep = scattering.knauf_degree_planar(spec, args.h, n_base=args.sweep)
    rows = list(zip(sweep.impact, sweep.theta_out))
    wrote.append(formats.write_csv(
        args.out / f"knauf_h{args.h:g}.csv", "knauf.v1", cfg,
        ["impact_parameter", "theta_out_unwrapped"], rows,
        meta={"h": args.h, "degree": sweep.degree}))
    wrote.append(formats.write_json(
        args.out / f"knauf_h{args.h:g}.json", "knauf.v1", cfg,
        {"degree": sweep.degree, "h": sweep.h, "n_points": len(sweep.impact)}))
    return EXIT_OK


def _potential_spec(args):
    from .scattering import PotentialSpec

    name = args.knauf
    if name == "gaussian":
        return PotentialSpec("gaussian", (args.v0, args.width))
    if name == "kepler":
        return PotentialSpec("kepler", (args.mu1 if args.mu1 is not None else 1.0,))
    if name == "two-center":
        params = _params(args)
        return PotentialSpec("two-center", (params.mu1, params.mu2, params.a))
    path = Path(name)
    if path.exists():
        data = np.loadtxt(path, delimiter=",", comments="#")
        return PotentialSpec("radial-table", table=(tuple(data[:, 0]),
                                                    tuple(data[:, 1])))
    raise ConfigError(f"unknown potential {name!r} (not a registry name or CSV path)")


# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        args = _apply_config(args, argv)
        np.random.seed(args.seed)  # randomized sampling, if any, is reproducible
        handler = {"bifdiag": cmd_bifdiag, "monodromy": cmd_monodromy,
                   "scatter": cmd_scatter}[args.command]
        return handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TwoCenterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRELIABLE


if __name__ == "__main__":
    sys.exit(main())
