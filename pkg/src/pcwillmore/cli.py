"""Command line interface: ``wl validate|energy|lift|invariants|dualcheck|vary``.

Reports are JSON (schema 1) on stdout or at ``--report``. Exit codes: 0 when
every check passes, 1 on a mathematical failure, 2 on an input error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .algebra.rational import INF, point_label
from .errors import DivergentEnd, NonzeroResidue, ParseError, WLError
from .report import RunReport, digest

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad spec file or arguments (exit code 2)."""


# --- spec loading ---------------------------------------------------------------

def _read_spec(path) -> tuple[bytes, dict]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        return raw, tomllib.loads(raw.decode())
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"invalid TOML in {path}: {exc}") from None


def load_curve(spec: dict):
    """MeromorphicCurve from ``[curve] f1, f2`` or ``[curve] fixture = SEED``."""
    from .weierstrass.curve import MeromorphicCurve
    from .weierstrass.fixtures import solve_22

    sec = spec.get("curve")
    if not isinstance(sec, dict):
        raise InputError("spec needs a [curve] table")
    if "fixture" in sec:
        return solve_22(int(sec["fixture"])).curve
    if "f1" not in sec or "f2" not in sec:
        raise InputError("[curve] needs f1 and f2")
    return MeromorphicCurve.parse(str(sec["f1"]), str(sec["f2"]))


def load_surface(spec: dict):
    from .s5.jets import builtin, from_expressions, graph_surface

    sec = spec.get("surface")
    if not isinstance(sec, dict):
        raise InputError("spec needs a [surface] table")
    try:
        if "builtin" in sec:
            return builtin(str(sec["builtin"]))
        if "potential" in sec:
            return graph_surface(str(sec["potential"]))
        if "components" in sec:
            comps = sec["components"]
            if len(comps) != 3:
                raise InputError("[surface] components needs three expressions")
            periods = tuple(float(p) for p in sec.get("periods", (2 * math.pi, 2 * math.pi)))
            return from_expressions(comps, periods, str(sec.get("name", "expression")))
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    except (SyntaxError, TypeError, ValueError) as exc:
        raise InputError(f"bad surface expression: {exc}") from None
    raise InputError("[surface] needs builtin, potential or components")


def quad_config(spec: dict, args):
    from .weierstrass.energy import QuadratureConfig

    sec = spec.get("quadrature", {})
    base = QuadratureConfig()
    tol = args.tol if args.tol is not None else float(sec.get("tol", base.tol))
    depth = args.max_depth if args.max_depth is not None else int(sec.get("max_depth", base.max_depth))
    if args.excision:
        exc = tuple(float(x) for x in args.excision.split(","))
    else:
        exc = tuple(float(x) for x in sec.get("excision", base.excision))
    return QuadratureConfig(tol=tol, max_depth=depth, excision=exc)


def _label(p) -> str:
    return point_label(p)


# --- commands -------------------------------------------------------------------

def cmd_validate(args) -> tuple[RunReport, int]:
    from .weierstrass.curve import validate_data

    raw, spec = _read_spec(args.spec)
    rep = RunReport("validate", digest(raw, {}), {"spec": Path(args.spec).name})
    curve = load_curve(spec)
    v = validate_data(curve)
    rep.data["curve"] = {"f1": curve.f1.to_text(), "f2": curve.f2.to_text()}
    rep.data["poles"] = [
        {
            "location": p.label,
            "order": p.order,
            "simple": p.simple,
            "residue": str(p.residue) if p.residue_exact else complex(p.residue),
            "residue_zero": p.residue_zero,
            "transversal": p.transversal,
        }
        for p in v.poles
    ]
    rep.data["failures"] = v.failures()
    rep.check("simple_poles", v.all_simple, None, v.all_simple)
    rep.check("residues_vanish", v.residues_vanish, None, v.residues_vanish)
    rep.check("immersion", v.immersion_ok, None, v.immersion_ok)
    if not v.immersion_ok:
        rep.data["immersion_witness"] = _label(v.immersion_witness)
    return rep, EXIT_OK if v.is_valid else EXIT_FAIL


def cmd_energy(args) -> tuple[RunReport, int]:
    from .weierstrass.curve import validate_data
    from .weierstrass.energy import willmore_energy

    raw, spec = _read_spec(args.spec)
    cfg = quad_config(spec, args)
    params = {"tol": cfg.tol, "max_depth": cfg.max_depth, "excision": cfg.excision, "force": args.force}
    rep = RunReport("energy", digest(raw, params), params)
    curve = load_curve(spec)
    v = validate_data(curve)
    if not v.is_valid and not args.force:
        rep.data["failures"] = v.failures()
        rep.check("valid", False, None, False)
        return rep, EXIT_FAIL
    e = willmore_energy(curve, cfg)
    rep.data.update(
        formula_value=e.formula_value if e.formula_value is not None else "n/a",
        degree_value=e.degree_value,
        quadrature_value=e.quadrature_value,
        gauss_degree=e.gauss_degree,
        n_poles=e.n_poles,
        valid=e.valid,
        excision_values={f"{k:g}": val for k, val in sorted(e.excision_values.items())},
        excision_drift=e.excision_drift,
        quadrature_error=e.quadrature_error,
        panels=e.panels,
        split_radius=e.split_radius,
        relative_errors=e.relative_errors,
    )
    if e.formula_value is not None:
        rep.check("formula_equals_degree", e.formula_value == e.degree_value, 0.0, e.formula_value == e.degree_value)
    if e.degree_value:
        rep.check_le("quadrature_vs_degree", abs(e.quadrature_value - e.degree_value) / e.degree_value, 5e-3)
    else:
        rep.check_le("quadrature_abs", abs(e.quadrature_value), 1e-9)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def lift_grid(curve, n: int) -> np.ndarray:
    """n x n cell-centred grid of xi, nudged off the finite poles."""
    poles = [complex(p.location) for p in curve.poles if p.location is not INF]
    half = 1.5 * max([1.0] + [abs(p) for p in poles])
    x = -half + 2 * half * (np.arange(n) + 0.5) / n
    X, Y = np.meshgrid(x, x, indexing="ij")
    xi = (X + 1j * Y).ravel()
    guard = 1e-3 * half
    for p in poles:
        d = xi - p
        close = np.abs(d) < guard
        if np.any(close):
            r = np.abs(d[close])
            phase = np.divide(d[close], r, out=np.ones_like(d[close]), where=r > 0)
            xi[close] = p + guard * phase
    return xi


def write_csv(path: Path, xi, t, w):
    cols = np.column_stack([xi.real, xi.imag, t, w[:, 0].real, w[:, 0].imag, w[:, 1].real, w[:, 1].imag])
    np.savetxt(path, cols, delimiter=",", fmt="%.17g", header="xi_re,xi_im,t,X1,Y1,X2,Y2", comments="")


COLUMNS = ("t", "X1", "Y1", "X2", "Y2")


def write_obj(path: Path, n: int, t, w, columns=("t", "X1", "Y1")):
    table = {"t": t, "X1": w[:, 0].real, "Y1": w[:, 0].imag, "X2": w[:, 1].real, "Y2": w[:, 1].imag}
    V = np.column_stack([table[c] for c in columns])
    lines = [f"# columns {' '.join(columns)}"]
    lines += [f"v {a:.17g} {b:.17g} {c:.17g}" for a, b, c in V]
    for i in range(n - 1):
        for j in range(n - 1):
            a = i * n + j + 1
            b, c, d = a + 1, a + n, a + n + 1
            lines.append(f"f {a} {c} {d}")
            lines.append(f"f {a} {d} {b}")
    path.write_text("\n".join(lines) + "\n")


def injectivity_heuristic(lift, rng_seed: int = 0, n: int = 400) -> int:
    """Count sample pairs with distinct parameters but coincident lift points."""
    rng = np.random.default_rng(rng_seed)
    xi = lift_grid(lift.curve, 64)
    xi = xi[rng.choice(len(xi), size=min(n, len(xi)), replace=False)]
    t, w = lift.sample(xi, eps_pole=0.0)
    P = np.column_stack([t, w.real, w.imag])
    scale = 1.0 + np.max(np.abs(P))
    dP = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    dX = np.abs(xi[:, None] - xi[None, :])
    hits = (dP < 1e-9 * scale) & (dX > 1e-3)
    return int(np.count_nonzero(np.triu(hits, 1)))


def cmd_lift(args) -> tuple[RunReport, int]:
    from .weierstrass.lift import contact_residual, end_closure_check, legendrian_lift

    raw, spec = _read_spec(args.spec)
    cols = tuple(args.columns.split(","))
    if len(cols) != 3 or any(c not in COLUMNS for c in cols):
        raise InputError(f"--columns needs three of {','.join(COLUMNS)}")
    params = {"samples": args.samples, "columns": cols}
    rep = RunReport("lift", digest(raw, params), params)
    curve = load_curve(spec)
    try:
        lift = legendrian_lift(curve)
    except NonzeroResidue as exc:
        rep.data["error"] = str(exc)
        rep.data["residue_point"] = _label(exc.point)
        rep.check("residues_vanish", False, None, False)
        return rep, EXIT_FAIL
    n = args.samples
    xi = lift_grid(curve, n)
    t, w = lift.sample(xi, eps_pole=0.0)
    rng = np.random.default_rng(args.seed)
    probe = xi[rng.choice(len(xi), size=min(1000, len(xi)), replace=False)]
    res = float(np.max(contact_residual(lift, probe)))
    rep.data["primitive"] = lift.primitive.to_text()
    rep.data["rows"] = int(len(xi))
    rep.check_le("contact_residual", res, 1e-8)
    ends = []
    for p in curve.poles:
        r = end_closure_check(lift, p.location, raise_on_failure=False)
        ends.append({
            "pole": r.pole, "converged": r.converged, "c0_gaps": r.c0_gaps, "c1_gaps": r.c1_gaps,
            "height_drift": r.height_drift, "monodromy": r.monodromy, "reasons": r.reasons,
        })
    rep.data["ends"] = ends
    rep.check("ends_close", all(e["converged"] for e in ends), None, all(e["converged"] for e in ends))
    rep.data["injectivity_coincidences"] = injectivity_heuristic(lift, args.seed)
    if args.out:
        out = Path(args.out)
        if out.suffix.lower() == ".obj":
            write_obj(out, n, t, w, cols)
        else:
            write_csv(out, xi, t, w)
        rep.data["output"] = out.name
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


REFERENCE_ENERGY = {"hexagonal_torus": 4 * math.pi**2 / math.sqrt(3), "equatorial_s2": 0.0}


def cmd_invariants(args) -> tuple[RunReport, int]:
    from .s5.invariants import (
        gauss_equation_residual, legendrian_check, point_invariants, sample_grid,
        willmore_energy_s5, willmore_residual,
    )

    raw, spec = _read_spec(args.spec)
    params = {"grid": args.grid}
    rep = RunReport("invariants", digest(raw, params), params)
    surf = load_surface(spec)
    rep.data["surface"] = surf.name
    leg = legendrian_check(surf, args.grid)
    rep.check_le("legendrian_residual", leg, 1e-8)
    u, v, _ = sample_grid(surf, 16, 16)
    inv = point_invariants(surf, u, v, 3)
    rep.check_le("gauss_equation_residual", float(np.max(gauss_equation_residual(inv))), 1e-6)
    rep.data["reeb_component"] = float(np.max(np.abs(inv.reeb)))
    W = willmore_energy_s5(surf, args.grid)
    W2 = willmore_energy_s5(surf, 2 * args.grid)
    rep.data["willmore_energy"] = W2
    rep.data["willmore_energy_coarse"] = W
    rep.check_le("energy_refinement", abs(W2 - W), 1e-6 * max(1.0, abs(W2)))
    if surf.name in REFERENCE_ENERGY:
        ref = REFERENCE_ENERGY[surf.name]
        rep.data["reference_energy"] = ref
        rep.check_le("energy_vs_reference", abs(W2 - ref) / max(ref, 1.0), 1e-4)
    u, v, _ = sample_grid(surf, 6, 6)
    wr = willmore_residual(surf, u, v)
    rep.data["willmore_residual_sup"] = float(np.max(np.abs(wr.residual)))
    rep.data["coupling_mismatch_sup"] = float(np.max(wr.coupling_mismatch))
    if surf.name in REFERENCE_ENERGY:
        rep.check_le("willmore_residual", rep.data["willmore_residual_sup"], 1e-6)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def dualcheck_table(seeds: int, constraint: str, base_seed: int = 0) -> dict:
    from .frames import (
        RESIDUAL_NAMES, consequence_identity, dual_map, duality_residuals, make_frame,
        residual_scale, sample_coefficients, standard_frame,
    )

    worst = {k: 0.0 for k in RESIDUAL_NAMES}
    cons = 0.0
    unconstrained = 0.0
    for s in range(base_seed, base_seed + seeds):
        c = sample_coefficients("B", s, constraint)
        cons = max(cons, abs(consequence_identity(c)) / max(1.0, max(abs(v) for v in (c.h, c.p, c.q, c.z, c.y, c.x)) ** 4))
        for frame in (standard_frame(), make_frame("random", seed=s)):
            r = duality_residuals(dual_map(frame, c), c) / residual_scale(frame, c)
            for k, val in zip(RESIDUAL_NAMES, r):
                worst[k] = max(worst[k], float(val))
        u = sample_coefficients("unconstrained", s)
        f = make_frame("random", seed=s)
        unconstrained = max(unconstrained, float(duality_residuals(dual_map(f, u), u)[0] / residual_scale(f, u)))
    return {"residuals": worst, "consequence_identity": cons, "unconstrained_YY": unconstrained}


def cmd_dualcheck(args) -> tuple[RunReport, int]:
    cons = ["derived", "as-printed"] if args.constraint == "both" else [args.constraint]
    params = {"seeds": args.seeds, "constraint": args.constraint, "seed": args.seed}
    rep = RunReport("dualcheck", digest(b"", params), params)
    if args.seeds <= 0:
        return rep, EXIT_OK
    tables = {}
    for c in cons:
        tab = dualcheck_table(args.seeds, c, args.seed)
        tables[c] = tab
        if c == "derived":
            for k, val in tab["residuals"].items():
                rep.check_le(f"derived:{k}", val, 1e-10)
            rep.check_le("derived:consequence_identity", tab["consequence_identity"], 1e-12)
            rep.check_le("unconstrained:<Y,Y>", tab["unconstrained_YY"], 1e-12)
    rep.data["tables"] = tables
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def parse_hamiltonian(text: str) -> int:
    kind, _, seed = text.partition(":")
    if kind not in ("random", "bump") or not seed.lstrip("-").isdigit():
        raise InputError(f"hamiltonian spec must be random:SEED, got {text!r}")
    return int(seed)


def cmd_vary(args) -> tuple[RunReport, int]:
    from .s5.flows import random_bump
    from .variation import first_variation_lift, first_variation_s5, lift_bump

    raw, spec = _read_spec(args.spec)
    seed = parse_hamiltonian(args.hamiltonian)
    params = {"hamiltonian": args.hamiltonian, "eps": args.eps, "exploratory": args.exploratory, "grid": args.grid}
    rep = RunReport("vary", digest(raw, params), params)
    rng = np.random.default_rng(seed)
    if "curve" in spec:
        from .weierstrass.curve import validate_data
        from .weierstrass.lift import legendrian_lift

        curve = load_curve(spec)
        valid = validate_data(curve).is_valid
        if not valid and not args.exploratory:
            raise InputError("base curve is not valid Weierstrass data (use --exploratory)")
        lift = legendrian_lift(curve, allow_log=not valid)
        energy = 4 * math.pi * (len(curve.poles) - 1)
        H, xi0 = lift_bump(lift, rng)
        tol = 1e-3 * energy
        res = first_variation_lift(lift, H, energy, xi0, eps=args.eps, tol=tol)
        rep.data["bump"] = {"center": H.center, "radius": H.radius, "amplitude": H.amplitude, "xi0": xi0}
    else:
        surf = load_surface(spec)
        if surf.name != "equatorial_s2" and not args.exploratory:
            raise InputError(f"{surf.name} is not a known Willmore surface (use --exploratory)")
        u, v = rng.uniform(0.2, 1.2, 2)
        c = surf.position(u, v)
        H = random_bump(rng, np.concatenate([c.real, c.imag]), 0.8)
        res = first_variation_s5(surf, H, args.eps or 1e-4, args.grid)
        rep.data["bump"] = {"center": H.center, "radius": H.radius, "amplitude": H.amplitude}
        tol = 1e-4 * (1.0 + res.energy)
    rep.data.update(derivative=res.derivative, error=res.error, coarse=res.coarse, fine=res.fine,
                    eps=res.eps, energy=res.energy, details=res.details)
    if args.exploratory:
        rep.check("dW/deps", res.derivative, None, None)
        return rep, EXIT_OK
    rep.check_le("|dW/deps|", abs(res.derivative), tol)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


# --- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wl", description=__doc__.splitlines()[0])
    ap.add_argument("--report", help="write the JSON report here instead of stdout")
    ap.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte identity)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check Weierstrass data")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("energy", help="Willmore energy three ways")
    p.add_argument("spec")
    p.add_argument("--force", action="store_true", help="run on invalid data for diagnostics")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--excision", help="comma separated excision radii")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("lift", help="sample the Legendrian lift")
    p.add_argument("spec")
    p.add_argument("--samples", type=int, default=64, help="grid size N (N^2 rows)")
    p.add_argument("--out", help=".csv or .obj output path")
    p.add_argument("--columns", default="t,X1,Y1", help="three columns for OBJ export")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("invariants", help="metric invariants of a surface in S^5")
    p.add_argument("spec")
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("dualcheck", help="duality identities on seeded fixtures")
    p.add_argument("--seeds", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--constraint", choices=("derived", "as-printed", "both"), default="derived")
    p.set_defaults(func=cmd_dualcheck)

    p = sub.add_parser("vary", help="first variation under a contact Hamiltonian flow")
    p.add_argument("spec")
    p.add_argument("--hamiltonian", default="random:0")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--exploratory", action="store_true")
    p.set_defaults(func=cmd_vary)
    return ap


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        rep, code = args.func(args)
    except ParseError as exc:
        rep = RunReport(args.command, "", {})
        rep.data["error"] = exc.message
        rep.data["position"] = exc.position
        print(f"wl: parse error: {exc}", file=sys.stderr)
        _emit(rep.to_json(), args.report)
        return EXIT_INPUT
    except InputError as exc:
        print(f"wl: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DivergentEnd as exc:
        print(f"wl: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except WLError as exc:
        print(f"wl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.timings:
        rep.timings = {"total_s": time.perf_counter() - start}
    _emit(rep.to_json(), args.report)
    return code


if __name__ == "__main__":
    sys.exit(main())
