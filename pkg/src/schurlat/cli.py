"""Command-line entry point: `schurlat <command> [subcommand] --config FILE`."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from typing import Callable, Sequence

import numpy as np

from . import asymptotics as asy
from . import frozen as fz
from . import report
from .checks import check_schur_golden, check_schur_oracles, run_all
from .config import ConfigError, RunConfig, parse_config
from .lattice import (
    boltzmann_marginal,
    build_dual,
    build_lattice,
    enumerate_matchings,
    height_function,
    matching_to_sequence,
    partition_function,
    row_for_level,
)
from .schur import (
    CapExceeded,
    coset_representatives,
    phi_data,
    schur_branching,
    schur_coset,
    schur_coset_general,
    schur_determinant,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2
ENV_PREFIX = "SCHURLAT_"
EXAMPLES = ("schur_golden", "hexagon", "square_hexagon", "small_lattice")

# flag name -> (RunConfig override key, parser for env values)
OVERRIDES: dict[str, tuple[str, Callable[[str], object]]] = {
    "jobs": ("jobs", int),
    "tol": ("tol", float),
    "cap_vertices": ("cap_vertices", int),
    "cap_cosets": ("cap_cosets", int),
    "kappa": ("kappa", float),
    "p": ("p", int),
    "out": ("dir", str),
}


class UsageError(Exception):
    pass


def example_text(name: str) -> str:
    if name not in EXAMPLES:
        raise UsageError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return resources.files("schurlat").joinpath("configs", f"{name}.ini").read_text(encoding="utf-8")


def load_config(args: argparse.Namespace, environ: dict[str, str]) -> RunConfig:
    path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    example = args.example or environ.get(ENV_PREFIX + "EXAMPLE")
    if path and args.example:
        raise UsageError("give either --config or --example, not both")
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    elif example:
        text = example_text(example)
    else:
        raise UsageError("a configuration is required (--config PATH or --example NAME)")
    cfg = parse_config(text)
    kw = {}
    for flag, (key, conv) in OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is None and ENV_PREFIX + flag.upper() in environ:
            raw = environ[ENV_PREFIX + flag.upper()]
            try:
                value = conv(raw)
            except ValueError as exc:
                raise UsageError(f"bad value for {ENV_PREFIX + flag.upper()}: {raw!r}") from exc
        kw[key] = value
    return cfg.with_overrides(**kw)


def parallel_map(fn, items: Sequence, jobs: int) -> list:
    """Ordered map, in worker processes when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


class Runner:
    def __init__(self, cfg: RunConfig, out=sys.stdout):
        self.cfg = cfg
        self.out = out
        self.files: list[str] = []

    def say(self, text: str = "") -> None:
        print(text, file=self.out)

    def path(self, name: str) -> str:
        return os.path.join(self.cfg.output.dir, name)

    def csv(self, name: str, header, rows) -> None:
        self.files.append(report.write_csv(self.path(name), header, rows))

    def svg(self, name: str, draw: Callable[[str], str]) -> None:
        if self.cfg.output.svg:
            self.files.append(draw(self.path(name)))

    # schur -------------------------------------------------------------

    def schur_eval(self) -> int:
        m, run = self.cfg.model, self.cfg.run
        lam = m.partition()
        spec = m.variable_spec(len(lam))
        rows = [
            ("coset", schur_coset(lam, spec, run.cap_cosets)),
            ("branching", schur_branching(lam, spec.expanded())),
        ]
        if run.deform:
            w = list(run.deform) + list(spec.expanded()[len(run.deform):])
            rows.append(("coset_deformed", schur_coset_general(lam, run.deform, spec, run.cap_cosets)))
            rows.append(("branching_deformed", schur_branching(lam, w)))
            if len(set(w)) == len(w):
                rows.append(("bialternant_deformed", schur_determinant(lam, w)))
        self.csv("schur_eval.csv", ("method", "value"), rows)
        for name, v in rows:
            self.say(f"{name}\t{report.fmt(v)}")
        agree = rows[0][1] == rows[1][1] and (not run.deform or rows[2][1] == rows[3][1])
        return EXIT_OK if agree else EXIT_CHECK

    def schur_coset(self) -> int:
        m, run = self.cfg.model, self.cfg.run
        lam = m.partition()
        spec = m.variable_spec(len(lam))
        reps = coset_representatives(spec, run.cap_cosets)
        rows = []
        for rep in reps:
            d = phi_data(lam, rep.sigma, spec)
            rows.append((
                " ".join(str(s + 1) for s in d.sigma),
                " ".join(map(str, d.eta)),
                *("(" + ",".join(map(str, ph.parts)) + ")" for ph in d.phi),
            ))
        header = ("sigma", "eta", *(f"phi{i + 1}" for i in range(spec.n)))
        self.csv("schur_coset.csv", header, rows)
        self.say(f"{len(reps)} coset representatives")
        return EXIT_OK

    def schur_verify(self) -> int:
        run = self.cfg.run
        results = [check_schur_golden(run.seed), check_schur_oracles(run.trials, run.seed, run.cap_cosets)]
        return self.report_checks(results)

    # lattice -----------------------------------------------------------

    def _lattice(self):
        spec = self.cfg.model.lattice_spec()
        lat = build_lattice(spec)
        return spec, lat, enumerate_matchings(lat, self.cfg.run.cap_vertices)

    def lattice_enumerate(self) -> int:
        _, lat, ms = self._lattice()
        rows = []
        for k, mt in enumerate(ms):
            seq = matching_to_sequence(lat, mt)
            parts = " | ".join(",".join(map(str, p.parts)) for p in seq.partitions)
            rows.append((k, mt.weight, " ".join(map(str, mt.edges)), parts))
        self.csv("lattice_enumerate.csv", ("index", "weight", "edges", "partitions"), rows)
        self.say(f"{len(lat.vertices)} vertices, {len(ms)} perfect matchings")
        return EXIT_OK

    def lattice_z(self) -> int:
        spec, _, ms = self._lattice()
        z_enum = sum((mt.weight for mt in ms), Fraction(0))
        z_formula = partition_function(spec)
        self.csv("lattice_z.csv", ("method", "value"), [("enumeration", z_enum), ("schur", z_formula)])
        self.say(f"enumeration\t{report.fmt(z_enum)}")
        self.say(f"schur\t{report.fmt(z_formula)}")
        return EXIT_OK if z_enum == z_formula else EXIT_CHECK

    def lattice_marginal(self) -> int:
        spec, lat, ms = self._lattice()
        row = self.cfg.run.row
        if row is None:
            row, _ = row_for_level(spec.N, self.cfg.run.kappa)
        law = boltzmann_marginal(lat, row, ms)
        rows = [("(" + ",".join(map(str, p.parts)) + ")", w, float(w)) for p, w in law.items()]
        self.csv("lattice_marginal.csv", ("partition", "probability", "probability_float"), rows)
        self.say(f"row {row}: {len(law)} partitions, total {report.fmt(sum(law.values(), Fraction(0)))}")
        return EXIT_OK

    def lattice_height(self) -> int:
        _, lat, ms = self._lattice()
        dual = build_dual(lat)
        total = sum((mt.weight for mt in ms), Fraction(0))
        mean: dict = {}
        ok = True
        boundary = None
        for mt in ms:
            field = height_function(lat, mt, dual)
            ok &= all(v == 0 for v in field.face_sums.values())
            boundary = field.boundary if boundary is None else boundary
            ok &= field.boundary == boundary
            for c, h in field.values.items():
                mean[c] = mean.get(c, Fraction(0)) + mt.weight * h / total
        coords = sorted(mean)
        self.csv("lattice_height.csv", ("x", "y", "mean_height"), [(c[0], c[1], mean[c]) for c in coords])
        pts = np.array([(float(c[0]), float(c[1])) for c in coords])
        vals = np.array([float(mean[c]) for c in coords])
        self.svg("lattice_height.svg", lambda p: report.plot_points(pts, vals, p, "mean height"))
        self.say(f"{len(coords)} faces; increments consistent: {'yes' if ok else 'no'}")
        return EXIT_OK if ok else EXIT_CHECK

    # limit shape -------------------------------------------------------

    def measure(self) -> int:
        model = self.cfg.model.asymptotics()
        rows = []
        for i, m in enumerate(model.measures, start=1):
            for a, b in m.intervals:
                rows.append((i, a, b))
            self.say(f"m{i}: " + " u ".join(f"[{report.fmt(a)}, {report.fmt(b)}]" for a, b in m.intervals)
                     + f"  mass {report.fmt(m.mass)}")
            if m.merged:
                self.say(f"m{i}: merged abutting intervals at " + ", ".join(report.fmt(v) for v in m.merged))
        self.csv("measure.csv", ("class", "left", "right"), rows)
        self.svg("measure.svg", lambda p: report.plot_measures(model.measures, p))
        return EXIT_OK

    def moments(self) -> int:
        model = self.cfg.model.asymptotics()
        run = self.cfg.run
        rows = []
        for p in range(run.p + 1):
            d = asy.moment_detail(model, p, run.kappa, run.nodes)
            rows.append((p, d.value, d.imag))
        self.csv("moments.csv", ("p", "moment", "imag_residual"), rows)
        self.say(f"{rows[-1][1]:.9f}")
        return EXIT_OK

    def density(self) -> int:
        model = self.cfg.model.asymptotics()
        prof = asy.density_profile(model, self.cfg.run.kappa, points=self.cfg.run.points)
        self.csv("density.csv", ("x", "f", "flagged", "conjugate_pairs"),
                 zip(prof.x, prof.f, prof.flagged, prof.pairs))
        self.svg("density.svg", lambda p: report.plot_density(prof.x, prof.f, prof.kappa, p))
        mass = float(np.trapezoid(prof.f, prof.x)) if hasattr(np, "trapezoid") else float(np.trapz(prof.f, prof.x))
        self.say(f"kappa {prof.kappa:g}: mass {mass:.6f}, {int(prof.flagged.sum())} flagged samples, "
                 f"max conjugate pairs {int(prof.pairs.max())}")
        return EXIT_OK

    def _grid(self, model):
        run = self.cfg.run
        chis = np.linspace(0.0, float(model.top) + 1.0, run.chi_points)
        kaps = np.linspace(0.0, 1.0, run.kappa_points + 2)[1:-1]
        return chis, kaps

    def heightlimit(self) -> int:
        model = self.cfg.model.asymptotics()
        chis, kaps = self._grid(model)
        rows_h = parallel_map(_height_row, [(model, float(k), tuple(chis)) for k in kaps], self.cfg.run.jobs)
        H = np.array(rows_h)
        self.csv("heightlimit.csv", ("chi", "kappa", "height"),
                 ((c, k, H[a, b]) for a, k in enumerate(kaps) for b, c in enumerate(chis)))
        self.svg("heightlimit.svg", lambda p: report.plot_field(chis, kaps, H, p, "limit height"))
        slopes = np.diff(H, axis=1) / np.diff(chis)
        self.say(f"{H.size} grid points; slope range [{slopes.min():.6f}, {slopes.max():.6f}]")
        return EXIT_OK

    # frozen boundary ---------------------------------------------------

    def frozen_curve(self) -> int:
        model = self.cfg.model.asymptotics()
        curves = fz.model_curves(model)
        regs = fz.regions(model)
        rows = [(c.i, t, chi, kap) for c in curves for t, chi, kap in c.samples]
        self.csv("frozen_curve.csv", ("i", "t", "chi", "kappa"), rows)
        summary = []
        for c, r in zip(curves, regs):
            line = f"n(chi-r)+({model.n - c.i + 1})(kappa-1)=0"
            summary.append((c.i, c.curve_class, c.class_formula, len(c.tangency_points),
                            " ".join(f"{v:.12g}" for v in c.tangency_points), c.top_point, line))
            self.say(f"C{c.i}: class {c.curve_class}, {len(c.tangency_points)} tangencies with kappa=0, "
                     f"meets kappa=1 at chi={c.top_point:.12g}")
        self.say("tangent lines reported in the general form n(chi - r) + (n - i + 1)(kappa - 1) = 0; "
                 "the short form chi - r + kappa - 1 = 0 agrees with it only for n = 1")
        self.csv("frozen_summary.csv",
                 ("i", "class", "class_formula", "tangencies", "tangency_chi", "top_chi", "tangent_line"), summary)
        self.svg("frozen_curve.svg",
                 lambda p: report.plot_curves(curves, regs, p, chi_max=float(model.top) + 1.0))
        disjoint = fz.regions_disjoint(regs)
        self.say(f"regions disjoint: {'yes' if disjoint else 'no'}")
        return EXIT_OK if disjoint else EXIT_CHECK

    def frozen_classify(self) -> int:
        model = self.cfg.model.asymptotics()
        chis, kaps = self._grid(model)
        tol = self.cfg.run.tol
        states = parallel_map(_classify_row, [(model, float(k), tuple(chis), tol) for k in kaps], self.cfg.run.jobs)
        code = {"liquid": 0, "boundary": 1, "frozen": 2, "threshold": 3}
        self.csv("frozen_classify.csv", ("chi", "kappa", "state"),
                 ((c, k, states[a][b]) for a, k in enumerate(kaps) for b, c in enumerate(chis)))
        grid = np.array([[code[s] for s in row] for row in states], dtype=float)
        self.svg("frozen_classify.svg", lambda p: report.plot_field(chis, kaps, grid, p, "0 liquid, 1 edge, 2 frozen"))
        counts = {s: sum(row.count(s) for row in states) for s in code}
        self.say(", ".join(f"{k} {v}" for k, v in counts.items()))
        return EXIT_OK

    def frozen_dual(self) -> int:
        model = self.cfg.model.asymptotics()
        duals = {}
        rows = []
        for i in range(1, model.n + 1):
            c_vals = model.c_values if i == 1 else ()
            J = fz.j_function(i, fz.psi(model.measures[i - 1]), model.n, c_vals)
            pts = fz.dual_curve(J, model.n, fz.parameter_grid(J))
            duals[i] = pts
            rows.extend((i, a, b) for a, b in pts)
        self.csv("frozen_dual.csv", ("i", "u", "v"), rows)
        self.svg("frozen_dual.svg", lambda p: report.plot_dual(duals, p))
        self.say(f"{len(rows)} dual curve samples")
        return EXIT_OK

    # verification ------------------------------------------------------

    def report_checks(self, results) -> int:
        for r in results:
            self.say(r.line())
        self.csv("verify.csv", ("check", "passed", "detail"), [(r.name, r.passed, r.detail) for r in results])
        failed = sum(not r.passed for r in results)
        self.say(f"{len(results) - failed}/{len(results)} checks passed")
        return EXIT_OK if failed == 0 else EXIT_CHECK

    def verify_all(self) -> int:
        return self.report_checks(run_all(self.cfg))


def _height_row(args) -> list[float]:
    model, kappa, chis = args
    level = asy.LevelMeasure(model, kappa)
    return [asy.height_limit(model, c, kappa, level) for c in chis]


def _classify_row(args) -> list[str]:
    model, kappa, chis, tol = args
    out = []
    for c in chis:
        try:
            out.append(fz.classify(model, c, kappa, tol))
        except fz.ThresholdError:
            out.append("threshold")
    return out


COMMANDS: dict[str, dict[str, Callable[[Runner], int]] | Callable[[Runner], int]] = {
    "schur": {"eval": Runner.schur_eval, "coset": Runner.schur_coset, "verify": Runner.schur_verify},
    "lattice": {
        "enumerate": Runner.lattice_enumerate,
        "z": Runner.lattice_z,
        "marginal": Runner.lattice_marginal,
        "height": Runner.lattice_height,
    },
    "measure": Runner.measure,
    "moments": Runner.moments,
    "density": Runner.density,
    "heightlimit": Runner.heightlimit,
    "frozen": {"curve": Runner.frozen_curve, "classify": Runner.frozen_classify, "dual": Runner.frozen_dual},
    "verify": {"all": Runner.verify_all},
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="INI configuration file")
    p.add_argument("--example", metavar="NAME", help=f"bundled configuration: {', '.join(EXAMPLES)}")
    p.add_argument("--out", metavar="DIR", help="directory for CSV and SVG output")
    p.add_argument("--jobs", type=int, metavar="K", help="worker processes for grid sweeps")
    p.add_argument("--tol", type=float, metavar="X", help="numerical tolerance")
    p.add_argument("--cap-vertices", dest="cap_vertices", type=int, metavar="M", help="matching enumeration cap")
    p.add_argument("--cap-cosets", dest="cap_cosets", type=int, metavar="M", help="coset enumeration cap")
    p.add_argument("--kappa", type=float, help="level kappa in (0, 1)")
    p.add_argument("--p", type=int, help="moment order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurlat", description="Schur-function tools for periodic dimer lattices")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, target in COMMANDS.items():
        cp = sub.add_parser(name)
        if isinstance(target, dict):
            ss = cp.add_subparsers(dest="sub", required=True)
            for sname in target:
                _common(ss.add_parser(sname))
        else:
            _common(cp)
    return parser


def main(argv: Sequence[str] | None = None, environ: dict[str, str] | None = None, out=None) -> int:
    parser = build_parser()
    out = sys.stdout if out is None else out
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    environ = dict(os.environ) if environ is None else environ
    target = COMMANDS[args.command]
    action = target[args.sub] if isinstance(target, dict) else target
    try:
        cfg = load_config(args, environ)
        os.makedirs(cfg.output.dir, exist_ok=True)
        return action(Runner(cfg, out))
    except (UsageError, ConfigError, CapExceeded) as exc:
        print(f"schurlat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"schurlat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
