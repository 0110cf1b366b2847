"""Command-line front end: transmission sweeps, spectrum traces, verification.

Data is emitted as CSV (15-significant-digit scientific notation, so values
round-trip double precision) or JSON.  Identical run configurations produce
byte-identical CSV files: formatting is fixed, grid points are assembled in
input order regardless of worker scheduling, and no timestamps are written.
Figures are rendered only on request via --plot, next to the data file.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import enum
import json
import os
import pathlib
import sys
import typing
import warnings

import numpy as np
from scipy.optimize import minimize_scalar

from . import boundstates, fixtures, oracle, scattering
from .boundstates import StateKind
from .errors import (DomainError, NoFoldError, SlowDecayWarning,
                     SolverError)
from .potentials import PotentialSpec, Shape

_UNITARITY_TOL = 1e-6
_RESONANCE_R_TOL = 1e-4

# exit codes: 0 ok, 1 verification failure, 2 bad parameters,
# 3 numerical failure, 4 no fold in the scanned window
EXIT_VERIFY_FAIL = 1
EXIT_BAD_PARAMS = 2
EXIT_NUMERICAL = 3
EXIT_NO_FOLD = 4


class Command(str, enum.Enum):
    Transmission = "transmission"
    Spectrum = "spectrum"
    Verify = "verify"


class Format(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    command: Command
    potential: PotentialSpec
    energy_grid: tuple = (1.01, 4.0, 400)
    v0_grid: tuple = (0.05, 2.5, 0.02)
    output_path: str = ""
    format: Format = Format.CSV
    oracle_check: bool = False
    compare: typing.Optional[str] = None
    plot: bool = False
    fixture: typing.Optional[str] = None
    oracle_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "command", Command(self.command))
        object.__setattr__(self, "format", Format(self.format))
        emin, emax, count = self.energy_grid
        if not (emin < emax and int(count) >= 2):
            raise DomainError("energy grid must satisfy min < max, count >= 2")
        object.__setattr__(self, "energy_grid",
                           (float(emin), float(emax), int(count)))
        vmin, vmax, step = self.v0_grid
        if not (0.0 <= vmin < vmax and step > 0.0):
            raise DomainError("V0 grid must satisfy 0 <= min < max, step > 0")
        object.__setattr__(self, "v0_grid",
                           (float(vmin), float(vmax), float(step)))
        if self.compare not in (None, "square", "cusp"):
            raise DomainError(f"unknown comparison curve {self.compare!r}")

    @property
    def resolved_output(self) -> pathlib.Path:
        if self.output_path:
            return pathlib.Path(self.output_path)
        return pathlib.Path(f"{self.command.value}.{self.format.value}")


def _worker_count() -> int:
    raw = os.environ.get("DKP_THREADS", "").strip()
    if raw:
        n = int(raw)
        if n < 1:
            raise DomainError("DKP_THREADS must be a positive integer")
        return n
    return min(8, os.cpu_count() or 1)


def _map_ordered(fn, items):
    """Map over grid points with a worker pool, results in input order."""
    workers = _worker_count()
    if workers == 1 or len(items) < 4:
        return [fn(x) for x in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _transmission_fn(spec: PotentialSpec):
    """Pointwise E -> TransmissionPoint for the given barrier shape."""
    if spec.V0 == 0.0:
        return lambda e: scattering.TransmissionPoint(E=float(e), T=1.0, R=0.0)
    if spec.shape is Shape.WoodsSaxonBarrier:
        return lambda e: scattering.transmission(e, spec)
    if spec.shape is Shape.SquareBarrier:
        return lambda e: scattering.square_barrier_transmission(
            e, spec.L, spec.V0)
    if spec.shape is Shape.CuspBarrier:
        return lambda e: oracle.ode_transmission(e, spec)
    raise DomainError(f"transmission needs a barrier shape, got {spec.shape}")


def _curve_label(spec: PotentialSpec) -> str:
    base = {Shape.WoodsSaxonBarrier: "woods-saxon",
            Shape.SquareBarrier: "square",
            Shape.CuspBarrier: "cusp",
            Shape.WoodsSaxonWell: "woods-saxon",
            Shape.SquareWell: "square",
            Shape.CuspWell: "cusp"}[spec.shape]
    parts = [base]
    if "square" not in base:
        parts.append(f"a={spec.a:g}")
    if "cusp" not in base:
        parts.append(f"L={spec.L:g}")
    parts.append(f"V0={spec.V0:g}")
    return " ".join(parts)


def _comparison_spec(spec: PotentialSpec, which: str) -> PotentialSpec:
    shape = Shape.SquareBarrier if which == "square" else Shape.CuspBarrier
    return PotentialSpec(shape=shape, a=spec.a, L=spec.L, V0=spec.V0)


def _curve_resonances(fn, emin: float, emax: float) -> list:
    """Transmission resonances of an arbitrary pointwise route.

    Local minima of R on a coarse scan are polished with a bounded
    minimizer and kept when the reflection really drops to zero.
    """
    es = np.linspace(emin, emax, 201)
    rs = np.array([fn(e).R for e in es])
    out = []
    for i in range(1, len(es) - 1):
        if rs[i] <= rs[i - 1] and rs[i] <= rs[i + 1] and rs[i] < 0.5:
            res = minimize_scalar(lambda e: fn(e).R,
                                  bounds=(es[i - 1], es[i + 1]),
                                  method="bounded",
                                  options={"xatol": 1e-8})
            if res.fun < _RESONANCE_R_TOL:
                out.append(float(res.x))
    return sorted(out)


def _resonances_for(spec: PotentialSpec, emin: float, emax: float) -> list:
    if spec.V0 == 0.0:
        return []
    if spec.shape is Shape.WoodsSaxonBarrier:
        return scattering.find_resonances(spec, emin, emax)
    return _curve_resonances(_transmission_fn(spec), emin, emax)


def _write_text(path: pathlib.Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _emit_transmission(path: pathlib.Path, blocks, fmt: Format):
    """blocks: list of (label, list[TransmissionPoint])."""
    if fmt is Format.CSV:
        lines = []
        for label, points in blocks:
            lines.append(f"# curve: {label}")
            lines.append("E,T,R")
            lines.extend(f"{p.E:.14e},{p.T:.14e},{p.R:.14e}" for p in points)
        _write_text(path, "\n".join(lines) + "\n")
    else:
        obj = [{"curve": label,
                "points": [{"E": p.E, "T": p.T, "R": p.R} for p in points]}
               for label, points in blocks]
        _write_text(path, json.dumps(obj, indent=2) + "\n")


def _emit_spectrum(path: pathlib.Path, branch, summary, fmt: Format):
    v_cr, e_cr, resid = summary
    if fmt is Format.CSV:
        lines = ["V0,E,N,kind"]
        lines.extend(f"{p.V0:.14e},{p.E:.14e},{p.N:.14e},{p.kind.value}"
                     for p in branch.points)
        _write_text(path, "\n".join(lines) + "\n")
    else:
        # a square well has no finite steepness; JSON has no Infinity
        a_out = branch.a if np.isfinite(branch.a) else None
        obj = {"a": a_out, "L": branch.L, "V_cr": v_cr, "E_cr": e_cr,
               "residual_err": resid,
               "points": [{"V0": p.V0, "E": p.E, "N": p.N,
                           "kind": p.kind.value} for p in branch.points]}
        _write_text(path, json.dumps(obj, indent=2) + "\n")


def _plot_transmission(path: pathlib.Path, blocks):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, points in blocks:
        ax.plot([p.E for p in points], [p.T for p in points], label=label)
    ax.set_xlabel("E")
    ax.set_ylabel("T")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best")
    fig.tight_layout()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def _plot_spectrum(path: pathlib.Path, branch, summary):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for kind, marker in ((StateKind.Particle, "o"),
                         (StateKind.Antiparticle, "s")):
        pts = [p for p in branch.points if p.kind is kind]
        if pts:
            ax.plot([p.V0 for p in pts], [p.E for p in pts], marker,
                    ms=3, ls="none", label=kind.value.lower())
    v_cr, e_cr, _ = summary
    ax.plot([v_cr], [e_cr], "kx", ms=9, label="fold")
    ax.set_xlabel("V0")
    ax.set_ylabel("E")
    ax.set_ylim(-1.02, 1.02)
    ax.legend(loc="best")
    fig.tight_layout()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def cmd_transmission(cfg: RunConfig) -> int:
    spec = cfg.potential
    if spec.is_well:
        raise DomainError("transmission needs a barrier shape; "
                          "use `spectrum` for wells")
    emin, emax, n = cfg.energy_grid
    if emin <= 1.0:
        raise DomainError("transmission is defined for E > 1; raise --emin")
    es = np.linspace(emin, emax, n)
    blocks = [(_curve_label(spec),
               _map_ordered(_transmission_fn(spec), list(es)))]
    if cfg.compare:
        cspec = _comparison_spec(spec, cfg.compare)
        blocks.append((_curve_label(cspec),
                       _map_ordered(_transmission_fn(cspec), list(es))))

    worst = max(abs(p.T + p.R - 1.0) for _, pts in blocks for p in pts)
    if worst > _UNITARITY_TOL:
        raise SolverError(f"unitarity violated on the grid: "
                          f"max |T+R-1| = {worst:.3e}")

    path = cfg.resolved_output
    _emit_transmission(path, blocks, cfg.format)
    print(f"wrote {sum(len(pts) for _, pts in blocks)} rows "
          f"({len(blocks)} curve{'s' if len(blocks) > 1 else ''}) to {path}")

    found = _resonances_for(spec, emin, emax)
    if found:
        print("resonances: " + ", ".join(f"{e:.5f}" for e in found))
    else:
        print("resonances: none found in window")
    if cfg.compare:
        cfound = _resonances_for(_comparison_spec(spec, cfg.compare),
                                 emin, emax)
        if cfound:
            print(f"{cfg.compare} resonances: "
                  + ", ".join(f"{e:.5f}" for e in cfound))
        if found and cfound:
            ref = min(cfound, key=lambda e: abs(e - found[0]))
            offset = min((abs(f - ref), ref - f) for f in found)[1]
            print(f"resonance offset: {offset:+.5f}")

    if cfg.oracle_check and spec.shape is not Shape.CuspBarrier \
            and spec.V0 > 0.0:
        idx = np.linspace(0, n - 1, min(n, 12)).astype(int)
        worst = max(abs(blocks[0][1][i].T - oracle.ode_transmission(
            float(es[i]), spec).T) for i in idx)
        print(f"oracle check: max |dT| = {worst:.3e} "
              f"on {len(idx)} points")
        if worst > 1e-6:
            raise SolverError("closed form and direct integration disagree")

    if cfg.plot:
        print(f"figure: {_plot_transmission(path, blocks)}")
    return 0


def _cusp_spectrum(spec: PotentialSpec, v0_grid) -> tuple:
    """Spectrum trace and fold for a cusp well, all by direct integration.

    Levels are normalized with phi(0) = 1 before the charge integral, so N
    magnitudes are on that convention; signs classify the branch either way.
    """
    vmin, vmax, _ = v0_grid
    v_cr, e_cr = oracle.critical_potential_ode(Shape.CuspWell, spec.a,
                                               V0_hint=0.9 * vmax)
    if not vmin < v_cr <= vmax * 1.5:
        raise NoFoldError(f"fold at V_cr = {v_cr:.6f} outside the window")
    points = []
    for v in np.linspace(max(vmin, 0.3 * v_cr), v_cr - 1e-4, 12):
        sub = PotentialSpec(shape=Shape.CuspWell, a=spec.a, L=spec.L,
                            V0=float(v))
        # the ladder stops 1e-4 short of the fold, where the deepest level
        # has already pulled back from E = -1 by ~sqrt(1e-4); a 1e-4 margin
        # on the scan window keeps the edge evaluations affordable
        for e in oracle.bound_energies_ode(sub, e_lo=-1.0 + 1e-4,
                                           e_hi=1.0 - 1e-4):
            n_val = oracle.ode_norm(e, sub)
            kind = (StateKind.Particle if n_val > 0
                    else StateKind.Antiparticle)
            points.append(boundstates.BoundState(V0=float(v), E=float(e),
                                                 N=float(n_val), kind=kind))
    branch = boundstates.SpectrumBranch(a=spec.a, L=spec.L, points=points,
                                        turning_point=(v_cr, e_cr))
    return branch, (v_cr, e_cr, 1e-6)


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = cfg.potential
    if not spec.is_well:
        raise DomainError("spectrum needs a well shape; "
                          "use `transmission` for barriers")
    vmin, vmax, step = cfg.v0_grid

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if spec.shape is Shape.WoodsSaxonWell:
            branches = boundstates.trace_spectrum(spec.a, spec.L, vmin, vmax,
                                                  step0=step)
            turning = branches[0].turning_point
            if turning is None:
                print(f"no fold found below V0 = {vmax:g}", file=sys.stderr)
                return EXIT_NO_FOLD
            branch = boundstates.SpectrumBranch(
                a=spec.a, L=spec.L,
                points=[p for b in branches for p in b.points],
                turning_point=turning)
            cp = boundstates.find_critical_potential(spec.a, spec.L,
                                                     0.98 * turning[0])
            summary = (cp.V_cr, cp.E_cr, cp.residual_err)
        elif spec.shape is Shape.SquareWell:
            branch = boundstates.square_well_spectrum(spec.L, (vmin, vmax))
            if branch.turning_point is None:
                print(f"no fold found below V0 = {vmax:g}", file=sys.stderr)
                return EXIT_NO_FOLD
            v_cr, e_cr = branch.turning_point
            resid = abs(boundstates.square_well_residual(e_cr, spec.L, v_cr))
            summary = (v_cr, e_cr, resid)
        else:
            try:
                branch, summary = _cusp_spectrum(spec, cfg.v0_grid)
            except NoFoldError as err:
                print(str(err), file=sys.stderr)
                return EXIT_NO_FOLD
    slow = sum(issubclass(w.category, SlowDecayWarning) for w in caught)
    for w in caught:
        if not issubclass(w.category, SlowDecayWarning):
            print(f"warning: {w.message}", file=sys.stderr)
    if slow:
        print(f"note: {slow} level(s) close enough to the continuum edge "
              "that their norm quadrature converges slowly", file=sys.stderr)

    path = cfg.resolved_output
    _emit_spectrum(path, branch, summary, cfg.format)
    print(f"wrote {len(branch.points)} rows to {path}")
    print(f"V_cr={summary[0]:.6f}, E_cr={summary[1]:.6f}, "
          f"residual={summary[2]:.3e}")
    if cfg.plot:
        print(f"figure: {_plot_spectrum(path, branch, summary)}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    names = [cfg.fixture] if cfg.fixture else None
    try:
        results = fixtures.run_matrix(names, oracle_only=cfg.oracle_only)
    except KeyError as err:
        raise DomainError(str(err)) from None
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.seconds:7.2f}s  {r.title}")
        if not r.passed:
            print(f"{'':<{width}}  -> {r.detail}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} fixtures passed")
    return 0 if n_pass == len(results) else EXIT_VERIFY_FAIL


_SHAPES_BY_COMMAND = {
    Command.Transmission: {"ws": Shape.WoodsSaxonBarrier,
                           "square": Shape.SquareBarrier,
                           "cusp": Shape.CuspBarrier},
    Command.Spectrum: {"ws": Shape.WoodsSaxonWell,
                       "square": Shape.SquareWell,
                       "cusp": Shape.CuspWell},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dkp1d",
        description="Spin-one DKP transmission and bound-state solver "
                    "for one-dimensional Woods-Saxon, square, and cusp "
                    "potentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with RunConfig fields; "
                                        "explicit flags override it")
        p.add_argument("--out", help="output data file path")
        p.add_argument("--format", choices=[f.value for f in Format],
                       help="output format (default csv)")
        p.add_argument("--plot", action="store_true",
                       help="also render a figure next to the data file")

    t = sub.add_parser("transmission",
                       help="sweep T(E), R(E) over an energy grid")
    common(t)
    t.add_argument("--shape", choices=["ws", "square", "cusp"], default="ws")
    t.add_argument("--a", type=float, help="wall steepness (default 1)")
    t.add_argument("--L", type=float, help="half-width (default 1)")
    t.add_argument("--V0", type=float, help="barrier height (default 1)")
    t.add_argument("--emin", type=float, help="grid start (default 1.01)")
    t.add_argument("--emax", type=float, help="grid end (default 4)")
    t.add_argument("--n", type=int, help="grid size (default 400)")
    t.add_argument("--compare", choices=["square", "cusp"],
                   help="emit a second curve for the matching shape")
    t.add_argument("--oracle-check", action="store_true",
                   help="cross-check sampled points by direct integration")

    s = sub.add_parser("spectrum",
                       help="trace bound levels E(V0) up to the fold")
    common(s)
    s.add_argument("--shape", choices=["ws", "square", "cusp"], default="ws")
    s.add_argument("--a", type=float, help="wall steepness (default 1)")
    s.add_argument("--L", type=float, help="half-width (default 1)")
    s.add_argument("--v0min", type=float, help="trace start (default 0.05)")
    s.add_argument("--v0max", type=float, help="trace end (default 2.5)")
    s.add_argument("--v0step", type=float,
                   help="initial trace step (default 0.02)")

    v = sub.add_parser("verify", help="run the verification fixture matrix")
    common(v)
    v.add_argument("--fixture", help="run a single named fixture")
    v.add_argument("--oracle-only", action="store_true",
                   help="run only the direct-integration fixtures")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        obj = json.loads(pathlib.Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise DomainError(f"cannot read config {path}: {err}") from None
    if not isinstance(obj, dict):
        raise DomainError("config file must hold a JSON object")
    return obj


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge command-line flags over an optional --config JSON file.

    Precedence: explicit flag, then config-file field, then default.
    """
    command = Command(args.command)
    file_cfg = _load_config_file(args.config) if args.config else {}
    if "command" in file_cfg and Command(file_cfg["command"]) is not command:
        raise DomainError(f"config file is for "
                          f"`{file_cfg['command']}`, not `{command.value}`")

    def flag(name):
        return getattr(args, name, None)

    def grid(flag_names, key, default):
        base = list(file_cfg.get(key, default))
        if len(base) != 3:
            raise DomainError(f"{key} must hold exactly three values")
        for i, name in enumerate(flag_names):
            if flag(name) is not None:
                base[i] = flag(name)
        return tuple(base)

    pot_cfg = file_cfg.get("potential", {})
    if command is Command.Verify:
        potential = PotentialSpec(shape=Shape.WoodsSaxonBarrier)
    else:
        if flag("shape") is not None:
            shape = _SHAPES_BY_COMMAND[command][flag("shape")]
        elif "shape" in pot_cfg:
            shape = Shape(pot_cfg["shape"])
        else:
            shape = _SHAPES_BY_COMMAND[command]["ws"]
        params = {name: flag(name) if flag(name) is not None
                  else pot_cfg.get(name, 1.0) for name in ("a", "L", "V0")}
        potential = PotentialSpec(shape=shape, **params)

    def scalar(name, key, default):
        return flag(name) if flag(name) is not None \
            else file_cfg.get(key, default)

    return RunConfig(
        command=command,
        potential=potential,
        energy_grid=grid(("emin", "emax", "n"),
                         "energy_grid", (1.01, 4.0, 400)),
        v0_grid=grid(("v0min", "v0max", "v0step"),
                     "v0_grid", (0.05, 2.5, 0.02)),
        output_path=scalar("out", "output_path", ""),
        format=Format(scalar("format", "format", Format.CSV.value)),
        oracle_check=bool(flag("oracle_check")
                          or file_cfg.get("oracle_check", False)),
        compare=scalar("compare", "compare", None),
        plot=bool(flag("plot") or file_cfg.get("plot", False)),
        fixture=flag("fixture"),
        oracle_only=bool(flag("oracle_only")))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (DomainError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    try:
        if cfg.command is Command.Transmission:
            return cmd_transmission(cfg)
        if cfg.command is Command.Spectrum:
            return cmd_spectrum(cfg)
        return cmd_verify(cfg)
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    except NoFoldError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_FOLD
    except SolverError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
