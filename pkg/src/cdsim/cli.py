"""Command-line entry point: ``cdsim <command> [flags]``.

Commands
--------
spectrum     closed-form and numeric eigenvalues side by side
evolve       populations, atom coherence and concurrence versus time
sweep-time   concurrence versus time
sweep-grid   concurrence over an (n0, gamma) grid at a fixed time
figures      the four built-in figure scenarios (fig2.csv ... fig5.csv)

Any flag may also come from ``--config FILE``, a flat ``key=value`` file using
the flag names without dashes (``#`` starts a comment).  Flags on the command
line win over the file.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import initial_state, propagate_expm, reduce_amplitudes, Propagator
from .entanglement import concurrence_many
from .experiments import FIGURE_ASSUMPTIONS, TimeGrid, figure_scenarios, sweep_grid, sweep_time, uniform_axis
from .model import SystemParams, analytic_spectrum, build_basis, build_hamiltonian, numeric_eig
from .output import format_number, write_csv, write_meta, write_svg, write_table

COMMANDS = ("spectrum", "evolve", "sweep-time", "sweep-grid", "figures")
CROSS_CHECK_TOL = 1e-10


class CLIError(Exception):
    """Bad command line or config; the message is a single line."""


def _int(text) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise ValueError(f"not an integer: {text!r}") from None


def _float(text) -> float:
    try:
        value = float(str(text).strip())
    except ValueError:
        raise ValueError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def _bool(text) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# flag name -> (converter, default)
OPTIONS = {
    "omega": (_float, 1.0),
    "g": (_float, None),
    "gamma": (_float, None),
    "n0": (_int, None),
    "t-start": (_float, 0.0),
    "t-end": (_float, 20.0),
    "samples": (_int, 2001),
    "gamma-min": (_float, 0.0),
    "gamma-max": (_float, 1.0),
    "gamma-steps": (_int, 101),
    "n0-min": (_int, 0),
    "n0-max": (_int, 30),
    "t-fixed": (_float, 4.0),
    "out": (str, "."),
    "svg": (_bool, False),
    "precision": (_int, 12),
}

REQUIRED = {
    "spectrum": ("n0", "g", "gamma"),
    "evolve": ("n0", "g", "gamma"),
    "sweep-time": ("n0", "g", "gamma"),
    "sweep-grid": (),
    "figures": (),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: SystemParams | None
    grid: TimeGrid
    n0_axis: tuple[int, ...] = ()
    gamma_axis: tuple[float, ...] = ()
    t_fixed: float = 4.0
    output: Path = Path(".")
    emit_svg: bool = False
    precision: int = 12
    omega: float = 1.0
    g: float | None = None
    raw: dict = field(default_factory=dict, compare=False)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cdsim", description=__doc__.splitlines()[0], add_help=True)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--version", action="version", version=f"cdsim {__version__}")
    for name in OPTIONS:
        if name == "svg":
            p.add_argument("--svg", action="store_const", const="true", default=None)
        else:
            p.add_argument(f"--{name}", default=None, metavar=name.upper().replace("-", "_"))
    return p


def read_config(path) -> dict:
    """Parse a flat ``key=value`` file into raw strings keyed by flag name."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CLIError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CLIError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in OPTIONS:
            raise CLIError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def parse_args(argv) -> RunConfig:
    """Turn an argument list into a validated :class:`RunConfig`.

    Raises :class:`CLIError` with a one-line message on any problem.
    """
    ns = _build_parser().parse_args(list(argv))
    raw = read_config(ns.config) if ns.config else {}
    for name in OPTIONS:
        flag_value = getattr(ns, name.replace("-", "_"))
        if flag_value is not None:
            raw[name] = flag_value
    values = {}
    for name, (convert, default) in OPTIONS.items():
        if name in raw:
            try:
                values[name] = convert(raw[name])
            except ValueError as exc:
                raise CLIError(f"--{name}: {exc}") from None
        else:
            values[name] = default
    for name in REQUIRED[ns.command]:
        if name not in raw:
            raise CLIError(f"missing required --{name} for {ns.command}")

    if not 6 <= values["precision"] <= 17:
        raise CLIError(f"--precision must be in [6, 17], got {values['precision']}")
    try:
        grid = TimeGrid(values["t-start"], values["t-end"], values["samples"])
        params = None
        if ns.command in ("spectrum", "evolve", "sweep-time"):
            params = SystemParams(values["omega"], values["g"], values["gamma"], values["n0"])
        n0_axis = gamma_axis = ()
        if ns.command == "sweep-grid":
            lo, hi = values["n0-min"], values["n0-max"]
            if lo < 0 or hi < lo:
                raise ValueError(f"need 0 <= n0-min <= n0-max, got {lo}..{hi}")
            steps = values["gamma-steps"]
            if steps < 1:
                raise ValueError(f"gamma-steps must be >= 1, got {steps}")
            gmin, gmax = values["gamma-min"], values["gamma-max"]
            if gmin < 0 or gmax < gmin:
                raise ValueError(f"need 0 <= gamma-min <= gamma-max, got {gmin}..{gmax}")
            n0_axis = tuple(range(lo, hi + 1))
            gamma_axis = tuple(uniform_axis(gmin, gmax, steps).tolist())
            if values["g"] is not None and values["g"] < 0:
                raise ValueError(f"g must be non-negative, got {values['g']}")
    except (TypeError, ValueError) as exc:
        raise CLIError(str(exc)) from None

    g = values["g"]
    if g is None and ns.command in ("sweep-grid", "figures"):
        g = FIGURE_ASSUMPTIONS["fig5"]["g"]
    return RunConfig(
        command=ns.command,
        params=params,
        grid=grid,
        n0_axis=n0_axis,
        gamma_axis=gamma_axis,
        t_fixed=values["t-fixed"],
        output=Path(values["out"]),
        emit_svg=values["svg"],
        precision=values["precision"],
        omega=values["omega"],
        g=g,
        raw=raw,
    )


def _emit(result, out: Path, stem: str, config: RunConfig, x_axis=None, title=""):
    write_csv(result, out / f"{stem}.csv", config.precision)
    write_meta(result, out / f"{stem}.json")
    if config.emit_svg:
        write_svg(result, out / f"{stem}.svg", x_axis=x_axis, title=title)


def _run_spectrum(config: RunConfig, out: Path) -> int:
    p = config.params
    numeric = numeric_eig(build_hamiltonian(p)).eigenvalues
    if p.n0 >= 2:
        analytic = analytic_spectrum(p).eigenvalues
        diff = np.abs(analytic - numeric)
        rows = [(i, a, b, d) for i, (a, b, d) in enumerate(zip(analytic, numeric, diff))]
        worst = float(diff.max())
    else:
        rows = [(i, "", b, "") for i, b in enumerate(numeric)]
        worst = None
    write_table(out / "spectrum.csv", ["index", "analytic", "numeric", "abs_diff"], rows, config.precision)
    for row in rows:
        print(",".join(v if isinstance(v, str) else format_number(v, config.precision) for v in row))
    if worst is None:
        print(f"sector dim {len(numeric)}: no closed form, numeric eigenvalues only")
        return 0
    print(f"max |analytic - numeric| = {worst:.3e}")
    if worst > CROSS_CHECK_TOL:
        print(f"error: spectrum cross-check exceeded {CROSS_CHECK_TOL:g}", file=sys.stderr)
        return 1
    return 0


def _run_evolve(config: RunConfig, out: Path) -> int:
    p = config.params
    basis = build_basis(p)
    h = build_hamiltonian(p)
    psi0 = initial_state(p)
    times = config.grid.times
    amps = Propagator(h).amplitudes(psi0, times)
    rho = reduce_amplitudes(basis, amps)
    conc = concurrence_many(rho)
    header = ["t"] + [f"pop_{k.atom1}{k.atom2}{k.photons}" for k in basis.labels]
    header += ["coh_eg_ge_re", "coh_eg_ge_im", "concurrence"]
    pops = np.abs(amps) ** 2
    rows = [
        (t, *pops[i], rho[i, 1, 2].real, rho[i, 1, 2].imag, conc[i]) for i, t in enumerate(times)
    ]
    write_table(out / "evolve.csv", header, rows, config.precision)
    check = np.abs(propagate_expm(h, psi0.amplitudes, times[-1]) - amps[-1]).max()
    print(f"spectral vs expm propagator at t={times[-1]:g}: {check:.3e}")
    if check > CROSS_CHECK_TOL:
        print(f"error: propagator cross-check exceeded {CROSS_CHECK_TOL:g}", file=sys.stderr)
        return 1
    return 0


def run(config: RunConfig) -> int:
    """Execute a configuration; returns the process exit status."""
    out = config.output
    try:
        out.mkdir(parents=True, exist_ok=True)
        if config.command == "spectrum":
            return _run_spectrum(config, out)
        if config.command == "evolve":
            return _run_evolve(config, out)
        if config.command == "sweep-time":
            result = sweep_time(config.params, config.grid)
            _emit(result, out, "sweep_time", config)
        elif config.command == "sweep-grid":
            result = sweep_grid(config.n0_axis, config.gamma_axis, g=config.g, omega=config.omega, t=config.t_fixed)
            _emit(result, out, "sweep_grid", config, x_axis="n0")
        elif config.command == "figures":
            results = figure_scenarios(omega=config.omega, grid=config.grid, fig5_g=config.g)
            for name, result in results.items():
                _emit(result, out, name, config, x_axis="n0" if name == "fig5" else "t", title=name)
        return 0
    except Exception as exc:  # any module error ends the run with one line on stderr
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
