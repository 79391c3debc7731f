"""Command-line frontend: model construction, phase computations, sweeps,
invariance harnesses, and CSV/JSON emission.

Exit codes: 0 success, 1 invariance violation (test harnesses),
2 gap closure or other chain failure, 3 invalid flags or sweep spec.
Output is deterministic for a fixed configuration and seed, and files are
written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .adiabatic import DriveSpec, evolve, geometric_phase_from_trajectory
from .errors import BandphaseError, GapClosure
from .manybody import FilledBandSpec, filled_band_phase, slater_cycle_oracle
from .models import (
    CELL_PERIODIC,
    LATTICE_PERIODIC,
    ContinuumModel,
    KitaevModel,
    SshModel,
    band_count,
    ssh_obc_hamiltonian,
    translate,
    zero_mode_count,
)
from .numerics import angle_distance, herm_eig_n, wrap_angle
from .phase import (
    PERIODIC_GAUGE,
    RAW_EIGENVECTOR,
    apply_gauge,
    bargmann_invariant,
    build_chain,
    zak_phase,
)

CSV_HEADER = "param,gamma_g,gamma_z_raw,gamma_z_periodic,min_gap,min_overlap,M,status"
SWEEP_PARAMS = ("v", "w", "b", "eps", "J", "Delta", "V0")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_GAP = 2
EXIT_USAGE = 3


class CliError(Exception):
    """Invalid flags or sweep specification (exit code 3)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.9g}"


def _round9(x: float) -> float:
    return float(f"{float(x):.9g}")


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise CliError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in stripped.split("=", 1))
                values[key.replace("-", "_")] = value
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc
    return values


def _add_common_flags(parser: _Parser):
    parser.add_argument("--model", choices=["ssh", "kitaev", "continuum"],
                        default="ssh")
    parser.add_argument("--v", type=float, default=1.0)
    parser.add_argument("--w", type=float, default=2.0)
    parser.add_argument("--b", type=float, default=0.3)
    parser.add_argument("--a", type=float, default=1.0)
    parser.add_argument("--r-alpha", dest="r_alpha", type=float, default=0.0)
    parser.add_argument("--convention", choices=["cell", "lattice"], default="cell")
    parser.add_argument("--eps", type=float, default=1.0)
    parser.add_argument("--J", dest="J", type=float, default=1.0)
    parser.add_argument("--Delta", dest="Delta", type=float, default=1.0)
    parser.add_argument("--v0", type=float, default=1.0)
    parser.add_argument("--nmax", type=int, default=16)
    parser.add_argument("--fourier", action="append", default=None,
                        metavar="g:re:im",
                        help="extra potential component, repeatable")
    parser.add_argument("--band", default="lower",
                        help="'lower', 'upper', or a band index")
    parser.add_argument("--M", type=int, default=4096)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--config", default=None, help="flat key = value file")
    parser.add_argument("--workers", type=int, default=0,
                        help="sweep parallelism (0 = available cores)")


def build_model(ns):
    if ns.model == "ssh":
        convention = CELL_PERIODIC if ns.convention == "cell" else LATTICE_PERIODIC
        # --b and --r-alpha are given in units of the lattice constant
        return SshModel(v=ns.v, w=ns.w, b=ns.b * ns.a,
                        a=ns.a, r_alpha=ns.r_alpha * ns.a, convention=convention)
    if ns.model == "kitaev":
        return KitaevModel(eps=ns.eps, J=ns.J, Delta=ns.Delta, a=ns.a)
    fourier = []
    if ns.v0:
        fourier.append((1, 0.5 * ns.v0))
    for spec in ns.fourier or ():
        parts = spec.split(":")
        if len(parts) != 3:
            raise CliError(f"bad --fourier component {spec!r}, expected g:re:im")
        try:
            g, re, im = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise CliError(f"bad --fourier component {spec!r}: {exc}") from exc
        fourier.append((g, complex(re, im)))
    return ContinuumModel(fourier=tuple(fourier), a=ns.a, n_max=ns.nmax)


def _band_index(ns, model) -> int:
    nb = band_count(model)
    if ns.band == "lower":
        return 0
    if ns.band == "upper":
        return nb - 1
    try:
        idx = int(ns.band)
    except ValueError as exc:
        raise CliError(f"bad --band value {ns.band!r}") from exc
    if not 0 <= idx < nb:
        raise CliError(f"band index {idx} outside 0..{nb - 1}")
    return idx


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".bandphase-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_rows(rows: list[dict], ns) -> None:
    if ns.format == "csv":
        lines = [f"# bandphase {__version__}", CSV_HEADER]
        for row in rows:
            lines.append(",".join([
                str(row.get("param", "")),
                _fmt(row.get("gamma_g")),
                _fmt(row.get("gamma_z_raw")),
                _fmt(row.get("gamma_z_periodic")),
                _fmt(row.get("min_gap")),
                _fmt(row.get("min_overlap")),
                str(row.get("M", "")),
                str(row.get("status", "ok")),
            ]))
        _emit("\n".join(lines) + "\n", ns.out)
    else:
        payload = {"version": __version__, "rows": []}
        for row in rows:
            entry = {"param": row.get("param", ""), "status": row.get("status", "ok"),
                     "M": row.get("M")}
            for key in ("gamma_g", "gamma_z_raw", "gamma_z_periodic",
                        "min_gap", "min_overlap"):
                value = row.get(key)
                entry[key] = None if value is None else _round9(value)
            for key in ("gamma_g", "gamma_z_raw", "gamma_z_periodic"):
                value = row.get(key)
                entry[key + "_pi"] = None if value is None else _round9(value / math.pi)
            payload["rows"].append(entry)
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", ns.out)


def _emit_error(ns, exc: Exception) -> None:
    if getattr(ns, "format", "csv") == "json":
        payload = {"version": __version__,
                   "error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", None)
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def _phase_record(model, band, M, param="") -> dict:
    chain = build_chain(model, band, M)
    gamma_g = wrap_angle(float(np.angle(bargmann_invariant(chain))))
    z_raw = zak_phase(chain, RAW_EIGENVECTOR)
    z_per = zak_phase(chain, PERIODIC_GAUGE)
    status = "ok"
    if chain.flags:
        status = "ok;" + ";".join(sorted(chain.flags))
    return {
        "param": param,
        "gamma_g": gamma_g.value,
        "gamma_z_raw": z_raw.gamma.value,
        "gamma_z_periodic": z_per.gamma.value,
        "min_gap": chain.min_gap,
        "min_overlap": chain.min_overlap,
        "M": M,
        "status": status,
    }


def cmd_phase(ns) -> int:
    model = build_model(ns)
    band = _band_index(ns, model)
    try:
        record = _phase_record(model, band, ns.M, param=ns.model)
    except BandphaseError as exc:
        _emit_error(ns, exc)
        return EXIT_GAP
    _emit_rows([record], ns)
    return EXIT_OK


def _model_with_param(ns, name: str, value: float):
    patched = argparse.Namespace(**vars(ns))
    if name == "V0":
        patched.v0 = value
    else:
        setattr(patched, name, value)
    return build_model(patched)


def _sweep_point(payload):
    ns = argparse.Namespace(**payload["ns"])
    value = payload["value"]
    try:
        model = _model_with_param(ns, payload["name"], value)
        band = _band_index(ns, model)
        return _phase_record(model, band, ns.M, param=_fmt(value))
    except BandphaseError as exc:
        status = {
            "GapClosure": "GAP_CLOSURE",
            "ZeroOverlap": "ZERO_OVERLAP",
            "OverlapTooSmall": "OVERLAP_TOO_SMALL",
        }.get(type(exc).__name__, type(exc).__name__)
        return {"param": _fmt(value), "M": ns.M, "status": status}


def cmd_sweep(ns) -> int:
    if ns.param not in SWEEP_PARAMS:
        raise CliError(f"unknown sweep parameter {ns.param!r}; "
                       f"choose from {', '.join(SWEEP_PARAMS)}")
    if ns.steps < 2:
        raise CliError("sweep needs at least 2 steps")
    if not ns.start < ns.stop:
        raise CliError("sweep range must satisfy from < to")
    values = [ns.start + i * (ns.stop - ns.start) / (ns.steps - 1)
              for i in range(ns.steps)]
    payloads = [{"ns": vars(ns), "name": ns.param, "value": v} for v in values]
    workers = ns.workers if ns.workers > 0 else (os.cpu_count() or 1)
    if workers == 1 or len(payloads) < 4:
        rows = [_sweep_point(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    _emit_rows(rows, ns)
    return EXIT_OK


def cmd_gauge_fuzz(ns) -> int:
    if ns.trials < 1:
        raise CliError("need at least one fuzz trial")
    model = build_model(ns)
    band = _band_index(ns, model)
    try:
        chain = build_chain(model, band, ns.M)
        base_g = wrap_angle(float(np.angle(bargmann_invariant(chain))))
        base_z = zak_phase(chain, RAW_EIGENVECTOR).gamma
    except BandphaseError as exc:
        _emit_error(ns, exc)
        return EXIT_GAP
    max_dg = 0.0
    max_dz = 0.0
    for trial in range(ns.trials):
        rng = np.random.default_rng(ns.seed + trial)
        lam = math.pi - rng.uniform(0.0, 2.0 * math.pi, size=ns.M + 1)
        gauged = apply_gauge(chain, lam)
        g = wrap_angle(float(np.angle(bargmann_invariant(gauged))))
        z = zak_phase(gauged, RAW_EIGENVECTOR).gamma
        predicted = wrap_angle(base_z.value + lam[0] - lam[-1])
        max_dg = max(max_dg, angle_distance(g, base_g))
        max_dz = max(max_dz, angle_distance(z, predicted))
    ok = max_dg < 1e-9 and max_dz < 1e-9
    summary = {
        "trials": ns.trials,
        "max_dgamma_g": max_dg,
        "max_zak_shift_residual": max_dz,
        "verdict": "PASS" if ok else "FAIL",
    }
    if ns.format == "json":
        summary["version"] = __version__
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", ns.out)
    else:
        _emit(f"# bandphase {__version__}\n"
              f"trials={ns.trials} max_dgamma_g={max_dg:.3e} "
              f"max_zak_shift_residual={max_dz:.3e} verdict={summary['verdict']}\n",
              ns.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_translate_test(ns) -> int:
    model = build_model(ns)
    if isinstance(model, KitaevModel):
        raise CliError("translation is undefined for the Kitaev model")
    if isinstance(model, SshModel) and model.convention != CELL_PERIODIC:
        raise CliError("translate-test needs the cell-periodic convention")
    band = _band_index(ns, model)
    if ns.d:
        d_values = [d * model.a for d in ns.d]
    else:
        rng = np.random.default_rng(ns.seed)
        d_values = list(model.a * rng.uniform(0.0, 1.0, size=ns.trials))
    try:
        chain = build_chain(model, band, ns.M)
        base_g = wrap_angle(float(np.angle(bargmann_invariant(chain))))
        base_z = zak_phase(chain, PERIODIC_GAUGE).gamma
    except BandphaseError as exc:
        _emit_error(ns, exc)
        return EXIT_GAP
    lines = [f"# bandphase {__version__}", "d,dgamma_g,zak_shift_residual"]
    ok = True
    for d in d_values:
        shifted = translate(model, d)
        chain_d = build_chain(shifted, band, ns.M)
        g = wrap_angle(float(np.angle(bargmann_invariant(chain_d))))
        z = zak_phase(chain_d, PERIODIC_GAUGE).gamma
        dg = angle_distance(g, base_g)
        expected = wrap_angle(base_z.value + 2.0 * math.pi * d / model.a)
        dz = angle_distance(z, expected)
        ok = ok and dg < 1e-6 and dz < 1e-6
        lines.append(f"{_fmt(d)},{dg:.3e},{dz:.3e}")
    lines.append(f"verdict={'PASS' if ok else 'FAIL'}")
    _emit("\n".join(lines) + "\n", ns.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_manybody(ns) -> int:
    model = build_model(ns)
    band = _band_index(ns, model)
    if ns.N < 1:
        raise CliError("need at least one particle")
    try:
        chain = build_chain(model, band, ns.M)
        gamma_g = wrap_angle(float(np.angle(bargmann_invariant(chain))))
        formula = filled_band_phase(gamma_g, ns.N)
        oracle = None
        difference = None
        if ns.N <= 8:
            spec = FilledBandSpec(model=model, band=band, n_particles=ns.N)
            oracle = slater_cycle_oracle(spec)
            difference = angle_distance(oracle, formula)
    except BandphaseError as exc:
        _emit_error(ns, exc)
        return EXIT_GAP
    ok = difference is None or difference < 1e-6
    lines = [
        f"# bandphase {__version__}",
        "N,gamma_g,filled_band_formula,slater_oracle,difference",
        ",".join([
            str(ns.N), _fmt(gamma_g.value), _fmt(formula.value),
            _fmt(None if oracle is None else oracle.value),
            "" if difference is None else f"{difference:.3e}",
        ]),
        f"verdict={'PASS' if ok else 'FAIL'}",
    ]
    _emit("\n".join(lines) + "\n", ns.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_adiabatic(ns) -> int:
    model = build_model(ns)
    band = _band_index(ns, model)
    sweep_times = ns.T or [200.0, 400.0, 800.0]
    try:
        reference = wrap_angle(float(np.angle(bargmann_invariant(
            build_chain(model, band, ns.M)))))
        deviations = []
        rows = []
        for T in sweep_times:
            steps = max(1000, int(ns.steps_per_unit * T))
            drive = DriveSpec(model=model, band=band, T=T, steps=steps)
            result = geometric_phase_from_trajectory(evolve(drive))
            dev = angle_distance(result.gamma, reference)
            deviations.append(dev)
            rows.append(f"{_fmt(T)},{_fmt(result.gamma.value)},"
                        f"{_fmt(reference.value)},{dev:.3e}")
    except BandphaseError as exc:
        _emit_error(ns, exc)
        return EXIT_GAP
    nonincreasing = all(deviations[i + 1] <= deviations[i] + 1e-12
                        for i in range(len(deviations) - 1))
    ok = nonincreasing and deviations[-1] < 0.05
    lines = [f"# bandphase {__version__}", "T,extracted,reference,deviation"]
    lines.extend(rows)
    lines.append(f"verdict={'PASS' if ok else 'FAIL'}")
    _emit("\n".join(lines) + "\n", ns.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_obc(ns) -> int:
    model = build_model(ns)
    if not isinstance(model, SshModel):
        raise CliError("obc is defined for the SSH model")
    if not 1 <= ns.cells <= 256:
        raise CliError("cells must lie in 1..256")
    spectrum = np.array([pair.energy for pair in
                         herm_eig_n(ssh_obc_hamiltonian(model, ns.cells))])
    threshold = 1e-3 * max(model.v, model.w)
    count = zero_mode_count(spectrum, threshold)
    try:
        record = _phase_record(model, 0, ns.M, param="ssh")
        pbc_gamma = _fmt(record["gamma_g"])
    except BandphaseError:
        pbc_gamma = ""
    lines = [
        f"# bandphase {__version__}",
        f"cells={ns.cells} threshold={threshold:.9g}",
        f"zero_modes={count}",
        f"smallest_abs_energies={','.join(_fmt(e) for e in sorted(np.abs(spectrum))[:4])}",
        f"pbc_gamma_g={pbc_gamma}",
    ]
    _emit("\n".join(lines) + "\n", ns.out)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="bandphase",
                     description="Geometric phases of 1D periodic lattice models")
    parser.add_argument("--version", action="version",
                        version=f"bandphase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        _add_common_flags(p)
        p.set_defaults(func=func)
        return p

    add("phase", cmd_phase, help="single-point band phases")

    p = add("sweep", cmd_sweep, help="phase diagram along one parameter")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = add("gauge-fuzz", cmd_gauge_fuzz, help="random-gauge invariance harness")
    p.add_argument("--trials", type=int, default=100)

    p = add("translate-test", cmd_translate_test,
            help="spatial-translation invariance harness")
    p.add_argument("--d", action="append", type=float, default=None,
                   help="translation in units of a, repeatable")
    p.add_argument("--trials", type=int, default=20)

    p = add("manybody", cmd_manybody, help="filled-band phase vs Slater oracle")
    p.add_argument("--N", type=int, required=True)

    p = add("adiabatic", cmd_adiabatic, help="direct-evolution cross-validation")
    p.add_argument("--T", action="append", type=float, default=None,
                   help="sweep time, repeatable")
    p.add_argument("--steps-per-unit", dest="steps_per_unit", type=float,
                   default=2000.0)

    p = add("obc", cmd_obc, help="open-boundary spectrum and zero modes")
    p.add_argument("--cells", type=int, default=40)

    p = add("continuum", cmd_phase, help="alias of 'phase --model continuum'")
    p.set_defaults(model="continuum")
    return parser


def _apply_config(ns, argv) -> None:
    """Overlay config-file values; explicit flags keep precedence."""
    values = _read_config(ns.config)
    explicit = set()
    for token in argv:
        if token.startswith("--"):
            explicit.add(token[2:].split("=", 1)[0].replace("-", "_"))
    for key, raw in values.items():
        if key in explicit:
            continue
        if not hasattr(ns, key):
            raise CliError(f"unknown config key {key!r}")
        current = getattr(ns, key)
        try:
            if isinstance(current, bool):
                value = raw.lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                value = int(raw)
            elif isinstance(current, float):
                value = float(raw)
            elif isinstance(current, list):
                value = [float(part) for part in raw.split(",")]
            else:
                value = raw
        except ValueError as exc:
            raise CliError(f"bad config value {key} = {raw!r}") from exc
        setattr(ns, key, value)


def main(argv=None) -> int:
    parser = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = parser.parse_args(argv)
        if ns.config:
            _apply_config(ns, argv)
        return ns.func(ns)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
