"""Command-line entry point.

Every subcommand resolves a RunConfig from ``--config`` plus flags, runs one
analysis and writes JSON and/or CSV.  Outputs embed the schema version and
the resolved configuration (output location excluded, so runs written to
different directories compare byte for byte).
"""

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, is_dataclass

import numpy as np

from . import SCHEMA_VERSION
from . import corpus as _corpus
from .dynamics import classify_motion, equilibria, lazy_table, potential_derivative, potential_profile
from .errors import InstantonError, InvalidParameters, UnchartedStructure
from .geometry import InstantonParams, signature_at
from .horizons import block_chart, delta_r_roots, discriminants, negative_root_count, theta_horizons
from .integrals import MotionConstants, TangentState, constants_from_state
from .integrator import (
    CONSTANT_NAMES,
    HAMILTONIAN_MODE,
    MINO_MODE,
    SAMPLE_COLUMNS,
    IntegratorOptions,
    integrate,
)
from .verification import SUITES, run_all

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4

PARAM_KEYS = ("M", "a", "e", "Lambda")
CONST_KEYS = ("q_mass", "E", "Lz", "Q", "K", "q_charge", "state")
STATE_KEYS = ("r", "theta", "phi", "t", "vr", "vtheta", "vphi", "vt")
GRID_KEYS = ("r_min", "r_max", "n_r", "theta_min", "theta_max", "n_theta")
TRACE_KEYS = ("state", "q_charge", "corpus_seed", "mode", "rel_tol", "abs_tol", "s_span", "max_steps")

MODES = {"mino": MINO_MODE, "hamiltonian": HAMILTONIAN_MODE, MINO_MODE: MINO_MODE, HAMILTONIAN_MODE: HAMILTONIAN_MODE}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: InstantonParams
    options: dict = field(default_factory=dict)
    seed: int = 0
    format: str = "json"
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": None if self.params is None else self.params.to_dict(),
            "options": {k: self.options[k] for k in sorted(self.options)},
            "seed": self.seed,
            "format": self.format,
        }


@dataclass
class Result:
    summary: dict
    table: tuple = None  # (columns, rows)
    exit_code: int = EXIT_OK


# ---------------------------------------------------------------------------
# serialization


def jsonable(obj):
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    return obj


def dump_json(doc):
    return json.dumps(jsonable(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def dump_csv(columns, rows, config):
    """CSV with two '#' preamble lines (schema version, config) then one header row."""
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    buf.write("# config: " + json.dumps(jsonable(config.to_dict()), sort_keys=False, allow_nan=False) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def render(cmd_name, config, result):
    """{filename: text} for the result in the configured format."""
    doc = {"schema_version": SCHEMA_VERSION, "config": config.to_dict(), "result": result.summary}
    stem = cmd_name.replace("-", "_")
    if config.format == "csv":
        if result.table is None:
            raise ConfigError(f"{cmd_name} has no tabular output; use --format json")
        files = {f"{stem}.csv": dump_csv(*result.table, config)}
        if result.summary:
            files[f"{stem}.json"] = dump_json(doc)
        return files
    if result.table is not None:
        cols, rows = result.table
        doc["rows"] = [dict(zip(cols, r)) for r in rows]
    return {f"{stem}.json": dump_json(doc)}


# ---------------------------------------------------------------------------
# config resolution


def _finite(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name} must be a finite number, got {value!r}")
    return float(value)


def _state_from(obj):
    if not isinstance(obj, dict):
        raise ConfigError("state must be an object")
    bad = set(obj) - set(STATE_KEYS)
    if bad:
        raise ConfigError(f"unknown state keys: {sorted(bad)}")
    for k in ("r", "theta"):
        if k not in obj:
            raise ConfigError(f"state needs {k}")
    return {k: _finite(f"state.{k}", obj[k]) for k in STATE_KEYS if k in obj}


def constants_from_options(params, opts):
    """MotionConstants from a state, or from (q_mass, E, Lz) with Q or K."""
    qc = opts.get("q_charge", 0.0)
    if "state" in opts:
        return constants_from_state(params, qc, TangentState(**opts["state"]))
    missing = [k for k in ("q_mass", "E", "Lz") if k not in opts]
    if missing:
        raise ConfigError(f"constants need {missing} (or a state)")
    if "Q" in opts and "K" in opts:
        raise ConfigError("give Q or K, not both")
    if "K" in opts:
        return MotionConstants.from_EL_K(params, opts["q_mass"], opts["E"], opts["Lz"], opts["K"], qc)
    return MotionConstants.from_EL_Q(params, opts["q_mass"], opts["E"], opts["Lz"], opts.get("Q", 0.0), qc)


def _validate_options(command, opts):
    allowed = set(COMMANDS[command].keys)
    bad = set(opts) - allowed
    if bad:
        raise ConfigError(f"unknown keys for {command}: {sorted(bad)}")
    out = {}
    for k, v in opts.items():
        if k == "state":
            out[k] = _state_from(v)
        elif k in ("mode", "corpus_seed", "sweep_command"):
            if not isinstance(v, str):
                raise ConfigError(f"{k} must be a string")
            out[k] = v
        elif k in ("n_r", "n_theta", "max_steps", "n_samples", "workers"):
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"{k} must be a positive integer")
            out[k] = v
        elif k == "suites":
            names = {s[0] for s in SUITES}
            if not isinstance(v, list) or any(x not in names for x in v):
                raise ConfigError(f"suites must be a list drawn from {sorted(names)}")
            out[k] = list(v)
        elif k == "diagnostics":
            if not isinstance(v, bool):
                raise ConfigError("diagnostics must be true or false")
            out[k] = v
        elif k == "lattice":
            if not isinstance(v, dict) or not v:
                raise ConfigError("lattice must be a nonempty object of lists")
            lat = {}
            for name, vals in v.items():
                if name not in PARAM_KEYS:
                    raise ConfigError(f"lattice key {name!r} is not a parameter")
                if not isinstance(vals, list) or not vals:
                    raise ConfigError(f"lattice[{name!r}] must be a nonempty list")
                lat[name] = [_finite(f"lattice.{name}", x) for x in vals]
            out[k] = lat
        else:
            out[k] = _finite(k, v)
    if "mode" in out:
        if out["mode"] not in MODES:
            raise ConfigError(f"mode must be one of {sorted(MODES)}")
        out["mode"] = MODES[out["mode"]]
    for lo, hi in (("r_min", "r_max"), ("theta_min", "theta_max")):
        if lo in out and hi in out and not out[lo] < out[hi]:
            raise ConfigError(f"{lo} must be < {hi}")
    if command == "sweep":
        sub = out.get("sweep_command")
        if sub is None or sub not in COMMANDS or sub == "sweep":
            raise ConfigError("sweep needs sweep_command naming another subcommand")
        if "lattice" not in out:
            raise ConfigError("sweep needs a lattice")
        sub_keys = set(COMMANDS[sub].keys)
        extra = set(out) - sub_keys - {"sweep_command", "lattice", "workers"}
        if extra:
            raise ConfigError(f"keys not accepted by {sub}: {sorted(extra)}")
    return out


def resolve_config(args):
    raw = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
    raw = dict(raw)
    for k in PARAM_KEYS:
        v = getattr(args, f"p_{k}", None)
        if v is not None:
            raw[k] = v
    for k, v in _flag_options(args).items():
        raw[k] = v
    missing = [k for k in PARAM_KEYS if k not in raw]
    if args.command == "verify" and len(missing) == len(PARAM_KEYS):
        # verify runs on the bundled corpus and its own random draws
        params = None
    elif missing:
        raise ConfigError(f"missing parameters {missing}")
    else:
        try:
            params = InstantonParams(*(_finite(k, raw.pop(k)) for k in PARAM_KEYS))
        except InvalidParameters as exc:
            raise ConfigError(str(exc)) from exc
        if args.command == "verify":
            raise ConfigError("verify takes no parameters; it runs on the bundled corpus")
    seed = raw.pop("seed", None)
    if args.seed is not None:
        seed = args.seed
    seed = 0 if seed is None else seed
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    fmt = args.format or COMMANDS[args.command].default_format
    opts = _validate_options(args.command, raw)
    return RunConfig(args.command, params, opts, seed, fmt)


def _flag_options(args):
    out = {}
    for k in GRID_KEYS + ("q_mass", "E", "Lz", "Q", "K", "q_charge", "rel_tol", "abs_tol", "s_span",
                          "max_steps", "n_samples", "theta", "mode", "corpus_seed", "workers"):
        v = getattr(args, k, None)
        if v is not None:
            out[k] = v
    st = getattr(args, "state", None)
    if st is not None:
        out["state"] = dict(zip(("r", "theta", "vr", "vtheta", "vphi", "vt"), st))
    if getattr(args, "suite", None):
        out["suites"] = list(args.suite)
    if getattr(args, "no_diagnostics", False):
        out["diagnostics"] = False
    if getattr(args, "sweep_command", None):
        out["sweep_command"] = args.sweep_command
    if getattr(args, "lattice", None):
        lat = {}
        for item in args.lattice:
            name, _, vals = item.partition("=")
            try:
                lat[name] = [float(x) for x in vals.split(",") if x]
            except ValueError as exc:
                raise ConfigError(f"bad lattice entry {item!r}") from exc
        out["lattice"] = lat
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_roots(cfg):
    p = cfg.params
    rs = delta_r_roots(p)
    summary = {
        "tag": rs.tag,
        "roots": list(rs.roots),
        "multiplicities": list(rs.multiplicities),
        "complex_roots": [[z.real, z.imag] for z in rs.complex_roots],
        "negative_root_count": negative_root_count(p),
    }
    if p.L != 0.0:
        d = discriminants(p)
        summary["discriminants"] = {
            "D1": d.D1, "D2": d.D2, "D3": d.D3,
            "predicted_real_count": d.predicted_real_count, "near_degenerate": d.near_degenerate,
        }
    try:
        summary["labels"] = [b.label for b in block_chart(p).blocks]
    except UnchartedStructure as exc:
        summary["labels"] = None
        summary["note"] = str(exc)
    rows = [(i, r, m) for i, (r, m) in enumerate(zip(rs.roots, rs.multiplicities))]
    return Result(summary, (("index", "r", "multiplicity"), rows))


def _blocks_doc(chart):
    return [{"label": b.label, "lo": b.lo, "hi": b.hi} for b in chart.blocks]


def _th_doc(th):
    return {"present": th.present, "a_crit": th.a_crit, "theta_minus": th.theta_minus, "theta_plus": th.theta_plus}


def cmd_blocks(cfg):
    try:
        chart = block_chart(cfg.params)
    except UnchartedStructure as exc:
        chart = exc.chart
        return Result({"blocks": _blocks_doc(chart), "roots": list(chart.roots.roots), "note": chart.note,
                       "theta_horizons": _th_doc(chart.theta_horizons), "error": "UnchartedStructure"},
                      (("label", "lo", "hi"), [(b.label, b.lo, b.hi) for b in chart.blocks]), EXIT_NUMERIC)
    return Result({"blocks": _blocks_doc(chart), "roots": list(chart.roots.roots), "note": chart.note,
                   "theta_horizons": _th_doc(chart.theta_horizons)},
                  (("label", "lo", "hi"), [(b.label, b.lo, b.hi) for b in chart.blocks]))


def cmd_theta_horizons(cfg):
    return Result(_th_doc(theta_horizons(cfg.params)))


def cmd_signature_map(cfg):
    o = cfg.options
    rs = np.linspace(o.get("r_min", -5.0), o.get("r_max", 5.0), o.get("n_r", 101))
    ths = np.linspace(o.get("theta_min", 0.01), o.get("theta_max", math.pi - 0.01), o.get("n_theta", 101))
    rows, counts = [], {}
    for r in rs:
        for th in ths:
            r, th = float(r), float(th)
            try:
                rep = signature_at(cfg.params, r, th)
                row = (r, th, *rep.eigenvalues, rep.klass, rep.inside_omega, rep.inside_cone)
                klass = rep.klass
            except InstantonError as exc:
                klass = type(exc).__name__
                row = (r, th, None, None, None, None, klass, None, None)
            counts[klass] = counts.get(klass, 0) + 1
            rows.append(row)
    cols = ("r", "theta", "lambda1", "lambda2", "lambda3", "lambda4", "class", "sigma_negative", "delta_theta_negative")
    return Result({"class_counts": dict(sorted(counts.items()))}, (cols, rows))


def cmd_potential(cfg):
    p = cfg.params
    c = constants_from_options(p, cfg.options)
    prof = potential_profile(p, c, n_samples=cfg.options.get("n_samples", 257))
    rows = [(th, v, potential_derivative(p, c, th)) for th, v in prof.samples]
    summary = {
        "constants": c.to_dict(),
        "roots": list(prof.roots),
        "extrema": [{"theta": t, "V": v, "kind": k} for t, v, k in prof.extrema],
        "equilibria": [{"theta": t, "Q": v, "stability": s} for t, v, s in equilibria(p, c)],
        "pole_limits": list(prof.pole_limits),
        "cone_limits": None if prof.cone_limits is None else [list(x) for x in prof.cone_limits],
        "domains": [list(d) for d in prof.domains],
    }
    return Result(summary, (("theta", "V", "dV_dtheta"), rows))


def cmd_classify(cfg):
    p = cfg.params
    c = constants_from_options(p, cfg.options)
    classes = classify_motion(p, c)
    return Result({
        "constants": c.to_dict(),
        "classes": [{"tag": k.tag, "theta_range": list(k.theta_range), "witnesses": k.witnesses,
                     "ref_bullet": k.ref_bullet} for k in classes],
    })


def cmd_lazy_table(cfg):
    rows = lazy_table(cfg.params, cfg.options.get("theta", math.pi / 2))
    cols = ("cell", "qe_sign", "r", "theta", "inside_omega", "r2_lt_a2", "t_sign", "phi_sign",
            "ref_t_sign", "ref_phi_sign", "t_match", "phi_match")
    mism = [f"{r['cell']}/{r['qe_sign']:+d}" for r in rows if r["t_match"] is False or r["phi_match"] is False]
    return Result({"mismatches": mism, "compared": sum(1 for r in rows if r["t_match"] is not None)},
                  (cols, [tuple(r[k] for k in cols) for r in rows]))


def _trace_inputs(cfg):
    o = cfg.options
    if "corpus_seed" in o:
        if "state" in o:
            raise ConfigError("give state or corpus_seed, not both")
        reg_name, _, seed_name = o["corpus_seed"].partition("/")
        try:
            reg = _corpus.regime(reg_name)
            sd = next(s for s in reg.seeds if s.name == seed_name)
        except (KeyError, StopIteration) as exc:
            raise ConfigError(f"unknown corpus seed {o['corpus_seed']!r}") from exc
        if reg.params != cfg.params:
            raise ConfigError(f"corpus seed {o['corpus_seed']!r} belongs to params {reg.params.to_dict()}")
        return sd.state, o.get("q_charge", sd.q_charge)
    if "state" not in o:
        raise ConfigError("trace needs a state or corpus_seed")
    return TangentState(**o["state"]), o.get("q_charge", 0.0)


def cmd_trace(cfg):
    o = cfg.options
    init, qc = _trace_inputs(cfg)
    opts = IntegratorOptions(
        mode=o.get("mode", MINO_MODE),
        rel_tol=o.get("rel_tol", 1e-10),
        abs_tol=o.get("abs_tol", 1e-12),
        s_span=o.get("s_span", 1000.0),
        max_steps=o.get("max_steps", 500_000),
    )
    rec = integrate(cfg.params, qc, init, opts)
    summary = {
        "status": rec.status,
        "mode": rec.mode,
        "constants": rec.constants.to_dict(),
        "max_drift": rec.max_drift(),
        "final_state": asdict(rec.final_state),
        "final_s": rec.final_s,
        "accepted_steps": len(rec.samples) - 1,
        "rhs_evaluations": rec.nfev,
        "events": [asdict(ev) for ev in rec.events],
    }
    if rec.constraint_residuals is not None:
        summary["max_constraint_residual"] = {
            "radial": float(np.max(rec.constraint_residuals[:, 0])),
            "polar": float(np.max(rec.constraint_residuals[:, 1])),
        }
    cols = SAMPLE_COLUMNS + tuple(f"drift_{k}" for k in CONSTANT_NAMES)
    rows = [tuple(float(x) for x in s) + tuple(float(x) for x in d) for s, d in zip(rec.samples, rec.drift)]
    code = EXIT_OK if rec.status == "ok" else EXIT_NUMERIC
    return Result(summary, (cols, rows), code)


def cmd_verify(cfg):
    report, _ = run_all(cfg.seed, cfg.options.get("suites"), cfg.options.get("diagnostics", True))
    code = EXIT_OK if report["summary"]["suites_failed"] == 0 else EXIT_VERIFY
    return Result(report, None, code)


def _sweep_point(job):
    sub, base, values, fmt, seed, sub_opts = job
    params = InstantonParams(**{**base, **values})
    cfg = RunConfig(sub, params, dict(sub_opts), seed, fmt)
    try:
        res = COMMANDS[sub].handler(cfg)
        return values, render(sub, cfg, res), res.exit_code, None
    except (InstantonError, ConfigError) as exc:
        err = {"schema_version": SCHEMA_VERSION, "config": cfg.to_dict(),
               "error": {"type": type(exc).__name__, "message": str(exc)}}
        return values, {f"{sub.replace('-', '_')}.json": dump_json(err)}, EXIT_NUMERIC, type(exc).__name__


def cmd_sweep(cfg, out_dir=None):
    if out_dir is None:
        raise ConfigError("sweep needs --out")
    o = cfg.options
    sub = o["sweep_command"]
    sub_opts = {k: v for k, v in o.items() if k not in ("sweep_command", "lattice", "workers")}
    names = sorted(o["lattice"])
    grid = [dict(zip(names, combo)) for combo in itertools.product(*(o["lattice"][n] for n in names))]
    base = cfg.params.to_dict()
    jobs = [(sub, base, vals, cfg.format, cfg.seed, sub_opts) for vals in grid]
    workers = min(o.get("workers", os.cpu_count() or 1), max(1, len(jobs)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_sweep_point, jobs))
    index = []
    for i, (vals, files, code, err) in enumerate(results):
        sub_dir = f"point_{i:04d}"
        os.makedirs(os.path.join(out_dir, sub_dir), exist_ok=True)
        for name, text in sorted(files.items()):
            _write(os.path.join(out_dir, sub_dir, name), text)
        index.append({"index": i, "lattice_values": vals, "params": {**base, **vals},
                      "files": [f"{sub_dir}/{n}" for n in sorted(files)], "exit_code": code, "error": err})
    cfg_doc = cfg.to_dict()
    # worker count changes nothing in the outputs, so it stays out of the record
    cfg_doc["options"].pop("workers", None)
    doc = {"schema_version": SCHEMA_VERSION, "config": cfg_doc, "points": index}
    _write(os.path.join(out_dir, "index.json"), dump_json(doc))
    worst = max((r[2] for r in results), default=EXIT_OK)
    return worst


@dataclass(frozen=True)
class Command:
    handler: object
    keys: tuple
    default_format: str
    help: str


COMMANDS = {
    "roots": Command(cmd_roots, (), "json", "real roots of Delta_r with discriminants"),
    "blocks": Command(cmd_blocks, (), "json", "radial block chart"),
    "theta-horizons": Command(cmd_theta_horizons, (), "json", "critical spin and theta-horizons"),
    "signature-map": Command(cmd_signature_map, GRID_KEYS, "csv", "metric signature over an (r, theta) grid"),
    "potential": Command(cmd_potential, CONST_KEYS + ("n_samples",), "csv", "colatitude potential profile"),
    "classify": Command(cmd_classify, CONST_KEYS, "json", "colatitude orbit classes"),
    "lazy-table": Command(cmd_lazy_table, ("theta",), "json", "lazy-particle sign table"),
    "trace": Command(cmd_trace, TRACE_KEYS, "csv", "integrate one geodesic"),
    "sweep": Command(None, (), "json", "map a subcommand over a parameter lattice"),
    "verify": Command(cmd_verify, ("suites", "diagnostics"), "json", "run the invariant suites"),
}
# sweep accepts the keys of whichever subcommand it maps
COMMANDS["sweep"] = Command(
    None,
    tuple(sorted({k for c in COMMANDS.values() for k in c.keys} | {"sweep_command", "lattice", "workers"})),
    "json",
    COMMANDS["sweep"].help,
)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    ap = argparse.ArgumentParser(prog="kninstanton", description="Geodesic analysis of KN(A)dS instantons.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output directory (stdout when omitted)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--seed", type=int)
    for k in PARAM_KEYS:
        common.add_argument(f"--{k}", dest=f"p_{k}", type=float)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, cmd in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=cmd.help)
        keys = set(cmd.keys)
        if keys & set(GRID_KEYS):
            for k in GRID_KEYS:
                sp.add_argument(f"--{k.replace('_', '-')}", dest=k, type=int if k.startswith("n_") else float)
        if keys & {"q_mass", "E", "Lz"}:
            for k in ("q_mass", "E", "Lz", "Q", "K"):
                sp.add_argument(f"--{k}", dest=k, type=float)
        if "q_charge" in keys:
            sp.add_argument("--q-charge", dest="q_charge", type=float)
        if "state" in keys:
            sp.add_argument("--state", type=float, nargs=6, metavar=("R", "THETA", "VR", "VTHETA", "VPHI", "VT"))
        if "n_samples" in keys:
            sp.add_argument("--n-samples", dest="n_samples", type=int)
        if "theta" in keys:
            sp.add_argument("--theta", type=float)
        if "mode" in keys:
            sp.add_argument("--mode", choices=sorted(MODES))
            sp.add_argument("--rel-tol", dest="rel_tol", type=float)
            sp.add_argument("--abs-tol", dest="abs_tol", type=float)
            sp.add_argument("--s-span", dest="s_span", type=float)
            sp.add_argument("--max-steps", dest="max_steps", type=int)
            sp.add_argument("--corpus-seed", dest="corpus_seed")
        if name == "verify":
            sp.add_argument("--suite", action="append", choices=[s[0] for s in SUITES])
            sp.add_argument("--no-diagnostics", action="store_true")
        if name == "sweep":
            sp.add_argument("--command", dest="sweep_command", choices=[c for c in COMMANDS if c != "sweep"])
            sp.add_argument("--lattice", action="append", metavar="KEY=V1,V2,...")
            sp.add_argument("--workers", type=int)
    return ap


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(files, out_dir):
    if out_dir is None:
        for name in sorted(files):
            sys.stdout.write(files[name])
        return
    os.makedirs(out_dir, exist_ok=True)
    for name, text in sorted(files.items()):
        _write(os.path.join(out_dir, name), text)


def _print_verify(report):
    for s in report["suites"]:
        tag = "PASS" if s["passed"] else "FAIL"
        print(f"[{tag}] criterion {s['criterion']}: {s['suite']} "
              f"({sum(c['passed'] for c in s['checks'])}/{len(s['checks'])} checks)", file=sys.stderr)
    sm = report["summary"]
    print(f"suites passed {sm['suites_passed']}, failed {sm['suites_failed']}; "
          f"checks passed {sm['checks_passed']}, failed {sm['checks_failed']}", file=sys.stderr)


def run(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.command == "sweep":
            return cmd_sweep(cfg, args.out)
        res = COMMANDS[cfg.command].handler(cfg)
        files = render(cfg.command, cfg, res)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidParameters as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstantonError as exc:
        print(f"numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(files, args.out)
    if cfg.command == "verify":
        _print_verify(res.summary)
    return res.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
