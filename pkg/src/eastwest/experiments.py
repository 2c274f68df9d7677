"""Config-driven experiments: schema, builders and runners.

A config has four blocks::

    model:  {type: px_g, L: 16, g: 10}
    state:  {type: wavepacket, m0: 9, R: 4, k: -pi/2}
    run:    {kind: evolve, t_max: 6, dt: 0.1}
    output: {dir: out/fig1c}

Numeric fields accept plain numbers or short arithmetic strings in ``pi``
and ``L`` (``"-pi/2"``, ``"2*pi/L"``).
"""

from __future__ import annotations

import ast
import logging
import operator
from pathlib import Path

import jsonschema
import numpy as np

from . import io
from .core import ChainGeometry, OPEN, PERIODIC, vacuum
from .dynamics import EvolveConfig, evolve
from .fixtures import ProductStateSpec, build_product_state, fixture_state, sample_product_spec
from .hamiltonians import build_model
from .leakage import p_predict
from .spectral import (
    DEFAULT_MEMORY_LIMIT,
    ResourceGuardError,
    SectorSpec,
    eigen_entropy_scatter,
    overlap_spectrum,
    r_statistics,
    sector_project,
    unfold_and_histogram,
)
from .tb import (
    ScarParams,
    TBRing,
    WavepacketParams,
    droplet_state,
    energy_variance,
    momentum_index,
    momentum_state,
    scarred_state,
    ssh_edge_modes,
    ssh_projected,
    two_packet_state,
    wavepacket,
)

log = logging.getLogger(__name__)

NUMBER = {"anyOf": [{"type": "number"}, {"type": "string"}]}
INT = {"type": "integer"}
PACKET = {
    "type": "object",
    "properties": {"m0": NUMBER, "R": INT, "k": NUMBER},
    "required": ["m0", "R", "k"],
    "additionalProperties": False,
}
SECTOR = {
    "type": "object",
    "properties": {
        "k": {"type": ["integer", "null"]},
        "i": {"enum": [1, -1, None]},
        "p": {"type": ["integer", "null"]},
    },
    "additionalProperties": False,
}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "type": {"enum": ["px", "px_g", "ssh", "bloch", "blockade"]},
        "L": {"type": "integer", "minimum": 2, "maximum": 30},
        "boundary": {"enum": [PERIODIC, OPEN]},
        "g": NUMBER,
        "t1": NUMBER,
        "t2": NUMBER,
        "F": NUMBER,
        "alpha": {"type": "integer", "minimum": 1},
    },
    "required": ["type", "L"],
    "additionalProperties": False,
}

STATE_SCHEMA = {
    "type": "object",
    "properties": {
        "type": {
            "enum": ["vacuum", "A", "B", "momentum", "wavepacket", "scar", "two_packet",
                     "edge", "droplet", "product", "fixture"]
        },
        "m": INT,
        "n": INT,
        "k": NUMBER,
        "m0": NUMBER,
        "R": INT,
        "q": NUMBER,
        "a": PACKET,
        "b": PACKET,
        "side": {"enum": ["left", "right"]},
        "start": INT,
        "length": INT,
        "sign": {"enum": [1, -1]},
        "cos_theta": {"type": "array", "items": {"type": "number"}},
        "phi": {"type": "array", "items": {"type": "number"}},
        "name": {"type": "string"},
        "sites": INT,
    },
    "required": ["type"],
    "additionalProperties": False,
}

RUN_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["evolve", "leakage", "spectrum", "r_table", "tb_spectrum"]},
        "t_max": {"type": "number", "minimum": 0},
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "tolerance": {"type": "number", "exclusiveMinimum": 0, "maximum": 1e-4},
        "krylov_dim": {"type": "integer", "minimum": 2},
        "entropy": {"type": "boolean"},
        "tau": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "g_values": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "n_values": {"type": "array", "items": {"type": "integer"}},
        "sectors": {"type": "array", "items": SECTOR},
        "histogram": {"type": "boolean"},
        "eigen_entropy": {"type": "boolean"},
        "overlap": {"type": "boolean"},
        "L_values": {"type": "array", "items": {"type": "integer", "minimum": 4}},
        "memory_gb": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "model": MODEL_SCHEMA,
        "state": STATE_SCHEMA,
        "run": RUN_SCHEMA,
        "output": {
            "type": "object",
            "properties": {"dir": {"type": "string"}},
            "additionalProperties": False,
        },
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["model", "run"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    """Config failed schema or semantic validation."""


_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def number(value, L: int | None = None) -> float:
    """Evaluate a number or a small arithmetic expression in ``pi`` and ``L``."""
    if isinstance(value, (int, float)):
        return float(value)
    names = {"pi": np.pi}
    if L is not None:
        names["L"] = L

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in names:
            return names[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ConfigError(f"unsupported expression {value!r}")

    try:
        return float(ev(ast.parse(str(value), mode="eval")))
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {value!r}") from exc


def validate_config(cfg: dict) -> dict:
    """Schema check plus the cross-field rules the schema cannot express."""
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    model, run = cfg["model"], cfg["run"]
    L = model["L"]
    kind = run["kind"]
    if (kind == "evolve" or run.get("overlap")) and "state" not in cfg:
        raise ConfigError("this run needs a state block")
    if kind == "evolve":
        for key in ("t_max", "dt"):
            if key not in run:
                raise ConfigError(f"run/{key} is required for evolve")
    if kind == "leakage" and "tau" not in run:
        raise ConfigError("run/tau is required for leakage")
    if model["type"] == "ssh" and model.get("boundary", OPEN) != OPEN:
        raise ConfigError("ssh model needs open boundaries")
    if model["type"] == "ssh":
        for key in ("t1", "t2"):
            if key not in model:
                raise ConfigError(f"model/{key} is required for ssh")
    if model["type"] == "bloch" and "F" not in model:
        raise ConfigError("model/F is required for bloch")
    for key in ("g", "t1", "t2", "F"):
        if key in model:
            number(model[key], L)
    state = cfg.get("state")
    if state is not None:
        need = {
            "A": ["m"], "B": ["m"], "momentum": [], "wavepacket": ["m0", "R", "k"],
            "scar": ["q", "k"], "two_packet": ["a", "b"], "edge": ["side"],
            "droplet": ["start", "length"], "product": [], "fixture": [],
        }.get(state["type"], [])
        missing = [k for k in need if k not in state]
        if missing:
            raise ConfigError(f"state/{state['type']} is missing {missing}")
        if state["type"] == "momentum" and "n" not in state and "k" not in state:
            raise ConfigError("momentum state needs n or k")
        if state["type"] == "edge" and model["type"] != "ssh":
            raise ConfigError("edge states need the ssh model")
    return cfg


def geometry(cfg: dict) -> ChainGeometry:
    m = cfg["model"]
    default = OPEN if m["type"] == "ssh" else PERIODIC
    return ChainGeometry(m["L"], m.get("boundary", default))


def model_params(cfg: dict, g: float | None = None) -> dict:
    m = cfg["model"]
    L = m["L"]
    params = {k: number(m[k], L) for k in ("g", "t1", "t2", "F") if k in m}
    if "alpha" in m:
        params["alpha"] = m["alpha"]
    if g is not None:
        params["g"] = g
    return params


def build_hamiltonian(cfg: dict, g: float | None = None):
    model = cfg["model"]["type"]
    return build_model(model, geometry(cfg), **model_params(cfg, g))


def ring_for(cfg: dict) -> TBRing:
    """Defect ring matching the model (blockade models use longer defects)."""
    geom = geometry(cfg)
    alpha = cfg["model"].get("alpha", 1) if cfg["model"]["type"] == "blockade" else 1
    return TBRing(geom.L, geom.boundary, alpha)


def build_state(cfg: dict, seed: int | None = None) -> np.ndarray:
    s = cfg["state"]
    L = cfg["model"]["L"]
    ring = ring_for(cfg)
    kind = s["type"]
    if kind == "vacuum":
        return vacuum(L)
    if kind == "A":
        return ring.a_state(s["m"])
    if kind == "B":
        return ring.b_state(s["m"])
    if kind == "momentum":
        n = s["n"] if "n" in s else momentum_index(L, number(s["k"], L))
        return momentum_state(ring, n)
    if kind == "wavepacket":
        return wavepacket(ring, WavepacketParams(number(s["m0"], L), s["R"], number(s["k"], L)))
    if kind == "scar":
        return scarred_state(ring, ScarParams(number(s["q"], L), number(s["k"], L)))
    if kind == "two_packet":
        a, b = (WavepacketParams(number(p["m0"], L), p["R"], number(p["k"], L)) for p in (s["a"], s["b"]))
        return two_packet_state(a, b, L)
    if kind == "edge":
        params = model_params(cfg)
        left, right = ssh_edge_modes(L, params["t1"], params["t2"])
        return left if s["side"] == "left" else right
    if kind == "droplet":
        return droplet_state(L, s["start"], s["length"], s.get("sign", 1))
    if kind == "product":
        if "cos_theta" in s:
            spec = ProductStateSpec(tuple(s["cos_theta"]), tuple(s["phi"]))
        else:
            spec = sample_product_spec(L, seed if seed is not None else cfg.get("seed", 0))
        return build_product_state(spec, L)
    if kind == "fixture":
        return fixture_state(s.get("name", "random_product_L24"), s.get("sites", L))
    raise ConfigError(f"unknown state type {kind!r}")


def estimate_evolve_bytes(L: int, krylov_dim: int, nnz_per_row: float) -> float:
    dim = float(1 << L)
    return dim * (16 * (krylov_dim + 8) + 12 * nnz_per_row)


def _nnz_per_row(cfg: dict) -> float:
    m = cfg["model"]
    alpha_terms = {"px": 2, "px_g": 3, "ssh": 3, "bloch": 4, "blockade": 3}
    return alpha_terms[m["type"]] * m["L"] / 2 + 1


def _memory_limit(cfg: dict) -> float:
    gb = cfg["run"].get("memory_gb")
    return DEFAULT_MEMORY_LIMIT if gb is None else gb * 1024**3


def _sector(d: dict) -> SectorSpec:
    return SectorSpec(d.get("k"), d.get("i"), d.get("p"))


def _trajectory_comments(cfg):
    m = cfg["model"]
    return [io.BIT_CONVENTION, f"model {m['type']} L={m['L']}"]


def run_experiment(cfg: dict, out_dir, seed: int | None = None) -> list[Path]:
    """Execute a validated config; returns the written data files."""
    validate_config(cfg)
    out_dir = Path(out_dir)
    kind = cfg["run"]["kind"]
    runner = {
        "evolve": _run_evolve,
        "leakage": _run_leakage,
        "spectrum": _run_spectrum,
        "r_table": _run_r_table,
        "tb_spectrum": _run_tb_spectrum,
    }[kind]
    return runner(cfg, out_dir, seed)


def _run_evolve(cfg, out_dir, seed):
    run = cfg["run"]
    L = cfg["model"]["L"]
    kdim = run.get("krylov_dim", 40)
    need = estimate_evolve_bytes(L, kdim, _nnz_per_row(cfg))
    if need > _memory_limit(cfg):
        raise ResourceGuardError(f"evolution at L={L} needs ~{need / 1e9:.1f} GB")
    geom = geometry(cfg)
    H = build_hamiltonian(cfg)
    psi0 = build_state(cfg, seed)
    ecfg = EvolveConfig(
        t_max=run["t_max"], dt_record=run["dt"], tolerance=run.get("tolerance", 1e-10),
        krylov_dim=kdim, entropy=run.get("entropy", True),
    )
    tr = evolve(H, psi0, ecfg, ring_for(cfg), periodic=geom.periodic)
    path = io.write_csv(out_dir / "trajectory.csv", tr.as_columns(), _trajectory_comments(cfg))
    io.write_sidecar(path, cfg, seed=seed, tolerance=ecfg.tolerance, krylov_dim=kdim,
                     max_norm_drift=float(np.max(np.abs(tr.norm - 1))))
    return [path]


def _run_leakage(cfg, out_dir, seed):
    """Predicted vs simulated leakage for momentum states, one row per (g, n, tau)."""
    run = cfg["run"]
    L = cfg["model"]["L"]
    tau = np.asarray(run["tau"], dtype=float)
    g_values = run.get("g_values", [model_params(cfg).get("g", 0.0)])
    n_values = run.get("n_values", list(range(1, L)))
    ring = TBRing(L)
    rows = {"tau": [], "p_predicted": [], "p_numeric": [], "g": [], "label": []}
    dt = float(np.min(np.diff(np.concatenate(([0.0], np.unique(tau)))))) if tau.size else 1.0
    for g in g_values:
        H = build_hamiltonian(cfg, g=g)
        for n in n_values:
            psi0 = momentum_state(ring, n)
            pred = p_predict(psi0, L, g, tau)
            ecfg = EvolveConfig(t_max=float(tau.max()), dt_record=dt, entropy=False)
            tr = evolve(H, psi0, ecfg, ring)
            numeric = np.interp(tau, tr.times, tr.leakage)
            for t, pp, pn in zip(tau, pred.p, numeric):
                rows["tau"].append(t)
                rows["p_predicted"].append(pp)
                rows["p_numeric"].append(pn)
                rows["g"].append(g)
                rows["label"].append(f"n={n}")
    path = io.write_csv(out_dir / "leakage.csv", rows, [f"momentum states k_n = pi n / {L}"])
    io.write_sidecar(path, cfg, seed=seed)
    return [path]


def _run_spectrum(cfg, out_dir, seed):
    run = cfg["run"]
    geom = geometry(cfg)
    H = build_hamiltonian(cfg)
    limit = _memory_limit(cfg)
    sectors = [_sector(d) for d in run.get("sectors", [{}])]
    files = []
    levels = {"sector": [], "E": []}
    table = {"sector": [], "mean_r": [], "n_levels": []}
    for spec in sectors:
        block, basis = sector_project(H, geom, spec)
        if 32.0 * block.shape[0] ** 2 > limit:
            raise ResourceGuardError(f"sector {spec.label} too large for the memory limit")
        E = np.linalg.eigvalsh(block)
        levels["sector"] += [spec.label] * E.size
        levels["E"] += list(E)
        mean_r = r_statistics(E)[0]
        table["sector"].append(spec.label)
        table["mean_r"].append(mean_r)
        table["n_levels"].append(E.size)
        if run.get("histogram"):
            s, dens, edges = unfold_and_histogram(E)
            p = io.write_csv(out_dir / f"spacings_{_slug(spec)}.csv",
                             {"s_low": edges[:-1], "s_high": edges[1:], "density": dens})
            io.write_sidecar(p, cfg, sector=spec.label, mean_spacing=float(s.mean()))
            files.append(p)
        if run.get("eigen_entropy"):
            Es, S = eigen_entropy_scatter(H, geom, spec, memory_limit=limit)
            p = io.write_csv(out_dir / f"eigen_entropy_{_slug(spec)}.csv", {"E": Es, "S": S})
            io.write_sidecar(p, cfg, sector=spec.label)
            files.append(p)
        if run.get("overlap"):
            Eo, w = overlap_spectrum(build_state(cfg, seed), H, geom, spec, memory_limit=limit)
            p = io.write_csv(out_dir / f"overlap_{_slug(spec)}.csv", {"E": Eo, "overlap": w})
            io.write_sidecar(p, cfg, sector=spec.label)
            files.append(p)
    for name, data in (("levels.csv", levels), ("mean_r.csv", table)):
        p = io.write_csv(out_dir / name, data)
        io.write_sidecar(p, cfg, seed=seed)
        files.append(p)
    return files


def _slug(spec: SectorSpec) -> str:
    return spec.label.replace(",", "_").replace("=", "").replace("-", "m") or "full"


def _run_r_table(cfg, out_dir, seed):
    """Mean ``r`` in the most symmetric sector for several sizes and couplings."""
    run = cfg["run"]
    g_values = run.get("g_values", [0.0])
    rows = {"L": [], "g": [], "sector": [], "mean_r": [], "n_levels": []}
    for L in run.get("L_values", [cfg["model"]["L"]]):
        sub = {**cfg, "model": {**cfg["model"], "L": L}}
        geom = geometry(sub)
        for g in g_values:
            H = build_hamiltonian(sub, g=g)
            specs = [SectorSpec(0, 1, None)]
            if g == 0 and L % 2 == 0:
                specs.append(SectorSpec(0, 1, 0))
            for spec in specs:
                block, _ = sector_project(H, geom, spec)
                E = np.linalg.eigvalsh(block)
                rows["L"].append(L)
                rows["g"].append(g)
                rows["sector"].append(spec.label)
                rows["mean_r"].append(r_statistics(E)[0])
                rows["n_levels"].append(E.size)
    p = io.write_csv(out_dir / "mean_r.csv", rows)
    io.write_sidecar(p, cfg, seed=seed)
    return [p]


def _run_tb_spectrum(cfg, out_dir, seed):
    """Eigenpairs of the projected Hamiltonian with their full-space energy variance."""
    geom = geometry(cfg)
    L = geom.L
    H = build_hamiltonian(cfg)
    ring = ring_for(cfg)
    if cfg["model"]["type"] == "ssh":
        p = model_params(cfg)
        h = ssh_projected(L, p["t1"], p["t2"])
    else:
        V = ring.isometry
        h = (V.T @ H @ V).toarray()
    E, U = np.linalg.eigh(h)
    var = np.array([energy_variance(ring.embed(U[:, j]), H) for j in range(E.size)])
    path = io.write_csv(out_dir / "tb_spectrum.csv", {"E": E, "variance": var})
    io.write_sidecar(path, cfg, seed=seed)
    return [path]
