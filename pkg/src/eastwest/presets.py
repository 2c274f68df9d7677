"""Shipped experiment configs at desk scale.

Sizes are reduced from the reference figures where the full-size run does
not fit a workstation: sparse evolution stays at ``L <= 20`` and dense
spectral work at ``L <= 16``. Each description states the substitution.
"""

from __future__ import annotations

import copy

_PX = lambda L, g: {"type": "px_g", "L": L, "g": g}  # noqa: E731

PRESETS: dict[str, dict] = {
    "fig1c": {
        "description": "chiral wavepacket (9, 4, -pi/2), g=0, L=20 (reference size L=24)",
        "model": _PX(20, 0),
        "state": {"type": "wavepacket", "m0": 9, "R": 4, "k": "-pi/2"},
        "run": {"kind": "evolve", "t_max": 10.0, "dt": 0.1},
    },
    "fig1c_g10": {
        "description": "chiral wavepacket (9, 4, -pi/2), g=10, L=20",
        "model": _PX(20, 10),
        "state": {"type": "wavepacket", "m0": 9, "R": 4, "k": "-pi/2"},
        "run": {"kind": "evolve", "t_max": 10.0, "dt": 0.1},
    },
    "fig1d": {
        "description": "scarred state (2 pi/L, pi/2), g=0, L=20 (reference size L=24)",
        "model": _PX(20, 0),
        "state": {"type": "scar", "q": "2*pi/L", "k": "pi/2"},
        "run": {"kind": "evolve", "t_max": 20.0, "dt": 0.1},
    },
    "fig1e": {
        "description": "two counter-propagating packets (11, 4, -+pi/2) on 10-site halves, g=10, L=20",
        "model": _PX(20, 10),
        "state": {
            "type": "two_packet",
            "a": {"m0": 11, "R": 4, "k": "-pi/2"},
            "b": {"m0": 11, "R": 4, "k": "pi/2"},
        },
        "run": {"kind": "evolve", "t_max": 10.0, "dt": 0.1},
    },
    "fig1f": {
        "description": "scarred state (2 pi/L, pi/2), g=10, L=20",
        "model": _PX(20, 10),
        "state": {"type": "scar", "q": "2*pi/L", "k": "pi/2"},
        "run": {"kind": "evolve", "t_max": 20.0, "dt": 0.1},
    },
    "fig2b": {
        "description": "predicted vs simulated leakage of every momentum state, g in {0, 4, 10}, L=16 (reference size L=20)",
        "model": _PX(16, 0),
        "run": {
            "kind": "leakage",
            "tau": [0.25, 0.5, 0.75, 1.0],
            "g_values": [0.0, 4.0, 10.0],
        },
    },
    "fig2c": {
        "description": "fidelity of the momentum state k = pi/2 + pi/L, g=0, L=20 (reference size L=24)",
        "model": _PX(20, 0),
        "state": {"type": "momentum", "n": 11},
        "run": {"kind": "evolve", "t_max": 20.0, "dt": 0.1, "entropy": False},
    },
    "fig3a_ssh": {
        "description": "projected dimerized spectrum with full-space variances, t1=0.6, t2=1.4, L=18",
        "model": {"type": "ssh", "L": 18, "t1": 0.6, "t2": 1.4},
        "run": {"kind": "tb_spectrum"},
    },
    "fig3a_edge": {
        "description": "right edge mode of the dimerized chain, g=10, L=18",
        "model": {"type": "ssh", "L": 18, "t1": 0.6, "t2": 1.4, "g": 10},
        "state": {"type": "edge", "side": "right"},
        "run": {"kind": "evolve", "t_max": 20.0, "dt": 0.5, "entropy": False},
    },
    "fig4b_bloch": {
        "description": "Bloch oscillation of packet (17, 6, pi/2), F=0.6, g=10, L=16 (reference (21, 6, pi/2) at L=20)",
        "model": {"type": "bloch", "L": 16, "F": 0.6, "g": 10},
        "state": {"type": "wavepacket", "m0": 17, "R": 6, "k": "pi/2"},
        "run": {"kind": "evolve", "t_max": 45.0, "dt": 0.25},
    },
    "figS1a": {
        "description": "mean level-spacing ratio in the most symmetric sectors, L=12..16, g in {0, 1}",
        "model": _PX(12, 0),
        "run": {"kind": "r_table", "L_values": [12, 14, 16], "g_values": [0.0, 1.0]},
    },
    "figS1b": {
        "description": "unfolded spacing histogram, sector k=0, i=+1, p=0, g=0, L=16 (reference size L=22)",
        "model": _PX(16, 0),
        "run": {"kind": "spectrum", "sectors": [{"k": 0, "i": 1, "p": 0}], "histogram": True},
    },
    "figS1c": {
        "description": "half-chain entropy of eigenstates, sector k=0, i=+1, p=0, g=0, L=14 (reference size L=18)",
        "model": _PX(14, 0),
        "run": {"kind": "spectrum", "sectors": [{"k": 0, "i": 1, "p": 0}], "eigen_entropy": True},
    },
    "figEM_overlap": {
        "description": "overlap of |pi/2 + pi/L> with eigenstates of its momentum sector, g=10, L=12 (reference size L=16)",
        "model": _PX(12, 10),
        "state": {"type": "momentum", "n": 7},
        "run": {"kind": "spectrum", "sectors": [{"k": 5}], "overlap": True, "eigen_entropy": True},
    },
    "figEM_scar": {
        "description": "fidelity revivals of the scarred state (2 pi/L, pi/2), g=10, L=16",
        "model": _PX(16, 10),
        "state": {"type": "scar", "q": "2*pi/L", "k": "pi/2"},
        "run": {"kind": "evolve", "t_max": 20.0, "dt": 0.05, "entropy": False},
    },
    "figEM_random": {
        "description": "reference random product state (first 16 of 24 sites) under g=0, L=16",
        "model": _PX(16, 0),
        "state": {"type": "fixture", "name": "random_product_L24", "sites": 16},
        "run": {"kind": "evolve", "t_max": 10.0, "dt": 0.05, "entropy": False},
    },
    "droplet": {
        "description": "droplet of |+pi/2> on 8 of 16 sites embedded in the vacuum, g=0",
        "model": _PX(16, 0),
        "state": {"type": "droplet", "start": 1, "length": 8, "sign": 1},
        "run": {"kind": "evolve", "t_max": 10.0, "dt": 0.1},
    },
    "blockade_alpha2": {
        "description": "chiral wavepacket in the blockade-range-2 model, g=10, L=16",
        "model": {"type": "blockade", "L": 16, "alpha": 2, "g": 10},
        "state": {"type": "wavepacket", "m0": 9, "R": 4, "k": "-pi/2"},
        "run": {"kind": "evolve", "t_max": 6.0, "dt": 0.1},
    },
}


def list_presets() -> list[tuple[str, str]]:
    return [(name, PRESETS[name]["description"]) for name in sorted(PRESETS)]


def get_preset(name: str) -> dict:
    try:
        cfg = copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None
    cfg["name"] = name
    return cfg
