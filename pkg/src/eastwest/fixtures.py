"""Reference product states.

Single-site states are ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``.
The shipped L=24 state is stored as plain text (``cos_theta phi`` per row);
sampling uses numpy's ``default_rng`` (PCG64), whose stream is stable
across platforms for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from importlib import resources
from pathlib import Path

import numpy as np

FIXTURE_FILES = {"random_product_L24": "random_product_L24.txt"}


@dataclass(frozen=True)
class ProductStateSpec:
    cos_theta: tuple
    phi: tuple

    def __post_init__(self):
        c = np.asarray(self.cos_theta, dtype=float)
        p = np.asarray(self.phi, dtype=float)
        if c.shape != p.shape or c.ndim != 1:
            raise ValueError("cos_theta and phi must be 1-d and of equal length")
        if np.any(np.abs(c) > 1):
            raise ValueError("|cos theta| must be <= 1")
        if np.any((p < 0) | (p >= 2 * np.pi)):
            raise ValueError("phi must lie in [0, 2 pi)")
        object.__setattr__(self, "cos_theta", tuple(float(x) for x in c))
        object.__setattr__(self, "phi", tuple(float(x) for x in p))

    @property
    def L(self) -> int:
        return len(self.cos_theta)


def site_state(cos_theta: float, phi: float) -> np.ndarray:
    # half-angle identities avoid computing theta itself
    c = np.sqrt(max(0.0, 0.5 * (1 + cos_theta)))
    s = np.sqrt(max(0.0, 0.5 * (1 - cos_theta)))
    return np.array([c, np.exp(1j * phi) * s])


def build_product_state(spec: ProductStateSpec, L: int | None = None) -> np.ndarray:
    """Full ``2**L`` vector, site 1 as the most significant bit."""
    if L is not None and L != spec.L:
        raise ValueError(f"spec has {spec.L} sites, expected {L}")
    sites = [site_state(c, p) for c, p in zip(spec.cos_theta, spec.phi)]
    v = reduce(np.kron, sites)
    return v / np.linalg.norm(v)


def sample_product_spec(L: int, seed: int) -> ProductStateSpec:
    """``cos theta ~ U[-1, 1]``, ``phi ~ U[0, 2 pi)`` per site (uniform on the Bloch sphere)."""
    rng = np.random.default_rng(seed)
    cos_theta = rng.uniform(-1.0, 1.0, L)
    phi = rng.uniform(0.0, 2 * np.pi, L)
    return ProductStateSpec(tuple(cos_theta), tuple(phi))


def sample_product_state(L: int, seed: int) -> tuple[ProductStateSpec, np.ndarray]:
    spec = sample_product_spec(L, seed)
    return spec, build_product_state(spec)


def fixture_path(name: str = "random_product_L24") -> Path:
    try:
        fname = FIXTURE_FILES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {sorted(FIXTURE_FILES)}") from None
    return Path(str(resources.files("eastwest") / "data" / fname))


def read_product_spec(path) -> tuple[ProductStateSpec, list[str]]:
    """Parse a ``cos_theta phi`` table; returns the spec and its comment header."""
    header, rows = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            header.append(line)
        elif line.strip():
            rows.append([float(x) for x in line.split()])
    arr = np.array(rows)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    return ProductStateSpec(tuple(arr[:, 0]), tuple(arr[:, 1])), header


def format_product_spec(spec: ProductStateSpec, header=()) -> str:
    lines = list(header)
    lines += [f"{c:.8f} {p:.8f}" for c, p in zip(spec.cos_theta, spec.phi)]
    return "\n".join(lines) + "\n"


def load_fixture(name: str = "random_product_L24") -> ProductStateSpec:
    return read_product_spec(fixture_path(name))[0]


def fixture_state(name: str = "random_product_L24", sites: int | None = None) -> np.ndarray:
    """Product state of a shipped fixture, optionally truncated to its first ``sites`` sites."""
    spec = load_fixture(name)
    if sites is not None:
        if not 1 <= sites <= spec.L:
            raise ValueError(f"fixture has {spec.L} sites")
        spec = ProductStateSpec(spec.cos_theta[:sites], spec.phi[:sites])
    return build_product_state(spec)
