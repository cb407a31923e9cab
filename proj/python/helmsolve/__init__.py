# SPDX-License-Identifier: Apache-2.0
"""Python interface to the helmsolve C++ core."""

import json

import numpy as np

from ._helmsolve import (
    ConfigError,
    DeepOnet,
    DimensionError,
    FormatError,
    HelmError,
    System,
    direct_solve,
    read_voxel_mask,
    sample_grf,
    write_voxel_mask,
)
from . import _helmsolve as _core

__all__ = [
    "ConfigError",
    "DeepOnet",
    "DimensionError",
    "FormatError",
    "HelmError",
    "System",
    "assemble",
    "dataset_defaults",
    "default_problem",
    "direct_solve",
    "generate_dataset",
    "read_container",
    "read_voxel_mask",
    "sample_grf",
    "solve",
    "write_container",
    "write_voxel_mask",
]


def default_problem(dim=2, m=33, seed=1):
    """Default scattering problem description as a dict."""
    return json.loads(_core._default_problem_json(dim, m, seed))


def assemble(problem=None, *, dim=2, m=33, seed=1):
    """Assemble a problem given as a dict (defaults fill missing keys)."""
    if problem is None:
        problem = default_problem(dim, m, seed)
    return _core._assemble(json.dumps(problem))


def solve(system, solver="gmres", precond="none", *, tol=1e-12, max_iters=10000, restart=50,
          flexible=False, weights=None, tb_size=32, nr=1, omega=None, reference=None):
    """Run one solver/preconditioner configuration; returns (u, report)."""
    return _core._solve(system, solver, precond, tol, max_iters, restart, flexible,
                        "" if weights is None else str(weights), tb_size, nr, omega, reference)


def read_container(path):
    """Returns (tensors, meta) from a NOTENSR1 file."""
    tensors, meta = _core.read_container(str(path))
    return tensors, json.loads(meta)


def write_container(path, tensors, meta=None, dtype="f64"):
    if dtype not in ("f32", "f64"):
        raise ValueError("dtype must be 'f32' or 'f64'")
    arrays = {name: np.asarray(v, dtype=np.float64) for name, v in tensors.items()}
    _core._write_container(str(path), arrays, json.dumps(meta or {}), dtype == "f32")


def dataset_defaults(dim=2):
    return json.loads(_core._dataset_defaults_json(dim))


def generate_dataset(spec, out):
    """Generate a training dataset container; missing keys take dataset_defaults(dim)."""
    _core._generate_dataset(json.dumps(spec), str(out))
