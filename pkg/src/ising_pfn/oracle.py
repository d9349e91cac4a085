"""Exact partition functions by two independent methods.

``brute_force_Z`` enumerates all 2^(nm) spin configurations; it is the ground
truth everything else is checked against.  ``transfer_matrix_Z`` sweeps the
lattice column by column over the 2^n row configurations and reaches sizes
(small n, large m) that brute force cannot.

Boltzmann weights are computed as exp of the complex argument directly; at
desk scale the real parts stay far away from the double-precision overflow
threshold (|sum Re| around 700).
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import DomainClass, IsingInstance, classify_domain

_BRUTE_LIMIT = 26
_TRANSFER_LIMIT = 14
_CHUNK_BITS = 20


@dataclass(frozen=True)
class ExactResult:
    """An exact value of Z together with the method that produced it.

    ``work_size`` is the number of spin configurations enumerated (brute) or
    the number of row states per column (transfer).
    """

    z: complex
    method: str
    work_size: int


def _site_arrays(inst: IsingInstance):
    """Per-site fields and edge lists flattened to site indices."""
    nm = inst.num_sites
    h = np.zeros(nm, dtype=np.complex128)
    for (r, c), z in inst.h.items():
        h[inst.site_index(r, c)] = z
    edges: list[tuple[int, int, complex]] = []
    for (r, c), z in inst.jv.items():
        edges.append((inst.site_index(r, c), inst.site_index(r + 1, c), z))
    for (r, c), z in inst.jh.items():
        edges.append((inst.site_index(r, c), inst.site_index(r, c + 1), z))
    return h, edges


def _brute_chunk(inst_arrays, nm: int, start: int, stop: int) -> complex:
    h, edges = inst_arrays
    codes = np.arange(start, stop, dtype=np.uint64)
    # sigma[i] = +1 for bit 0, -1 for bit 1; bit i of the code is site i
    sigma = 1.0 - 2.0 * ((codes[None, :] >> np.arange(nm, dtype=np.uint64)[:, None]) & 1).astype(np.float64)
    expo = (h @ sigma).astype(np.complex128)
    for a, b, z in edges:
        expo += z * (sigma[a] * sigma[b])
    return complex(np.exp(expo).sum())


def brute_force_Z(inst: IsingInstance, force: bool = False, threads: int | None = None) -> ExactResult:
    """Z by full enumeration of 2^(nm) spin configurations.

    Refuses lattices with nm > 26 unless ``force`` is set.  Summation order is
    fixed (chunks of 2^20 configurations, reduced in index order), so results
    are bitwise stable regardless of ``threads``.
    """
    nm = inst.num_sites
    if nm > _BRUTE_LIMIT and not force:
        raise ValueError(
            f"lattice too large for brute force ({nm} sites > {_BRUTE_LIMIT}); pass force=True")
    arrays = _site_arrays(inst)
    total = 1 << nm
    chunk = 1 << _CHUNK_BITS
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if threads and threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _brute_chunk(arrays, nm, *b), bounds))
    else:
        parts = [_brute_chunk(arrays, nm, *b) for b in bounds]
    z = 0j
    for part in parts:
        z += part
    return ExactResult(z=z, method="brute", work_size=total)


def transfer_matrix_Z(inst: IsingInstance) -> ExactResult:
    """Z by a left-to-right column sweep over the 2^n row configurations.

    Within a column the vertical bonds and fields are folded into a diagonal
    weight; horizontal bonds between columns are applied as n independent
    2x2 kernels, giving O(m * 2^n * n) work.
    """
    n, m = inst.n, inst.m
    if n > _TRANSFER_LIMIT:
        raise ValueError(f"too many rows for transfer matrix ({n} > {_TRANSFER_LIMIT})")
    dim = 1 << n
    codes = np.arange(dim, dtype=np.uint64)
    sigma = 1.0 - 2.0 * ((codes[None, :] >> np.arange(n, dtype=np.uint64)[:, None]) & 1).astype(np.float64)

    def column_weight(c: int) -> np.ndarray:
        expo = np.zeros(dim, dtype=np.complex128)
        for r in range(n):
            expo += inst.h[(r, c)] * sigma[r]
        for r in range(n - 1):
            expo += inst.jv[(r, c)] * sigma[r] * sigma[r + 1]
        return np.exp(expo)

    w = column_weight(0)
    for c in range(1, m):
        # contract each row's horizontal bond kernel, then fold in column c
        t = w.reshape([2] * n)  # axis i corresponds to row n-1-i
        for r in range(n):
            j = inst.jh[(r, c - 1)]
            e, f = cmath.exp(j), cmath.exp(-j)
            kern = np.array([[e, f], [f, e]], dtype=np.complex128)
            axis = n - 1 - r
            t = np.moveaxis(np.tensordot(kern, t, axes=([1], [axis])), 0, axis)
        w = t.reshape(dim) * column_weight(c)
    return ExactResult(z=complex(w.sum()), method="transfer", work_size=dim)


def partition_function_graph(
    num_sites: int,
    h: dict[int, complex],
    j: dict[tuple[int, int], complex],
    force: bool = False,
) -> complex:
    """Brute-force Z for an Ising model on an arbitrary graph.

    Used to check models that live on non-square graphs (for instance the
    lattice produced by the commuting-circuit rewrite).  Same conventions as
    the square-lattice oracle: weights exp(sum J sigma sigma + sum h sigma).
    """
    if num_sites > _BRUTE_LIMIT and not force:
        raise ValueError(f"graph too large for brute force ({num_sites} sites)")
    codes = np.arange(1 << num_sites, dtype=np.uint64)
    sigma = 1.0 - 2.0 * ((codes[None, :] >> np.arange(num_sites, dtype=np.uint64)[:, None]) & 1).astype(np.float64)
    expo = np.zeros(1 << num_sites, dtype=np.complex128)
    for a, z in h.items():
        expo += z * sigma[a]
    for (a, b), z in j.items():
        expo += z * sigma[a] * sigma[b]
    return complex(np.exp(expo).sum())


@dataclass(frozen=True)
class FreeEnergyReport:
    """Free energy per site and the additive error implied by a scale."""

    f: float
    epsilon: float
    z: float
    delta: float
    poly: float
    sites: int


def free_energy_report(
    inst: IsingInstance, z_estimate: complex, delta: float, poly: float
) -> FreeEnergyReport:
    """F = ln z / (nm) and epsilon = ln(1 + delta/(poly*z)) / (nm).

    Parameters are beta-multiplied, so beta is read as 1 in the per-site
    normalization.  Requires a physical instance and a positive z.
    """
    if classify_domain(inst) is not DomainClass.PHYSICAL:
        raise ValueError("free energy report requires a physical (real-parameter) instance")
    z = complex(z_estimate).real
    if z <= 0:
        raise ValueError("non-positive z")
    nm = inst.num_sites
    return FreeEnergyReport(
        f=math.log(z) / nm,
        epsilon=math.log1p(delta / (poly * z)) / nm,
        z=z,
        delta=delta,
        poly=poly,
        sites=nm,
    )
