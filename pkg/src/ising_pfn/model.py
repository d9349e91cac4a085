"""Square-lattice Ising instances with complex dimensionless parameters.

Conventions used throughout the package:

* Every parameter is stored pre-multiplied by the inverse temperature, so an
  entry of ``h`` holds the dimensionless complex value beta*h and the coupling
  maps hold beta*J.  There is no separate beta field anywhere.
* The lattice has ``n`` rows and ``m`` columns.  Rows play the role of circuit
  wires and columns the role of time steps, read left to right.
* ``jv[(r, c)]`` couples sites (r, c) and (r+1, c); ``jh[(r, c)]`` couples
  (r, c) and (r, c+1).
* Spin values are sigma = +1 for bit 0 and sigma = -1 for bit 1, and spin
  configurations are flattened row-major (site index = r*m + c).

The instance document format (UTF-8 JSON) is::

    {"n": int, "m": int,
     "h":  [[r, c, re, im], ...],
     "jv": [[r, c, re, im], ...],
     "jh": [[r, c, re, im], ...]}

Entries omitted from a list default to zero.
"""

from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

# Horizontal coupling whose edge projection teleports an HT gate; together
# with i*pi/4 it generates a universal gate set on the brickwork cells.
OMEGA = complex(math.log(math.sqrt(2.0) + 1.0) / 2.0, math.pi / 4.0)

_QUARTER_PI = math.pi / 4.0


class DomainClass(enum.Enum):
    """Parameter-domain labels, ordered from most to least specific."""

    PROBLEM2 = "Problem2"
    PROBLEM3 = "Problem3"
    PROBLEM1 = "Problem1"
    PHYSICAL = "Physical"
    GENERAL = "General"


class ModelError(ValueError):
    """Raised for malformed documents or invalid instance data."""


def _check_finite(z: complex, what: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ModelError(f"non-finite number in {what}: {z!r}")
    return z


@dataclass(frozen=True)
class IsingInstance:
    """An n x m square-lattice Ising model with complex beta*J, beta*h.

    All three maps are fully populated after construction (missing entries
    are filled with zero).  Instances are immutable and safe to share.
    """

    n: int
    m: int
    h: dict[tuple[int, int], complex] = field(default_factory=dict)
    jv: dict[tuple[int, int], complex] = field(default_factory=dict)
    jh: dict[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ModelError("empty lattice")
        for name, items, rmax, cmax in (
            ("h", self.h, self.n, self.m),
            ("jv", self.jv, self.n - 1, self.m),
            ("jh", self.jh, self.n, self.m - 1),
        ):
            full: dict[tuple[int, int], complex] = {}
            for (r, c), z in items.items():
                if not (0 <= r < rmax and 0 <= c < cmax):
                    raise ModelError(f"{name} entry ({r},{c}) out of bounds")
                full[(r, c)] = _check_finite(z, name)
            for r in range(rmax):
                for c in range(cmax):
                    full.setdefault((r, c), 0j)
            object.__setattr__(self, name, full)

    # -- lattice bookkeeping ------------------------------------------------

    @property
    def num_sites(self) -> int:
        return self.n * self.m

    @property
    def num_v_edges(self) -> int:
        return (self.n - 1) * self.m

    @property
    def num_h_edges(self) -> int:
        return self.n * (self.m - 1)

    @property
    def num_edges(self) -> int:
        return self.num_v_edges + self.num_h_edges

    @property
    def num_decorated(self) -> int:
        """Vertex count of the decorated graph: 3nm - n - m."""
        return self.num_sites + self.num_edges

    def site_index(self, r: int, c: int) -> int:
        return r * self.m + c

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IsingInstance):
            return NotImplemented
        return (self.n, self.m, self.h, self.jv, self.jh) == (
            other.n, other.m, other.h, other.jv, other.jh)


def decorated_graph_structure(
    n: int, m: int
) -> tuple[list[tuple[str, int, int]], list[tuple[tuple[str, int, int], tuple[str, int, int]]]]:
    """Vertices and edges of the decorated graph of the n x m lattice.

    A vertex is placed on every site ("v", r, c), every vertical edge
    ("ev", r, c) and every horizontal edge ("eh", r, c); each edge vertex is
    linked to the two sites it decorates.  Vertices are returned sorted by
    column position (left to right, sites and vertical-edge qubits before the
    horizontal-edge qubits that follow them), which is the order in which the
    projections are consumed.
    """
    verts: list[tuple[str, int, int]] = []
    for c in range(m):
        verts.extend(("v", r, c) for r in range(n))
        verts.extend(("ev", r, c) for r in range(n - 1))
        if c < m - 1:
            verts.extend(("eh", r, c) for r in range(n))
    edges: list[tuple[tuple[str, int, int], tuple[str, int, int]]] = []
    for c in range(m):
        for r in range(n - 1):
            edges.append((("ev", r, c), ("v", r, c)))
            edges.append((("ev", r, c), ("v", r + 1, c)))
        if c < m - 1:
            for r in range(n):
                edges.append((("eh", r, c), ("v", r, c)))
                edges.append((("eh", r, c), ("v", r, c + 1)))
    return verts, edges


# -- parsing / serialization ------------------------------------------------


def parse_instance(text: str) -> IsingInstance:
    """Parse an instance document (see module docstring for the schema)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed document: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "m" not in doc:
        raise ModelError("malformed document: expected object with n, m")
    n, m = doc["n"], doc["m"]
    if not isinstance(n, int) or not isinstance(m, int):
        raise ModelError("malformed document: n, m must be integers")
    if n < 1 or m < 1:
        raise ModelError("empty lattice")

    def read_map(key: str) -> dict[tuple[int, int], complex]:
        out: dict[tuple[int, int], complex] = {}
        for entry in doc.get(key, []):
            if not (isinstance(entry, list) and len(entry) == 4):
                raise ModelError(f"malformed {key} entry: {entry!r}")
            r, c, re, im = entry
            if not all(isinstance(v, (int, float)) for v in entry):
                raise ModelError(f"malformed {key} entry: {entry!r}")
            out[(int(r), int(c))] = _check_finite(complex(re, im), key)
        return out

    return IsingInstance(n=n, m=m, h=read_map("h"), jv=read_map("jv"), jh=read_map("jh"))


def serialize_instance(inst: IsingInstance) -> str:
    """Serialize to the document format; parse(serialize(x)) == x exactly.

    Floats are emitted with repr precision, which round-trips bit-exactly.
    Zero entries are omitted (the parser restores them).
    """

    def dump_map(items: dict[tuple[int, int], complex]) -> list[list[float]]:
        return [
            [r, c, z.real, z.imag]
            for (r, c), z in sorted(items.items())
            if z != 0
        ]

    doc = {
        "n": inst.n,
        "m": inst.m,
        "h": dump_map(inst.h),
        "jv": dump_map(inst.jv),
        "jh": dump_map(inst.jh),
    }
    return json.dumps(doc)


# -- domain classification ---------------------------------------------------


def problem1_horizontal_parts(z: complex, tol: float = 1e-12) -> tuple[float, int] | None:
    """Split a horizontal coupling as r + i(2k+1)pi/4, or None if not of that form."""
    q = z.imag / _QUARTER_PI
    k2 = round(q)
    if abs(q - k2) * _QUARTER_PI > tol or k2 % 2 == 0:
        return None
    return z.real, (k2 - 1) // 2


def _close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol


def classify_domain(inst: IsingInstance, tol: float = 1e-12) -> DomainClass:
    """Return the most specific domain label that applies to the instance.

    The checks run from most to least specific: Problem2, Problem3, Problem1,
    Physical, General.  An instance satisfying both Problem2 and Problem3
    (possible when every horizontal coupling is i*pi/4) reports Problem2.
    """
    if tol < 0:
        raise ModelError("tol must be nonnegative")
    h_vals = inst.h.values()
    jv_vals = inst.jv.values()
    jh_vals = inst.jh.values()

    ip4 = complex(0.0, _QUARTER_PI)
    ip8 = complex(0.0, _QUARTER_PI / 2.0)

    if (all(_close(z, ip4, tol) for z in h_vals)
            and all(_close(z, 0, tol) or _close(z, ip4, tol) for z in jv_vals)
            and all(_close(z, ip4, tol) or _close(z, OMEGA, tol) for z in jh_vals)):
        return DomainClass.PROBLEM2

    if (all(_close(z, ip4, tol) for z in jh_vals)
            and all(_close(z, 0, tol) or _close(z, ip4, tol) for z in jv_vals)
            and all(any(_close(z, v, tol) for v in (0, ip4, ip8)) for z in h_vals)):
        return DomainClass.PROBLEM3

    if (all(abs(z.real) <= tol for z in h_vals)
            and all(abs(z.real) <= tol for z in jv_vals)
            and all(problem1_horizontal_parts(z, tol) is not None for z in jh_vals)):
        return DomainClass.PROBLEM1

    if all(abs(z.imag) <= tol for z in (*h_vals, *jv_vals, *jh_vals)):
        return DomainClass.PHYSICAL

    return DomainClass.GENERAL


# -- energy -------------------------------------------------------------------


def energy(inst: IsingInstance, spins) -> complex:
    """beta*H for a spin configuration given as bits (0 -> +1, 1 -> -1).

    Returns -sum(beta*J sigma sigma) - sum(beta*h sigma) as a complex number.
    """
    bits = list(spins)
    if len(bits) != inst.num_sites:
        raise ModelError(
            f"spin vector has length {len(bits)}, expected {inst.num_sites}")
    sigma = [1 - 2 * int(b) for b in bits]
    total = 0j
    for (r, c), z in inst.h.items():
        total -= z * sigma[inst.site_index(r, c)]
    for (r, c), z in inst.jv.items():
        total -= z * sigma[inst.site_index(r, c)] * sigma[inst.site_index(r + 1, c)]
    for (r, c), z in inst.jh.items():
        total -= z * sigma[inst.site_index(r, c)] * sigma[inst.site_index(r, c + 1)]
    return total


# -- random fixtures -----------------------------------------------------------


def random_instance(n: int, m: int, domain: DomainClass, seed: int) -> IsingInstance:
    """Deterministic random instance whose classify_domain equals ``domain``."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    ip4 = complex(0.0, _QUARTER_PI)

    def imag(lo=-2.0, hi=2.0) -> complex:
        return complex(0.0, rng.uniform(lo, hi))

    def real(lo=-2.0, hi=2.0) -> complex:
        return complex(rng.uniform(lo, hi), 0.0)

    def cplx(lo=-1.5, hi=1.5) -> complex:
        return complex(rng.uniform(lo, hi), rng.uniform(lo, hi))

    h: dict[tuple[int, int], complex] = {}
    jv: dict[tuple[int, int], complex] = {}
    jh: dict[tuple[int, int], complex] = {}
    sites = [(r, c) for r in range(n) for c in range(m)]
    v_edges = [(r, c) for r in range(n - 1) for c in range(m)]
    h_edges = [(r, c) for r in range(n) for c in range(m - 1)]

    if domain is DomainClass.PROBLEM1:
        for key in sites:
            h[key] = imag()
        for key in v_edges:
            jv[key] = imag()
        for key in h_edges:
            k = int(rng.integers(-1, 2))
            jh[key] = complex(rng.uniform(-1.0, 1.0), (2 * k + 1) * _QUARTER_PI)
    elif domain is DomainClass.PROBLEM2:
        for key in sites:
            h[key] = ip4
        for key in v_edges:
            jv[key] = ip4 if rng.random() < 0.5 else 0j
        for key in h_edges:
            jh[key] = OMEGA if rng.random() < 0.5 else ip4
        if m > 1 and not any(z == OMEGA for z in jh.values()):
            # force at least one Omega so the label cannot collapse to Problem3
            jh[h_edges[0]] = OMEGA
    elif domain is DomainClass.PROBLEM3:
        choices = (0j, ip4, complex(0.0, _QUARTER_PI / 2.0))
        for key in sites:
            h[key] = choices[int(rng.integers(0, 3))]
        for key in v_edges:
            jv[key] = ip4 if rng.random() < 0.5 else 0j
        for key in h_edges:
            jh[key] = ip4
        if all(z == ip4 for z in h.values()):
            # a homogeneous i*pi/4 field would classify as Problem2 instead
            h[sites[0]] = complex(0.0, _QUARTER_PI / 2.0)
    elif domain is DomainClass.PHYSICAL:
        for key in sites:
            h[key] = real()
        for key in v_edges:
            jv[key] = real()
        for key in h_edges:
            jh[key] = real()
        if m == 1 and all(abs(z.real) <= 1e-12 for z in h.values()):
            h[sites[0]] = complex(0.5, 0.0)
    elif domain is DomainClass.GENERAL:
        for key in sites:
            h[key] = cplx()
        for key in v_edges:
            jv[key] = cplx()
        for key in h_edges:
            jh[key] = cplx()
    else:
        raise ModelError(f"unsupported domain request: {domain}")

    inst = IsingInstance(n=n, m=m, h=h, jv=jv, jh=jh)
    got = classify_domain(inst)
    if got is not domain:
        raise ModelError(f"generated instance classifies as {got}, wanted {domain}")
    return inst
