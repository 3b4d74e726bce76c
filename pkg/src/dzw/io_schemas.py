"""JSON ingestion and serialization for orbit catalogs, spectra, and SFT systems.

All interchange is JSON in, CSV out (the CSV side lives in the CLI).  Schema
violations raise SchemaError carrying the JSON path (and the parser's
line/column for malformed files); violations of model invariants propagate as
InvariantError naming the invariant.  Saving normalizes field order, so
save(load(f)) is byte-stable.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .errors import InvariantError, SchemaError
from .orbit_model import (
    HolonomyRep,
    OrbitCatalog,
    PoincareSpectrum,
    PrimeOrbit,
    constant_curvature_poincare,
)
from .spectral_zeta import HurwitzFamily, SpectrumModel
from .symbolic_dynamics import SftEdge, SftSystem
from .torsion import LaplacianSpectra


def _read_json(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def _write_json(path, obj) -> None:
    Path(path).write_text(
        json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


_MISSING = object()


def _want(obj, key, kind, path, default=_MISSING):
    if key not in obj:
        if default is not _MISSING:
            return default
        raise SchemaError(f"{path}.{key}: missing required field")
    val = obj[key]
    if kind is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise SchemaError(f"{path}.{key}: expected a number")
        return float(val)
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise SchemaError(f"{path}.{key}: expected an integer")
        return val
    if not isinstance(val, kind):
        raise SchemaError(f"{path}.{key}: expected {kind.__name__}")
    return val


def _complex_pair(v, path) -> complex:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise SchemaError(f"{path}: expected [re, im]")
    return complex(v[0], v[1])


def _pair_list(v, path) -> tuple[complex, ...]:
    if not isinstance(v, list):
        raise SchemaError(f"{path}: expected a list of [re, im] pairs")
    return tuple(_complex_pair(x, f"{path}[{i}]") for i, x in enumerate(v))


def _matrix_from_json(obj, path) -> HolonomyRep:
    re = _want(obj, "re", list, path)
    im = obj.get("im")
    n = len(re)
    if n == 0 or any(not isinstance(row, list) or len(row) != n for row in re):
        raise SchemaError(f"{path}.re: expected a square matrix")
    if im is None:
        im = [[0.0] * n for _ in range(n)]
    if len(im) != n or any(not isinstance(row, list) or len(row) != n for row in im):
        raise SchemaError(f"{path}.im: shape must match re")
    mat = [[complex(re[i][j], im[i][j]) for j in range(n)] for i in range(n)]
    return HolonomyRep.from_matrix(mat)


def _holonomy_from_json(obj, path) -> HolonomyRep:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    kind = _want(obj, "type", str, path)
    if kind == "matrix":
        return _matrix_from_json(obj, path)
    if kind == "traces":
        values = _pair_list(_want(obj, "values", list, path), f"{path}.values")
        if not values:
            raise SchemaError(f"{path}.values: need at least one trace")
        dim = obj.get("dim")
        if dim is None:
            # smallest dimension consistent with the unitary bound |tr| <= dim
            dim = max(1, max(math.ceil(abs(v) - 1e-9) for v in values))
        return HolonomyRep.from_traces(dim, {k + 1: v for k, v in enumerate(values)})
    raise SchemaError(f"{path}.type: unknown holonomy type {kind!r}")


def _holonomy_to_json(h: HolonomyRep) -> dict:
    if h.matrix is not None:
        return {
            "type": "matrix",
            "re": [[z.real for z in row] for row in h.matrix],
            "im": [[z.imag for z in row] for row in h.matrix],
        }
    ks = [k for k, _ in h.traces]
    if ks != list(range(1, len(ks) + 1)):
        raise InvariantError(
            "serialization: trace sequences must cover powers 1..n contiguously"
        )
    return {
        "type": "traces",
        "dim": h.dim,
        "values": [[t.real, t.imag] for _, t in h.traces],
    }


def load_orbit_catalog(path) -> OrbitCatalog:
    """Parse and validate an orbits.json file; duplicates merge by count."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    dimension = _want(data, "dimension", int, "$")
    mode = _want(data, "mode", str, "$", default="generic")
    if mode not in ("generic", "constant_curvature"):
        raise SchemaError(f"$.mode: unknown mode {mode!r}")
    primes_json = _want(data, "primes", list, "$")
    primes = []
    for i, pj in enumerate(primes_json):
        ppath = f"$.primes[{i}]"
        if not isinstance(pj, dict):
            raise SchemaError(f"{ppath}: expected an object")
        length = _want(pj, "prime_length", float, ppath)
        count = _want(pj, "count", int, ppath, default=1)
        angles = None
        if mode == "constant_curvature":
            raw = _want(pj, "rotation_angles", list, ppath)
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
                raise SchemaError(f"{ppath}.rotation_angles: expected numbers")
            angles = tuple(float(x) for x in raw)
            poincare = constant_curvature_poincare(length, angles, dimension)
        else:
            unstable = _pair_list(
                pj.get("unstable_eigenvalues", []), f"{ppath}.unstable_eigenvalues"
            )
            stable = _pair_list(
                pj.get("stable_eigenvalues", []), f"{ppath}.stable_eigenvalues"
            )
            poincare = PoincareSpectrum(unstable=unstable, stable=stable)
        if "holonomy" in pj:
            holonomy = _holonomy_from_json(pj["holonomy"], f"{ppath}.holonomy")
        else:
            holonomy = HolonomyRep.scalar(1.0)
        primes.append(
            PrimeOrbit(
                prime_length=length,
                poincare=poincare,
                holonomy=holonomy,
                count=count,
                rotation_angles=angles,
            )
        )
    return OrbitCatalog.build(dimension, primes, mode=mode)


def save_orbit_catalog(path, catalog: OrbitCatalog) -> None:
    primes = []
    for p in catalog.primes:
        pj: dict = {"prime_length": p.prime_length, "count": p.count}
        if catalog.mode == "constant_curvature":
            if p.rotation_angles is None:
                raise InvariantError(
                    "serialization: constant-curvature catalogs need rotation angles"
                )
            pj["rotation_angles"] = list(p.rotation_angles)
        else:
            pj["unstable_eigenvalues"] = [
                [z.real, z.imag] for z in p.poincare.unstable
            ]
            pj["stable_eigenvalues"] = [[z.real, z.imag] for z in p.poincare.stable]
        pj["holonomy"] = _holonomy_to_json(p.holonomy)
        primes.append(pj)
    _write_json(
        path, {"dimension": catalog.dimension, "mode": catalog.mode, "primes": primes}
    )


def load_spectrum(path) -> LaplacianSpectra:
    """Parse and validate a spectrum.json file."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    dim = _want(data, "dim", int, "$")
    degrees_json = _want(data, "degrees", dict, "$")
    degrees = {}
    for key, dj in degrees_json.items():
        dpath = f"$.degrees.{key}"
        try:
            p = int(key)
        except ValueError:
            raise SchemaError(f"{dpath}: degree keys must be integers") from None
        if not isinstance(dj, dict):
            raise SchemaError(f"{dpath}: expected an object")
        explicit = []
        for i, pair in enumerate(dj.get("explicit", [])):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not isinstance(pair[0], (int, float))
                or not isinstance(pair[1], int)
            ):
                raise SchemaError(
                    f"{dpath}.explicit[{i}]: expected [eigenvalue, multiplicity]"
                )
            explicit.append((float(pair[0]), pair[1]))
        families = []
        for i, fj in enumerate(dj.get("families", [])):
            fpath = f"{dpath}.families[{i}]"
            if not isinstance(fj, dict):
                raise SchemaError(f"{fpath}: expected an object")
            families.append(
                HurwitzFamily(
                    a=_want(fj, "a", float, fpath),
                    scale=_want(fj, "scale", float, fpath, default=1.0),
                    multiplicity=_want(fj, "multiplicity", int, fpath, default=1),
                    power=_want(fj, "power", int, fpath, default=2),
                )
            )
        degrees[p] = SpectrumModel(explicit=tuple(explicit), families=tuple(families))
    return LaplacianSpectra.from_map(dim, degrees)


def save_spectrum(path, spectra: LaplacianSpectra) -> None:
    degrees = {}
    for p, model in enumerate(spectra.per_degree):
        if model is None:
            continue
        dj: dict = {}
        if model.explicit:
            dj["explicit"] = [[lam, mult] for lam, mult in model.explicit]
        if model.families:
            fams = []
            for f in model.families:
                fj = {"a": f.a, "scale": f.scale, "multiplicity": f.multiplicity}
                if f.power != 2:
                    fj["power"] = f.power
                fams.append(fj)
            dj["families"] = fams
        degrees[str(p)] = dj
    _write_json(path, {"dim": spectra.dim, "degrees": degrees})


def load_sft(path) -> SftSystem:
    """Parse and validate an sft.json file (0-based vertex indices)."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    vertices = _want(data, "vertices", int, "$")
    edges_json = _want(data, "edges", list, "$")
    edges = []
    for i, ej in enumerate(edges_json):
        epath = f"$.edges[{i}]"
        if not isinstance(ej, dict):
            raise SchemaError(f"{epath}: expected an object")
        src = _want(ej, "from", int, epath)
        dst = _want(ej, "to", int, epath)
        weight = _want(ej, "weight", float, epath, default=1.0)
        if "holonomy_matrix" in ej and "holonomy_scalar" in ej:
            raise SchemaError(f"{epath}: holonomy_scalar and holonomy_matrix conflict")
        if "holonomy_matrix" in ej:
            hol = _matrix_from_json(ej["holonomy_matrix"], f"{epath}.holonomy_matrix")
        elif "holonomy_scalar" in ej:
            hol = HolonomyRep.scalar(
                _complex_pair(ej["holonomy_scalar"], f"{epath}.holonomy_scalar")
            )
        else:
            hol = HolonomyRep.scalar(1.0)
        expansion = ej.get("expansion")
        if expansion is not None and (
            not isinstance(expansion, (int, float)) or isinstance(expansion, bool)
        ):
            raise SchemaError(f"{epath}.expansion: expected a number")
        edges.append(
            SftEdge(src=src, dst=dst, weight=weight, holonomy=hol, expansion=expansion)
        )
    return SftSystem(n_vertices=vertices, edges=tuple(edges))


def save_sft(path, sys: SftSystem) -> None:
    edges = []
    for e in sys.edges:
        ej: dict = {"from": e.src, "to": e.dst, "weight": e.weight}
        if e.holonomy.dim == 1:
            u = e.holonomy.matrix[0][0]
            ej["holonomy_scalar"] = [u.real, u.imag]
        else:
            hol = _holonomy_to_json(e.holonomy)
            ej["holonomy_matrix"] = {"re": hol["re"], "im": hol["im"]}
        if e.expansion is not None:
            ej["expansion"] = e.expansion
        edges.append(ej)
    _write_json(path, {"vertices": sys.n_vertices, "edges": edges})
