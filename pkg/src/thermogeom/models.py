"""Model zoo and spectrum-file ingestion."""

import json
import math
from pathlib import Path

import numpy as np

from .exceptions import SchemaError
from .gibbs import GibbsFamily

MAX_ISING_SPINS = 24

_LEVEL_FIELDS = {"label", "energy", "multiplicity", "base_weight"}
_TOP_FIELDS = {"levels", "observables"}
_OBSERVABLE_FIELDS = {"name", "values"}


def ising_chain(N, J, boundary):
    """Nearest-neighbour Ising chain ``H = -J sum s_i s_{i+1}`` by full enumeration.

    Configuration ``c`` has spin ``s_i = +1`` when bit ``i`` of ``c`` is 0
    and ``-1`` otherwise. With ``boundary="periodic"`` the bond ``(N-1, 0)``
    is added; for ``N = 2`` this counts the single bond twice.

    Parameters
    ----------
    N : int
        Number of spins, ``2 <= N <= 24``.
    J : float
        Exchange coupling.
    boundary : {"free", "periodic"}
        Required; there is deliberately no default.
    """
    if not isinstance(N, (int, np.integer)) or not 2 <= N <= MAX_ISING_SPINS:
        raise ValueError(f"N must be an integer in [2, {MAX_ISING_SPINS}], got {N!r}")
    if boundary not in ("free", "periodic"):
        raise ValueError(f"boundary must be 'free' or 'periodic', got {boundary!r}")
    idx = np.arange(2**N, dtype=np.int64)
    bits = [(idx >> i) & 1 for i in range(N)]
    pairs = [(i, i + 1) for i in range(N - 1)]
    if boundary == "periodic":
        pairs.append((N - 1, 0))
    aligned = np.zeros(idx.shape[0], dtype=np.int64)
    for i, j in pairs:
        # s_i s_j = 1 - 2 (b_i xor b_j)
        aligned += 1 - 2 * (bits[i] ^ bits[j])
    return GibbsFamily(-float(J) * aligned.astype(float))


def independent_bond_chain(n_bonds, J):
    """``n_bonds`` independent bonds of energy ``+-J`` reduced to ``n_bonds + 1`` levels.

    Level ``m`` has energy ``(2m - n_bonds) J`` and multiplicity
    ``C(n_bonds, m)``.
    """
    if not isinstance(n_bonds, (int, np.integer)) or n_bonds < 1:
        raise ValueError(f"n_bonds must be a positive integer, got {n_bonds!r}")
    m = np.arange(n_bonds + 1)
    return GibbsFamily(
        (2 * m - n_bonds) * float(J),
        multiplicity=[float(math.comb(n_bonds, k)) for k in m],
        labels=[f"m={k}" for k in m],
    )


def two_level(gap=1.0):
    return GibbsFamily([0.0, float(gap)])


def _finite_number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {value!r}", field=field)
    if not math.isfinite(value):
        raise SchemaError(f"expected a finite number, got {value!r}", field=field)
    return float(value)


def _unknown(obj, allowed, field):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SchemaError(f"unknown field(s) {', '.join(extra)}", field=field)


def parse_spectrum(doc):
    """Build a :class:`GibbsFamily` from an already-decoded spectrum document."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    _unknown(doc, _TOP_FIELDS, "<root>")
    levels = doc.get("levels")
    if not isinstance(levels, list) or not levels:
        raise SchemaError("must be a non-empty array", field="levels")

    energies, mults, weights, labels = [], [], [], []
    for k, lev in enumerate(levels):
        where = f"levels[{k}]"
        if not isinstance(lev, dict):
            raise SchemaError("must be an object", field=where)
        _unknown(lev, _LEVEL_FIELDS, where)
        if "energy" not in lev:
            raise SchemaError("missing required field", field=f"{where}.energy")
        energies.append(_finite_number(lev["energy"], f"{where}.energy"))

        mult = lev.get("multiplicity", 1)
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise SchemaError(f"must be a positive integer, got {mult!r}", field=f"{where}.multiplicity")
        mults.append(mult)

        w = _finite_number(lev.get("base_weight", 1.0), f"{where}.base_weight")
        if w <= 0:
            raise SchemaError(f"must be positive, got {w!r}", field=f"{where}.base_weight")
        weights.append(w)

        label = lev.get("label", str(k))
        if not isinstance(label, str):
            raise SchemaError("must be a string", field=f"{where}.label")
        labels.append(label)

    seen = set()
    for k, label in enumerate(labels):
        if label in seen:
            raise SchemaError(f"duplicate label {label!r}", field=f"levels[{k}].label")
        seen.add(label)

    hams, names = [energies], ["energy"]
    observables = doc.get("observables", [])
    if not isinstance(observables, list):
        raise SchemaError("must be an array", field="observables")
    for j, obs in enumerate(observables):
        where = f"observables[{j}]"
        if not isinstance(obs, dict):
            raise SchemaError("must be an object", field=where)
        _unknown(obs, _OBSERVABLE_FIELDS, where)
        name = obs.get("name")
        if not isinstance(name, str) or not name:
            raise SchemaError("must be a non-empty string", field=f"{where}.name")
        if name in names:
            raise SchemaError(f"duplicate observable name {name!r}", field=f"{where}.name")
        values = obs.get("values")
        if not isinstance(values, list) or len(values) != len(energies):
            raise SchemaError(f"must be an array of {len(energies)} numbers", field=f"{where}.values")
        hams.append([_finite_number(v, f"{where}.values[{i}]") for i, v in enumerate(values)])
        names.append(name)

    return GibbsFamily(np.array(hams), base_weights=weights, multiplicity=mults,
                       labels=labels, names=names)


def from_spectrum_file(path):
    """Load a spectrum document (JSON) from ``path``.

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    SchemaError
        On malformed JSON (with line number) or any schema violation (with
        the offending field path).
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno) from None
    return parse_spectrum(doc)
