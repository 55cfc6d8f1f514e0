"""Bundled samples.

``bladder``: remission times (months / 100) of bladder cancer patients,
127 values after removing one outlier, in the order they were printed.
``failure``: failure times (weeks / 100) of 50 components.

Each vector is pinned by a SHA-256 digest of its comma-joined ``repr``
values; :func:`load_builtin` refuses to return a vector that does not
match its digest.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["Dataset", "BUILTIN", "load_builtin", "read_dataset", "digest"]


@dataclass(frozen=True)
class Dataset:
    name: str
    values: tuple
    source: str

    def __post_init__(self):
        if len(self.values) == 0:
            raise DomainError(f"dataset {self.name!r} is empty")
        arr = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise DomainError(f"dataset {self.name!r} has values outside (0, 1)")

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


_BLADDER = (
    0.0008, 0.0209, 0.0348, 0.0487, 0.0694, 0.0866, 0.1311,
    0.2363, 0.002, 0.0223, 0.0352, 0.0498, 0.0697, 0.0902,
    0.1329, 0.004, 0.0226, 0.0357, 0.0506, 0.0709, 0.0922,
    0.138, 0.2574, 0.005, 0.0246, 0.0364, 0.0509, 0.0726,
    0.0947, 0.1424, 0.2582, 0.0051, 0.0254, 0.037, 0.0517,
    0.0728, 0.0974, 0.1476, 0.2631, 0.0081, 0.0262, 0.0382,
    0.0532, 0.0732, 0.1006, 0.1477, 0.3215, 0.0264, 0.0388,
    0.0532, 0.0739, 0.1034, 0.1483, 0.3426, 0.009, 0.0269,
    0.0418, 0.0534, 0.0759, 0.1066, 0.1596, 0.3666, 0.0105,
    0.0269, 0.0423, 0.0541, 0.0762, 0.1075, 0.1662, 0.4301,
    0.0119, 0.0275, 0.0426, 0.0541, 0.0763, 0.1712, 0.4612,
    0.0126, 0.0283, 0.0433, 0.0549, 0.0766, 0.1125, 0.1714,
    0.0135, 0.0287, 0.0562, 0.0787, 0.1164, 0.1736, 0.014,
    0.0302, 0.0434, 0.0571, 0.0793, 0.1179, 0.181, 0.0146,
    0.044, 0.0585, 0.0826, 0.1198, 0.1913, 0.0176, 0.0325,
    0.045, 0.0625, 0.0837, 0.1202, 0.0202, 0.0331, 0.0451,
    0.0654, 0.0853, 0.1203, 0.2028, 0.0202, 0.0336, 0.0676,
    0.1207, 0.2173, 0.0207, 0.0336, 0.0693, 0.0865, 0.1263,
    0.2269,
)

_FAILURE = (
    0.00013, 0.00065, 0.00111, 0.00111, 0.00163, 0.00309, 0.00426, 0.00535,
    0.00684, 0.00747, 0.00997, 0.01284, 0.01304, 0.01647, 0.01829, 0.02336,
    0.02838, 0.03269, 0.03977, 0.03981, 0.0452, 0.04789, 0.04849, 0.05202,
    0.05291, 0.05349, 0.05911, 0.06018, 0.06427, 0.06456, 0.06572, 0.07023,
    0.07087, 0.07291, 0.07787, 0.08596, 0.09388, 0.10261, 0.10713, 0.11658,
    0.13006, 0.13388, 0.13842, 0.17152, 0.17283, 0.19418, 0.23471, 0.24777,
    0.32795, 0.48105,
)

_DIGESTS = {
    "bladder": "941222272cc5cc1a551c20a5bc804ae3e26e3138762986d5562b8967dc029e8c",
    "failure": "df3f1558047560e3509955a007d2bf55952edd71b50fe8dd47c6ea40c2ba1a44",
}

_SOURCES = {
    "bladder": "bladder cancer remission times in months, scaled by 1/100, outlier 79.05 removed",
    "failure": "failure times in weeks of 50 components, scaled by 1/100",
}

_EXPECTED_SIZE = {"bladder": 127, "failure": 50}


def digest(values) -> str:
    """SHA-256 of the comma-joined ``repr`` of the float values."""
    return hashlib.sha256(",".join(repr(float(v)) for v in values).encode()).hexdigest()


def load_builtin(name: str) -> Dataset:
    raw = {"bladder": _BLADDER, "failure": _FAILURE}.get(name)
    if raw is None:
        raise DomainError(f"unknown builtin dataset {name!r}")
    if len(raw) != _EXPECTED_SIZE[name] or digest(raw) != _DIGESTS[name]:
        raise RuntimeError(f"builtin dataset {name!r} does not match its pinned checksum")
    return Dataset(name, tuple(float(v) for v in raw), _SOURCES[name])


BUILTIN = ("bladder", "failure")


def read_dataset(spec: str, scale: float = 1.0) -> Dataset:
    """Load ``builtin:<name>`` or a text file with one value per line.

    Blank lines and anything after ``#`` are ignored. ``scale`` multiplies
    file values (for example 0.01 for percentages); builtins are already
    on the unit interval and reject a scale other than 1.
    """
    if spec.startswith("builtin:"):
        if scale != 1.0:
            raise DomainError("--scale does not apply to builtin datasets")
        return load_builtin(spec.split(":", 1)[1])
    values = []
    with open(spec, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(float(text) * scale)
            except ValueError:
                raise DomainError(f"{spec}:{lineno}: not a number: {text!r}") from None
    return Dataset(spec, tuple(values), f"file {spec}")
