"""Small physical-quantity type covering the unit classes used by the search model.

Everything is stored in SI. A unit tag carries a scale factor to SI and a
dimension signature ``(mass, length, time, temperature)``. Conversions between
units of the same signature are exact constant ratios; temperature becomes an
energy only through :func:`thermal_energy`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DimensionMismatch, NegativeTemperature

# exact / CODATA constants
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
EV = 1.602176634e-19  # J
WAVENUMBER = 1.986445857e-23  # J per cm^-1
H_PLANCK = 2.0 * math.pi * HBAR
M_ELECTRON = 9.1093837015e-31  # kg

Dims = tuple[int | float, int | float, int | float, int | float]

DIMENSIONLESS: Dims = (0, 0, 0, 0)
ENERGY: Dims = (1, 2, -2, 0)
ENERGY_SQUARED: Dims = (2, 4, -4, 0)
TEMPERATURE: Dims = (0, 0, 0, 1)
TIME: Dims = (0, 0, 1, 0)
RATE: Dims = (0, 0, -1, 0)
LENGTH: Dims = (0, 1, 0, 0)
INVERSE_LENGTH: Dims = (0, -1, 0, 0)
MASS: Dims = (1, 0, 0, 0)
VELOCITY: Dims = (0, 1, -1, 0)
NUMBER_DENSITY: Dims = (0, -3, 0, 0)
MASS_DENSITY: Dims = (1, -3, 0, 0)
ACTION: Dims = (1, 2, -1, 0)

# unit tag -> (SI scale, dims)
UNITS: dict[str, tuple[float, Dims]] = {
    "1": (1.0, DIMENSIONLESS),
    "J": (1.0, ENERGY),
    "eV": (EV, ENERGY),
    "meV": (1e-3 * EV, ENERGY),
    "cm^-1": (WAVENUMBER, ENERGY),
    "J^2": (1.0, ENERGY_SQUARED),
    "cm^-2": (WAVENUMBER**2, ENERGY_SQUARED),
    "meV^2": ((1e-3 * EV) ** 2, ENERGY_SQUARED),
    "K": (1.0, TEMPERATURE),
    "s": (1.0, TIME),
    "ps": (1e-12, TIME),
    "fs": (1e-15, TIME),
    "ns": (1e-9, TIME),
    "1/s": (1.0, RATE),
    "rad/s": (1.0, RATE),
    "m": (1.0, LENGTH),
    "cm": (1e-2, LENGTH),
    "nm": (1e-9, LENGTH),
    "1/m": (1.0, INVERSE_LENGTH),
    "1/cm": (1e2, INVERSE_LENGTH),
    "kg": (1.0, MASS),
    "m_e": (M_ELECTRON, MASS),
    "m/s": (1.0, VELOCITY),
    "cm/s": (1e-2, VELOCITY),
    "m^-3": (1.0, NUMBER_DENSITY),
    "cm^-3": (1e6, NUMBER_DENSITY),
    "kg/m^3": (1.0, MASS_DENSITY),
    "g/cm^3": (1e3, MASS_DENSITY),
    "J s": (1.0, ACTION),
}

_ALIASES = {
    "cm-1": "cm^-1",
    "cm⁻¹": "cm^-1",
    "m-3": "m^-3",
    "cm-3": "cm^-3",
    "cm⁻³": "cm^-3",
    "m⁻³": "m^-3",
    "kg m^-3": "kg/m^3",
    "kg/m3": "kg/m^3",
    "cm s^-1": "cm/s",
    "m s^-1": "m/s",
    "s^-1": "1/s",
    "m^-1": "1/m",
}


def _resolve(unit: str) -> tuple[float, Dims]:
    u = unit.strip()
    u = _ALIASES.get(u, u)
    try:
        return UNITS[u]
    except KeyError:
        raise DimensionMismatch(f"unknown unit {unit!r}") from None


def dims_of(unit: str) -> Dims:
    return _resolve(unit)[1]


def _dims_op(a: Dims, b: Dims, sign: int) -> Dims:
    return tuple(x + sign * y for x, y in zip(a, b))  # type: ignore[return-value]


@dataclass(frozen=True)
class Quantity:
    """A magnitude tagged with a unit.

    ``si`` holds the SI value. Products and quotients of quantities give a
    quantity in SI with the combined dimension signature, which is how
    dimensional consistency of composite formulas is checked.
    """

    magnitude: float
    unit: str
    dims: Dims | None = None

    def __post_init__(self):
        if self.dims is None:
            object.__setattr__(self, "dims", dims_of(self.unit))

    @property
    def si(self) -> float:
        if self.unit == "SI":
            return self.magnitude
        return self.magnitude * _resolve(self.unit)[0]

    def to(self, unit: str) -> Quantity:
        return convert(self, unit)

    def value_in(self, unit: str) -> float:
        return convert(self, unit).magnitude

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.si * other.si, "SI", _dims_op(self.dims, other.dims, 1))
        return Quantity(self.magnitude * other, self.unit, self.dims)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.si / other.si, "SI", _dims_op(self.dims, other.dims, -1))
        return Quantity(self.magnitude / other, self.unit, self.dims)

    def __rtruediv__(self, other):
        return Quantity(other / self.si, "SI", tuple(-d for d in self.dims))

    def __pow__(self, p):
        return Quantity(self.si**p, "SI", tuple(d * p for d in self.dims))

    def __neg__(self):
        return Quantity(-self.magnitude, self.unit, self.dims)

    def _same_dims(self, other: Quantity) -> None:
        if self.dims != other.dims:
            raise DimensionMismatch(f"{self.unit} and {other.unit} have different dimensions")

    def __add__(self, other: Quantity) -> Quantity:
        self._same_dims(other)
        return Quantity(self.si + other.si, "SI", self.dims)

    def __sub__(self, other: Quantity) -> Quantity:
        self._same_dims(other)
        return Quantity(self.si - other.si, "SI", self.dims)

    def __lt__(self, other: Quantity) -> bool:
        self._same_dims(other)
        return self.si < other.si

    def __le__(self, other: Quantity) -> bool:
        self._same_dims(other)
        return self.si <= other.si

    def __str__(self):
        return f"{self.magnitude:.6g} {self.unit}"


def convert(q: Quantity, target_unit: str) -> Quantity:
    """Rescale ``q`` to ``target_unit``; both must share a dimension."""
    scale, dims = _resolve(target_unit)
    if dims != q.dims:
        raise DimensionMismatch(f"cannot convert {q.unit} {q.dims} to {target_unit} {dims}")
    return Quantity(q.si / scale, target_unit, dims)


def thermal_energy(T: Quantity) -> Quantity:
    """k_B T as an energy in meV."""
    if T.dims != TEMPERATURE:
        raise DimensionMismatch(f"expected a temperature, got {T.unit}")
    if T.si < 0:
        raise NegativeTemperature(f"T = {T}")
    return Quantity(K_B * T.si / (1e-3 * EV), "meV")


def angular_frequency(E: Quantity) -> Quantity:
    """Recover omega = E / hbar from an energy."""
    return Quantity(require(E, ENERGY) / HBAR, "rad/s")


def require(q: Quantity, dims: Dims) -> float:
    """SI magnitude of ``q`` after checking its dimension."""
    if not isinstance(q, Quantity):
        raise TypeError(f"expected a Quantity, got {type(q).__name__}")
    if q.dims != dims:
        raise DimensionMismatch(f"expected dims {dims}, got {q.unit} {q.dims}")
    return q.si


def energy_or_thermal(T: Quantity) -> float:
    """SI energy for either a temperature (via k_B) or an explicit k_B T energy."""
    if T.dims == TEMPERATURE:
        return thermal_energy(T).si
    return require(T, ENERGY)


_QTY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(text: str) -> Quantity:
    """Parse strings such as ``"50 cm^-1"`` or ``"1e15 cm^-3"``."""
    m = _QTY_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse quantity {text!r}")
    value, unit = m.groups()
    if not unit:
        raise ValueError(f"quantity {text!r} has no unit")
    scale, dims = _resolve(unit)
    unit = _ALIASES.get(unit, unit)
    return Quantity(float(value), unit, dims)


def energy(value: float, unit: str = "cm^-1") -> Quantity:
    return Quantity(value, unit)
