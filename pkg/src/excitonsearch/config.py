"""Scenario files.

A scenario is an INI file whose physical values carry explicit units, e.g.
``trap_depth = 50 cm^-1`` or ``E_LR = 0.004 eV``. Parsing failures raise
:class:`ConfigError` naming the file, section, key and line.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import ConfigError, DimensionMismatch
from .greens import PhononModel, SearchProblem
from .lattice import LatticeSpec, LricRing, PowerLawChain
from .rates import CarrierParams
from .units import ENERGY, LENGTH, MASS, MASS_DENSITY, NUMBER_DENSITY, TEMPERATURE, VELOCITY, Quantity, parse_quantity

SWEEP_VARIABLES = ("N", "mu", "T", "m", "p")


@dataclass
class Interpretation:
    hbar_reading: str = "A"
    broadening: Quantity = field(default_factory=lambda: Quantity(0.5, "cm^-1"))
    convention: str = "paper"


@dataclass
class Sweep:
    variable: str
    grid: list[float]


@dataclass
class ScenarioConfig:
    lattice: LatticeSpec
    phonons: PhononModel
    trap_depth: Quantity
    temperature: Quantity
    carriers: CarrierParams | None = None
    carrier_velocity: Quantity | None = None
    A_prime: float | None = None  # None: take it from the band-edge fit
    scatter_B: Quantity | None = None
    warm_temperature: Quantity | None = None
    shift_B: Quantity | None = None
    shift_dp: Quantity | None = None
    E0: Quantity | None = None  # when set, J is re-derived whenever mu or N changes
    sweep: Sweep | None = None
    interpretation: Interpretation = field(default_factory=Interpretation)
    source: str = "<memory>"

    def problem(self) -> SearchProblem:
        return SearchProblem(self.lattice, self.phonons, self.trap_depth)

    def with_lattice(self, **changes) -> ScenarioConfig:
        """Copy with lattice fields replaced, keeping E0 fixed if it was given."""
        lat = self.lattice
        if isinstance(lat, PowerLawChain) and self.E0 is not None and ("mu" in changes or "N" in changes):
            mu = changes.get("mu", lat.mu)
            N = changes.get("N", lat.N)
            new = PowerLawChain.from_band_edge(self.E0, mu, N, lat.delta_E)
        else:
            new = replace(lat, **changes)
        return replace(self, lattice=new)


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, text: str, source: str):
        self.p = parser
        self.lines = text.splitlines()
        self.source = source

    def _line(self, section: str, key: str) -> int | None:
        current = None
        for i, raw in enumerate(self.lines, start=1):
            s = raw.strip()
            if s.startswith("[") and s.endswith("]"):
                current = s[1:-1].strip()
            elif current == section and "=" in s and s.split("=", 1)[0].strip().lower() == key.lower():
                return i
        return None

    def fail(self, section: str, key: str, msg: str) -> ConfigError:
        line = self._line(section, key)
        where = f"{self.source}:{line}" if line else self.source
        return ConfigError(f"{where}: [{section}] {key}: {msg}")

    def has(self, section: str, key: str) -> bool:
        return self.p.has_option(section, key)

    def raw(self, section: str, key: str, default=None) -> str:
        if not self.p.has_option(section, key):
            if default is None:
                raise ConfigError(f"{self.source}: [{section}] {key}: missing")
            return default
        return self.p.get(section, key).strip()

    def quantity(self, section: str, key: str, dims, default: str | None = None) -> Quantity:
        text = self.raw(section, key, default)
        try:
            q = parse_quantity(text)
        except (ValueError, DimensionMismatch) as exc:
            raise self.fail(section, key, str(exc)) from None
        if q.dims != dims:
            raise self.fail(section, key, f"{text!r} has the wrong dimension")
        return q

    def optional_quantity(self, section: str, key: str, dims) -> Quantity | None:
        return self.quantity(section, key, dims) if self.has(section, key) else None

    def number(self, section: str, key: str, kind=float, default: str | None = None):
        text = self.raw(section, key, default)
        try:
            return kind(text)
        except ValueError:
            raise self.fail(section, key, f"expected a {kind.__name__}, got {text!r}") from None

    def choice(self, section: str, key: str, options, default: str) -> str:
        text = self.raw(section, key, default)
        if text not in options:
            raise self.fail(section, key, f"expected one of {', '.join(options)}, got {text!r}")
        return text


def _lattice(r: _Reader) -> tuple[LatticeSpec, Quantity | None]:
    family = r.choice("lattice", "family", ("power-law", "lric"), "power-law")
    N = r.number("lattice", "N", int)
    delta_E = r.quantity("lattice", "delta_E", ENERGY, "0 J")
    try:
        if family == "lric":
            J = r.quantity("lattice", "J", ENERGY)
            return LricRing(N, J, r.number("lattice", "m", int), delta_E), None
        mu = r.number("lattice", "mu", float)
        if r.has("lattice", "E0"):
            E0 = r.quantity("lattice", "E0", ENERGY)
            return PowerLawChain.from_band_edge(E0, mu, N, delta_E), E0
        return PowerLawChain(N, r.quantity("lattice", "J", ENERGY), mu, delta_E), None
    except ConfigError:
        raise
    except ValueError as exc:
        raise r.fail("lattice", "family", str(exc)) from None


def _phonons(r: _Reader) -> PhononModel:
    wD = r.quantity("phonons", "hbar_omega_D", ENERGY)
    v = r.quantity("phonons", "v", VELOCITY)
    if r.has("phonons", "E_LR"):
        return PhononModel(wD, v, r.quantity("phonons", "E_LR", ENERGY))
    if r.has("phonons", "E_D"):
        return PhononModel.from_deformation(wD, v, r.quantity("phonons", "E_D", ENERGY),
                                            r.quantity("phonons", "I", MASS))
    raise r.fail("phonons", "E_LR", "give E_LR or both E_D and I")


def _carriers(r: _Reader) -> CarrierParams | None:
    if not r.p.has_section("carriers"):
        return None
    s = "carriers"
    try:
        return CarrierParams(
            n_i=r.quantity(s, "n_i", NUMBER_DENSITY, "0 m^-3"),
            n_ex=r.quantity(s, "n_ex", NUMBER_DENSITY, "0 m^-3"),
            E_T=r.quantity(s, "E_T", ENERGY),
            E_b=r.quantity(s, "E_b", ENERGY, "0 J"),
            xi=r.quantity(s, "xi", MASS_DENSITY),
            d0=r.quantity(s, "d0", LENGTH),
            N_star=r.number(s, "N_star", int, "1"),
            m_e_star=r.quantity(s, "m_e_star", MASS, "1 m_e"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise r.fail(s, "E_T", str(exc)) from None


def _sweep(r: _Reader) -> Sweep | None:
    if not r.p.has_section("sweep"):
        return None
    var = r.choice("sweep", "variable", SWEEP_VARIABLES, "N")
    text = r.raw("sweep", "grid")
    try:
        grid = [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise r.fail("sweep", "grid", f"cannot parse {text!r}") from None
    if len(grid) < 2 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise r.fail("sweep", "grid", "grid must be strictly increasing with at least 2 points")
    if var in ("N", "m", "p") and any(g != int(g) for g in grid):
        raise r.fail("sweep", "grid", f"{var} values must be integers")
    if var in ("N", "m", "p"):
        grid = [int(g) for g in grid]
    return Sweep(var, grid)


def parse_config(text: str, source: str = "<string>") -> ScenarioConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keep E_LR, N etc. case-sensitive
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    r = _Reader(parser, text, source)
    for section in ("lattice", "phonons", "search"):
        if not parser.has_section(section):
            raise ConfigError(f"{source}: missing section [{section}]")
    lattice, E0 = _lattice(r)
    a_prime = r.raw("search", "A_prime", "fit")
    try:
        A_prime = None if a_prime == "fit" else float(a_prime)
    except ValueError:
        raise r.fail("search", "A_prime", f"expected 'fit' or a number, got {a_prime!r}") from None
    interp = Interpretation(
        hbar_reading=r.choice("interpretation", "hbar_reading", ("A", "B"), "A"),
        broadening=r.quantity("interpretation", "broadening", ENERGY, "0.5 cm^-1"),
        convention=r.choice("interpretation", "convention", ("paper", "minimal-image"), "paper"),
    )
    T = r.quantity("conditions", "T", TEMPERATURE, "5 K")
    return ScenarioConfig(
        lattice=lattice,
        phonons=_phonons(r),
        trap_depth=r.quantity("search", "trap_depth", ENERGY),
        temperature=T,
        carriers=_carriers(r),
        carrier_velocity=r.optional_quantity("carriers", "v", VELOCITY),
        A_prime=A_prime,
        scatter_B=r.optional_quantity("scattering", "B", ENERGY),
        warm_temperature=_warm(r),
        shift_B=r.optional_quantity("shift", "B", ENERGY),
        shift_dp=r.optional_quantity("shift", "trap_depth", ENERGY),
        E0=E0,
        sweep=_sweep(r),
        interpretation=interp,
        source=source,
    )


def _warm(r: _Reader) -> Quantity | None:
    """Warm-side condition: either an explicit k_B T energy or a temperature."""
    if r.has("scattering", "kT_warm"):
        return r.quantity("scattering", "kT_warm", ENERGY)
    return r.optional_quantity("scattering", "T_warm", TEMPERATURE)


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def preset_text(name: str = "naphthalene") -> str:
    return resources.files("excitonsearch.presets").joinpath(f"{name}.ini").read_text(encoding="utf-8")


def load_preset(name: str = "naphthalene") -> ScenarioConfig:
    return parse_config(preset_text(name), f"preset:{name}")
