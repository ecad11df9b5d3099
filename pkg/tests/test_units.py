import math

import pytest
from hypothesis import given, strategies as st

from excitonsearch.errors import DimensionMismatch, NegativeTemperature
from excitonsearch.units import (
    ENERGY,
    HBAR,
    K_B,
    RATE,
    Quantity,
    angular_frequency,
    convert,
    parse_quantity,
    require,
    thermal_energy,
)


def test_wavenumber_to_mev():
    # 1 cm^-1 = h c / (1 cm) = 0.12398 meV
    assert convert(Quantity(1.0, "cm^-1"), "meV").magnitude == pytest.approx(0.1239842, rel=1e-6)


def test_ev_to_wavenumber():
    assert Quantity(0.004, "eV").value_in("cm^-1") == pytest.approx(32.26, abs=0.01)


def test_mismatched_dimensions():
    with pytest.raises(DimensionMismatch):
        convert(Quantity(1.0, "K"), "meV")
    with pytest.raises(DimensionMismatch):
        Quantity(1.0, "s") + Quantity(1.0, "J")


def test_thermal_energy():
    # k_B * 30 K in meV
    assert thermal_energy(Quantity(30, "K")).magnitude == pytest.approx(30 * K_B / 1.602176634e-22)
    assert thermal_energy(Quantity(0, "K")).magnitude == 0
    with pytest.raises(NegativeTemperature):
        thermal_energy(Quantity(-1, "K"))
    with pytest.raises(DimensionMismatch):
        thermal_energy(Quantity(1, "meV"))


def test_angular_frequency():
    w = angular_frequency(Quantity(HBAR, "J"))
    assert w.magnitude == pytest.approx(1.0)


def test_parse_quantity_aliases():
    assert parse_quantity("50 cm-1").unit == "cm^-1"
    assert parse_quantity("1e15 cm^-3").si == pytest.approx(1e21)
    assert parse_quantity("1283 kg m^-3").si == 1283
    with pytest.raises(ValueError):
        parse_quantity("12")
    with pytest.raises(DimensionMismatch):
        parse_quantity("3 furlongs")


def test_algebra_dims():
    rate = Quantity(1.0, "J") / Quantity(HBAR, "J s")
    assert rate.dims == RATE
    assert require(Quantity(2.0, "meV"), ENERGY) == pytest.approx(2e-3 * 1.602176634e-19)
    with pytest.raises(TypeError):
        require(1.0, ENERGY)


@given(st.floats(1e-6, 1e6), st.sampled_from(["J", "eV", "meV", "cm^-1"]), st.sampled_from(["J", "eV", "meV", "cm^-1"]))
def test_round_trip(x, a, b):
    q = Quantity(x, a)
    assert convert(convert(q, b), a).magnitude == pytest.approx(x, rel=1e-12)


@given(st.floats(0, 1e4))
def test_thermal_energy_linear(T):
    assert thermal_energy(Quantity(2 * T, "K")).magnitude == pytest.approx(2 * thermal_energy(Quantity(T, "K")).magnitude)
    assert math.isfinite(thermal_energy(Quantity(T, "K")).magnitude)
