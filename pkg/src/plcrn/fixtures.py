"""Worked example networks shipped with the package."""

from __future__ import annotations

from importlib import resources
from typing import Sequence

from .linalg import as_fraction
from .model import KineticSystem
from .parser import parse_network

FIXTURES = ("carbon_cycle", "toy", "reversible")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return resources.files("plcrn").joinpath("data", f"{name}.crn").read_text(encoding="utf-8")


def fixture_path(name: str):
    fixture_text(name)
    return resources.files("plcrn").joinpath("data", f"{name}.crn")


def load_fixture(name: str) -> KineticSystem:
    return parse_network(fixture_text(name))


def carbon_cycle(f: Sequence = (1, 2, 1, 1), k: Sequence[float] = (1, 1, 1, 1)) -> KineticSystem:
    """Carbon cycle with kinetic orders ``f = (f11, f12, f21, f22)``.

    f11, f21 are the orders of X1, X2 in R1 and f12, f22 those in R2.
    """
    f11, f12, f21, f22 = (as_fraction(v) for v in f)
    text = "\n".join([
        "species X1 X2 X3",
        f"reaction R1: X1 + 2 X2 -> 2 X1 + X2 ; k = {float(k[0])!r}",
        f"reaction R2: X1 + X2 -> 2 X2 ; k = {float(k[1])!r}",
        f"reaction R3: X2 -> X3 ; k = {float(k[2])!r}",
        f"reaction R4: X3 -> X2 ; k = {float(k[3])!r}",
        f"orders R1: X1 = {f11}, X2 = {f21}",
        f"orders R2: X1 = {f12}, X2 = {f22}",
    ])
    return parse_network(text)


def toy_system(k: Sequence[float] = (1, 1, 1, 1)) -> KineticSystem:
    return load_fixture("toy").with_rates(k)


def reversible_pair(k: Sequence[float] = (2, 6)) -> KineticSystem:
    return load_fixture("reversible").with_rates(k)
