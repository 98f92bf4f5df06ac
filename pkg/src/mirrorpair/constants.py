"""Fixed CODATA 2018 constants (SI). Not configurable, so results are reproducible."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    c: float = 299792458.0
    hbar: float = 1.054571817e-34
    G: float = 6.67430e-11
    g0: float = 9.80665


CONSTANTS = Constants()

C = CONSTANTS.c
HBAR = CONSTANTS.hbar
G = CONSTANTS.G
G0 = CONSTANTS.g0
