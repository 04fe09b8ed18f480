"""Line-oriented input parsing and exact output formatting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numerics.approx import ExactSource
from .numerics.trig import TrigProductSource, degrees_cos, degrees_sin, exact_cos_pi
from .snap import SnapResult

KINDS = ("geo", "spherical", "cartesian")


class InputError(ValueError):
    """A malformed or out-of-range input line."""


def parse_number(token: str) -> Fraction:
    """Exact value of a decimal (``-0.25``, ``1e-3``) or rational (``3/5``) token."""
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a finite decimal or rational number: {token!r}") from None
    return value


def _trig(*factors: Fraction):
    # products of Niven values stay exact, everything else is enclosed on demand
    exact = [exact_cos_pi(f) for f in factors]
    if all(v is not None for v in exact):
        out = Fraction(1)
        for v in exact:
            out *= v
        return ExactSource(out)
    return TrigProductSource(tuple(factors))


def geo_sources(lat: Fraction, lon: Fraction) -> tuple:
    """``(cos lat cos lon, cos lat sin lon, sin lat)`` for angles in degrees."""
    if not -90 <= lat <= 90:
        raise InputError(f"latitude {lat} outside [-90, 90]")
    if not -180 <= lon <= 180:
        raise InputError(f"longitude {lon} outside [-180, 180]")
    return (
        _trig(degrees_cos(lat), degrees_cos(lon)),
        _trig(degrees_cos(lat), degrees_sin(lon)),
        _trig(degrees_sin(lat)),
    )


def spherical_sources(theta: Fraction, phi: Fraction) -> tuple:
    """Polar angle ``theta`` from +z, azimuth ``phi`` from +x, both in degrees."""
    return (
        _trig(degrees_sin(theta), degrees_cos(phi)),
        _trig(degrees_sin(theta), degrees_sin(phi)),
        _trig(degrees_cos(theta)),
    )


@dataclass(frozen=True)
class InputRecord:
    kind: str
    values: tuple[Fraction, ...]
    raw: str

    def sources(self) -> tuple:
        if self.kind == "geo":
            return geo_sources(*self.values)
        if self.kind == "spherical":
            return spherical_sources(*self.values)
        return tuple(ExactSource(v) for v in self.values)


def read_record(line: str, kind: str, d: int | None = None) -> InputRecord:
    if kind not in KINDS:
        raise InputError(f"unknown input kind {kind!r}")
    tokens = line.replace(",", " ").split()
    want = 2 if kind != "cartesian" else d
    if want is not None and len(tokens) != want:
        raise InputError(f"expected {want} values for {kind} input, got {len(tokens)}")
    if kind == "cartesian" and len(tokens) < 2:
        raise InputError("cartesian input needs at least 2 coordinates")
    values = tuple(parse_number(t) for t in tokens)
    rec = InputRecord(kind, values, line)
    if kind == "geo":
        geo_sources(*values)  # range check up front
    return rec


def parse_record(line: str, kind: str, d: int | None = None) -> tuple:
    """Vector of ApproxSources for one input line."""
    return read_record(line, kind, d).sources()


def is_blank(line: str) -> bool:
    s = line.strip()
    return not s or s.startswith("#")


# -- output -----------------------------------------------------------------

FORMATS = ("fractions", "common", "decimal", "stats")


@dataclass(frozen=True)
class OutputFormat:
    kind: str
    digits: int = 0

    @classmethod
    def parse(cls, text: str) -> OutputFormat:
        name, _, arg = text.partition(":")
        if name not in FORMATS:
            raise ValueError(f"unknown output format {text!r}")
        if name == "decimal":
            if not arg.isdigit():
                raise ValueError("decimal output needs a digit count, e.g. decimal:10")
            return cls(name, int(arg))
        if arg:
            raise ValueError(f"format {name} takes no argument")
        return cls(name)


def format_decimal(value: Fraction, digits: int) -> str:
    """Correctly rounded (half to even) fixed-point rendering; never prints ``-0``."""
    scaled = round(Fraction(value) * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def format_result(r: SnapResult, fmt: OutputFormat | str = "common") -> str:
    if isinstance(fmt, str):
        fmt = OutputFormat.parse(fmt)
    coords: Sequence[Fraction] = r.point.coords
    if fmt.kind == "fractions":
        return " ".join(f"{c.numerator}/{c.denominator}" for c in coords)
    if fmt.kind == "common":
        return " ".join(str(n) for n in (*r.numerators, r.denominator))
    if fmt.kind == "decimal":
        return " ".join(format_decimal(c, fmt.digits) for c in coords)
    return f"{r.strategy.value}\t{r.common_denominator_bits}\t{float(r.certified_error):.6e}"
