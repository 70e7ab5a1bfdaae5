"""Builders for the worked example systems and a seeded random-system generator.

All numeric behavior data are ``fractions.Fraction`` so that equality of
behaviors, and hence every quotient built from them, is exact.

Grid behaviors are labelled ``(("p", p), ("w", w))``; trajectory behaviors
are labelled ``(("T", (T_0, ..., T_h)),)``, one series per state variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .core import BehaviorType, MereologyError, EmptySystemError, Part, bottom, join, part_from_observation, top
from .logic import Constraint

Number = Union[int, str, Fraction]

MAX_ECOSYSTEM_HORIZON = 10

DEFAULT_BICYCLE_RATIO = Fraction(2)
DEFAULT_WATER = dict(k=Fraction(1, 2), big_r=Fraction(20), init_temps=tuple(Fraction(t) for t in range(0, 41, 5)), horizon=6)
DEFAULT_ECOSYSTEM = dict(
    d_f=Fraction(1, 10),
    b_r=Fraction(1, 5),
    c_f=Fraction(1, 100),
    c_r=Fraction(1, 100),
    horizon=5,
)


def rational(x: Number) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; pass an int, str or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class GridAxis:
    name: str
    min: Fraction
    max: Fraction
    step: Fraction = Fraction(1)

    def __post_init__(self):
        for attr in ("min", "max", "step"):
            object.__setattr__(self, attr, rational(getattr(self, attr)))
        if self.step <= 0:
            raise MereologyError(f"grid step for {self.name} must be positive")
        if self.min > self.max:
            raise MereologyError(f"grid range for {self.name} is empty: {self.min} > {self.max}")
        if ((self.max - self.min) / self.step).denominator != 1:
            raise MereologyError(f"grid step for {self.name} does not divide its range")

    def values(self) -> list[Fraction]:
        n = int((self.max - self.min) / self.step)
        return [self.min + i * self.step for i in range(n + 1)]


@dataclass(frozen=True)
class GridSpec:
    """Rectangular rational grid, enumerated row-major in axis order, then filtered."""

    axes: tuple[GridAxis, ...]
    filter: Optional[Callable[[Mapping[str, Fraction]], bool]] = None

    @classmethod
    def of(cls, filter=None, **ranges):
        """``GridSpec.of(p=(-5, 5, "1/2"), w=(-5, 5, "1/2"))``"""
        return cls(tuple(GridAxis(name, *r) for name, r in ranges.items()), filter)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def points(self) -> list[tuple]:
        names = self.variables
        out = []
        for values in itertools.product(*(a.values() for a in self.axes)):
            point = tuple(zip(names, values))
            if self.filter is None or self.filter(dict(point)):
                out.append(point)
        if not out:
            raise EmptySystemError("grid is empty after filtering")
        return out


Update = Callable[[Mapping[str, Fraction]], Mapping[str, Fraction]]


@dataclass(frozen=True)
class SimSpec:
    """Deterministic discrete-time dynamics run from every initial grid point."""

    init: GridSpec
    update: Update
    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise MereologyError("simulation horizon must be at least 1")

    @property
    def state(self) -> tuple[str, ...]:
        return self.init.variables

    def trajectories(self) -> list[tuple]:
        out = []
        for point in self.init.points():
            state = dict(point)
            series = {name: [state[name]] for name in self.state}
            for _ in range(self.horizon):
                try:
                    nxt = self.update(state)
                except ZeroDivisionError:
                    raise MereologyError(f"update divides by zero from state {state}") from None
                state = {name: rational(nxt[name]) for name in self.state}
                for name in self.state:
                    series[name].append(state[name])
            out.append(tuple((name, tuple(series[name])) for name in self.state))
        return out


@dataclass
class SystemModel:
    """A behavior type with a named family of its parts."""

    system: BehaviorType
    parts: dict[str, Part]
    params: dict[str, Fraction] = field(default_factory=dict)
    constraints: dict[str, Constraint] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, p in self.parts.items():
            if p.system is not self.system and p.system != self.system:
                raise MereologyError(f"part {name} belongs to a different system")

    def part(self, name: str) -> Part:
        return self.parts[name]


ModelBundle = SystemModel


def _with_bounds(system: BehaviorType, parts: dict) -> dict:
    out = {"Top": top(system), "Bottom": bottom(system)}
    out.update(parts)
    return out


def project(system: BehaviorType, names: Sequence[str], name: Optional[str] = None) -> Part:
    names = tuple(names)
    return part_from_observation(system, lambda b: tuple(kv for kv in b if kv[0] in names), name=name)


def default_bicycle_grid() -> GridSpec:
    return GridSpec.of(p=(-5, 5, "1/2"), w=(-5, 5, "1/2"))


def build_bicycle(r: Number = DEFAULT_BICYCLE_RATIO, grid: Optional[GridSpec] = None) -> SystemModel:
    """Grid points ``(p, w)`` with ``w >= r p``; parts ``Pedal`` and ``Wheel`` are the projections."""
    r = rational(r)
    grid = grid or default_bicycle_grid()
    if set(grid.variables) != {"p", "w"}:
        raise MereologyError("bicycle grid must range over p and w")
    inner = grid.filter

    def admissible(v):
        return v["w"] >= r * v["p"] and (inner is None or inner(v))

    system = BehaviorType(GridSpec(grid.axes, admissible).points(), id="Bicycle")
    parts = {"Pedal": project(system, ["p"], "Pedal"), "Wheel": project(system, ["w"], "Wheel")}
    return SystemModel(system, _with_bounds(system, parts), {"r": r})


def water_update(k: Fraction, big_r: Fraction) -> Update:
    return lambda s: {"T": s["T"] + k * (big_r - s["T"])}


def _time_parts(system, var, prefix, horizon):
    return {
        f"{prefix}_{t}": part_from_observation(system, lambda b, t=t: dict(b)[var][t], name=f"{prefix}_{t}")
        for t in range(horizon + 1)
    }


def build_water(
    k: Number = DEFAULT_WATER["k"],
    big_r: Number = DEFAULT_WATER["big_r"],
    init_temps: Iterable[Number] = DEFAULT_WATER["init_temps"],
    horizon: int = DEFAULT_WATER["horizon"],
    windows: Iterable[Iterable[int]] = (),
) -> SystemModel:
    """Trajectories of ``T_{t+1} = T_t + k (R - T_t)`` from each initial temperature.

    Parts ``Water_t`` observe the temperature at time ``t``; each window ``D``
    adds a part ``Water_d1_d2...`` observing the temperatures during ``D``.
    """
    k, big_r = rational(k), rational(big_r)
    temps = [rational(t) for t in init_temps]
    if not temps:
        raise EmptySystemError("at least one initial temperature is required")
    if len(set(temps)) != len(temps):
        raise MereologyError("initial temperatures must be distinct")
    sim = SimSpec(_listed_grid("T", temps), water_update(k, big_r), horizon)
    system = BehaviorType(sim.trajectories(), id="Water")
    parts = _time_parts(system, "T", "Water", horizon)
    for window in windows:
        ts = tuple(sorted(set(window)))
        if not ts or ts[0] < 0 or ts[-1] > horizon:
            raise MereologyError(f"window {ts} outside 0..{horizon}")
        name = "Water_" + "_".join(map(str, ts))
        parts[name] = part_from_observation(
            system, lambda b, ts=ts: tuple(dict(b)["T"][t] for t in ts), name=name
        )
    return SystemModel(system, _with_bounds(system, parts), {"k": k, "R": big_r})


def _listed_grid(name: str, values: list[Fraction]) -> GridSpec:
    # a value list is the bounding grid at the gcd step, filtered to the list
    lo, hi = min(values), max(values)
    step = Fraction(0)
    for v in values:
        step = _gcd_fraction(step, v - lo)
    wanted = set(values)
    return GridSpec((GridAxis(name, lo, hi, step or 1),), lambda v: v[name] in wanted)


def _gcd_fraction(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def lotka_volterra_update(d_f, b_r, c_f, c_r) -> Update:
    def step(s):
        f, r = s["f"], s["r"]
        return {"f": (1 - d_f) * f + c_f * r * f, "r": (1 + b_r) * r - c_r * r * f}

    return step


def default_ecosystem_grid() -> GridSpec:
    return GridSpec.of(f=(0, 30, 10), r=(0, 30, 10))


def build_ecosystem(
    d_f: Number = DEFAULT_ECOSYSTEM["d_f"],
    b_r: Number = DEFAULT_ECOSYSTEM["b_r"],
    c_f: Number = DEFAULT_ECOSYSTEM["c_f"],
    c_r: Number = DEFAULT_ECOSYSTEM["c_r"],
    init_grid: Optional[GridSpec] = None,
    horizon: int = DEFAULT_ECOSYSTEM["horizon"],
    deadlines: Iterable[int] = (),
) -> SystemModel:
    """Lotka-Volterra fox/rabbit trajectories from each initial ``(f, r)`` grid point.

    Parts: ``Fox_t`` and ``Rabbit_t`` per time, ``Fox`` and ``Rabbit`` for the
    whole series, and ``Rabbit_from_d`` (the join of ``Rabbit_t`` for
    ``d <= t <= horizon``) for each requested deadline ``d``.
    """
    if horizon > MAX_ECOSYSTEM_HORIZON:
        raise MereologyError(f"horizon {horizon} exceeds the cap of {MAX_ECOSYSTEM_HORIZON}")
    params = {k: rational(v) for k, v in dict(d_f=d_f, b_r=b_r, c_f=c_f, c_r=c_r).items()}
    grid = init_grid or default_ecosystem_grid()
    if grid.variables != ("f", "r"):
        raise MereologyError("ecosystem initial grid must range over f then r")
    sim = SimSpec(grid, lotka_volterra_update(**params), horizon)
    system = BehaviorType(sim.trajectories(), id="Ecosystem")
    parts = {}
    parts.update(_time_parts(system, "f", "Fox", horizon))
    parts.update(_time_parts(system, "r", "Rabbit", horizon))
    parts["Fox"] = project(system, ["f"], "Fox")
    parts["Rabbit"] = project(system, ["r"], "Rabbit")
    for d in deadlines:
        if not 0 <= d <= horizon:
            raise MereologyError(f"deadline {d} outside 0..{horizon}")
        name = f"Rabbit_from_{d}"
        acc = parts[f"Rabbit_{d}"]
        for t in range(d + 1, horizon + 1):
            acc = join(acc, parts[f"Rabbit_{t}"])
        parts[name] = Part(system, BehaviorType(acc.codomain.labels, id=name), acc.map, name=name)
    return SystemModel(system, _with_bounds(system, parts), params)


def random_system(seed, size: int, num_parts: int) -> SystemModel:
    """Opaque-token system with ``num_parts`` random surjections plus ``Top`` and ``Bottom``.

    Deterministic in ``seed`` (anything ``numpy.random.default_rng`` accepts).
    """
    if not 1 <= size <= 8:
        raise MereologyError("random system size must be in 1..8")
    if not 2 <= num_parts <= 4:
        raise MereologyError("random system part count must be in 2..4")
    rng = np.random.default_rng(seed)
    system = BehaviorType([f"b{i}" for i in range(size)], id=f"random-{seed}")
    parts = {}
    for i in range(1, num_parts + 1):
        k = int(rng.integers(1, size + 1))
        while True:
            mapping = rng.integers(0, k, size)
            if len(set(mapping.tolist())) == k:
                break
        name = f"P{i}"
        codomain = BehaviorType([f"{name}.{j}" for j in range(k)], id=name)
        parts[name] = Part(system, codomain, mapping, name=name)
    return SystemModel(system, _with_bounds(system, parts), {})
