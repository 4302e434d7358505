"""1+1D Minkowski geometry with c = 1.

All protocol timing reduces to three facts: a signal from ``(x, t)`` reaches
``y`` at ``t + |y - x|``; a receiver sees which side a signal came from; and a
set of facts can only be combined once every one of them has reached the same
place.
"""
from __future__ import annotations

import copy
import enum
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple, Sequence

TIME_TOL = 1e-9


class SpacetimeEvent(NamedTuple):
    x: float
    t: float


class Interval(str, enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


def classify(e1: SpacetimeEvent, e2: SpacetimeEvent, tol: float = TIME_TOL) -> Interval:
    s = (e2.t - e1.t) ** 2 - (e2.x - e1.x) ** 2
    if abs(s) <= tol:
        return Interval.LIGHTLIKE
    return Interval.TIMELIKE if s > 0 else Interval.SPACELIKE


def transit_time(src: float, dst: float) -> float:
    return abs(dst - src)


def arrival(emitted: SpacetimeEvent, at: float) -> SpacetimeEvent:
    return SpacetimeEvent(at, emitted.t + transit_time(emitted.x, at))


def earliest_assembly(sources: Iterable[SpacetimeEvent], at: float) -> float:
    """Earliest time every source can have reached position ``at``."""
    sources = list(sources)
    if not sources:
        raise ValueError("earliest_assembly needs at least one source")
    return max(s.t + abs(at - s.x) for s in sources)


def best_assembly(sources: Iterable[SpacetimeEvent], sites: Iterable[float]) -> tuple[float, float]:
    """``(time, site)`` minimising :func:`earliest_assembly` over ``sites``."""
    sources = list(sources)
    return min((earliest_assembly(sources, s), s) for s in sites)


def within_window(arrival: SpacetimeEvent, sender_claim: SpacetimeEvent, tol: float = TIME_TOL) -> bool:
    """True iff ``arrival`` is exactly light-like from the claimed emission."""
    expected = sender_claim.t + abs(arrival.x - sender_claim.x)
    return abs(arrival.t - expected) <= tol


def direction(src: float, dst: float) -> int:
    """Propagation direction of a signal: +1 rightward, -1 leftward, 0 local."""
    if abs(dst - src) <= TIME_TOL:
        return 0
    return 1 if dst > src else -1


def consistent_arrival(
    arrival: SpacetimeEvent, heading: int, sender_claim: SpacetimeEvent, tol: float = TIME_TOL
) -> bool:
    """Light-like timing plus the side the signal came in from.

    In one spatial dimension the timing check alone admits a mirror emitter on
    the far side of the receiver; the propagation direction removes it.
    """
    return within_window(arrival, sender_claim, tol) and heading == direction(sender_claim.x, arrival.x)


class Site(str, enum.Enum):
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"


@dataclass(frozen=True)
class Geometry:
    """Collinear layout ``x_b < x_a < x_bp`` with Alice at the midpoint.

    ``receiver_sites`` holds positions of A1, A2 (Alice's agents receiving
    Bob's carrier) and B1, B2 (Bob's agents receiving Alice's reveal).
    """

    x_b: float = 0.0
    x_a: float = 1.0
    x_bp: float = 2.0
    t0: float = 1.0
    receiver_sites: Mapping[str, float] = field(
        default_factory=lambda: {"A1": 0.5, "A2": 1.5, "B1": 0.5, "B2": 1.5}
    )
    colocated_bob_agent: bool = False
    position_verified: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "receiver_sites", {k: float(v) for k, v in dict(self.receiver_sites).items()})
        self.validate()

    @classmethod
    def default(cls, d: float = 1.0, *, radius: float | None = None, **kw) -> "Geometry":
        """``x_b = 0``, ``x_a = d``, ``x_bp = 2d``, inputs at ``t0 = d``."""
        r = d / 2 if radius is None else radius
        sites = {"A1": d - r, "A2": d + r, "B1": d - r, "B2": d + r}
        return cls(x_b=0.0, x_a=d, x_bp=2 * d, t0=d, receiver_sites=sites, **kw)

    @property
    def d(self) -> float:
        return self.x_a - self.x_b

    def validate(self) -> None:
        if not (self.x_b < self.x_a < self.x_bp):
            raise ValueError("geometry requires x_b < x_a < x_bp")
        if not math.isclose(2 * self.x_a, self.x_bp + self.x_b, rel_tol=0, abs_tol=TIME_TOL):
            raise ValueError("geometry requires x_a to be the midpoint of x_b and x_bp")
        missing = {s.value for s in Site} - set(self.receiver_sites)
        if missing:
            raise ValueError(f"receiver_sites missing {sorted(missing)}")
        b1, b2 = self.receiver_sites["B1"], self.receiver_sites["B2"]
        if not (self.x_b <= b1 <= self.x_a):
            raise ValueError("B1 must lie between x_b and x_a")
        if not (self.x_a <= b2 <= self.x_bp):
            raise ValueError("B2 must lie between x_a and x_bp")

    def site(self, name: str | Site) -> float:
        return self.receiver_sites[Site(name).value]

    def bob_receiver(self, name: str | Site) -> float:
        """Where Alice's reveal is taken; the colocated agent takes it at x_a."""
        return self.x_a if self.colocated_bob_agent else self.site(name)

    def bob_assembly_sites(self) -> tuple[float, ...]:
        """Secure Bob-side sites able to pool information."""
        sites = (self.x_b, self.x_bp)
        return sites + (self.x_a,) if self.colocated_bob_agent else sites

    def with_(self, **changes) -> "Geometry":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        cached = self.__dict__.get("_dict")
        if cached is None:
            cached = asdict(self)
            cached["receiver_sites"] = dict(sorted(self.receiver_sites.items()))
            object.__setattr__(self, "_dict", cached)
        return copy.deepcopy(cached)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Geometry":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known - {"d", "radius"}
        if extra:
            raise ValueError(f"unknown geometry field(s): {sorted(extra)}")
        if "d" in data:
            kw = {k: v for k, v in data.items() if k in ("colocated_bob_agent", "position_verified")}
            return cls.default(float(data["d"]), radius=data.get("radius"), **kw)
        return cls(**dict(data))


# Where each element of the eavesdropper's set originates.
EVE_PIECES = ("state_b", "state_psi", "alpha", "beta")


def eve_sources(g: Geometry) -> dict[str, SpacetimeEvent]:
    return {
        "state_b": SpacetimeEvent(g.x_b, g.t0),
        "beta": SpacetimeEvent(g.x_b, g.t0),
        "state_psi": SpacetimeEvent(g.x_bp, g.t0),
        "alpha": SpacetimeEvent(g.x_a, g.t0),
    }


def eve_assembly_time(g: Geometry, pieces: Sequence[str] = EVE_PIECES) -> float:
    """Earliest time Bob's side can hold ``pieces`` together at one secure site."""
    src = eve_sources(g)
    return best_assembly([src[p] for p in pieces], g.bob_assembly_sites())[0]


def available_pieces(g: Geometry, at_time: float) -> dict[float, frozenset[str]]:
    """For each Bob assembly site, which pieces have arrived by ``at_time``."""
    src = eve_sources(g)
    return {
        site: frozenset(p for p, e in src.items() if e.t + abs(site - e.x) <= at_time + TIME_TOL)
        for site in g.bob_assembly_sites()
    }
