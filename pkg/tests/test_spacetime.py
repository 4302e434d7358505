import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relqc import spacetime as stime
from relqc.spacetime import Geometry, Interval, SpacetimeEvent as E

reals = st.floats(-50, 50, allow_nan=False)
events = st.builds(E, reals, reals)


@pytest.mark.parametrize(
    "a, b, want",
    [
        (E(0, 0), E(0, 5), Interval.TIMELIKE),
        (E(0, 0), E(3, 3), Interval.LIGHTLIKE),
        (E(0, 1), E(2, 1), Interval.SPACELIKE),  # Bob and B' at t0
    ],
)
def test_classify(a, b, want):
    assert stime.classify(a, b) is want


@given(events, events)
def test_classify_symmetric(a, b):
    assert stime.classify(a, b) == stime.classify(b, a)


@pytest.mark.parametrize("src, dst, want", [(0.0, 1.0, 1.0), (0.4, 0.4, 0.0), (0.0, 2.0, 2.0)])
def test_transit_time(src, dst, want):
    assert stime.transit_time(src, dst) == want


def test_earliest_assembly_trivial_and_empty():
    assert stime.earliest_assembly([E(0, 0)], 0) == 0
    with pytest.raises(ValueError):
        stime.earliest_assembly([], 0)


@given(st.lists(events, min_size=1, max_size=6), reals)
def test_earliest_assembly_lower_bound(sources, at):
    t = stime.earliest_assembly(sources, at)
    assert t >= max(s.t for s in sources)
    if all(s.x == at for s in sources):
        assert t == max(s.t for s in sources)


@pytest.mark.parametrize(
    "arrival, ok",
    [
        (E(0, 2), True),
        (E(0, 1.5), False),  # superluminal
        (E(0, 2.5), False),  # late
    ],
)
def test_within_window(arrival, ok):
    assert stime.within_window(arrival, E(1, 1)) is ok


@given(events, st.floats(-20, 20, allow_nan=False))
def test_within_window_implies_lightlike(claim, dx):
    arrival = E(claim.x + dx, claim.t + abs(dx))
    assert stime.within_window(arrival, claim)
    assert stime.classify(claim, arrival) is Interval.LIGHTLIKE


def test_direction_resolves_mirror_emitter():
    # receiver at 1.5 from x_a = 1; an emitter at 2.0 is equally far away
    arr = E(1.5, 1.5)
    assert stime.within_window(arr, E(1.0, 1.0))
    assert not stime.consistent_arrival(arr, stime.direction(2.0, 1.5), E(1.0, 1.0))
    assert stime.consistent_arrival(arr, stime.direction(1.0, 1.5), E(1.0, 1.0))


@pytest.mark.parametrize("d", [1.0, 2.5, 7.0])
@pytest.mark.parametrize("colocated, want", [(False, 3), (True, 2)])
def test_eve_assembly_time(d, colocated, want):
    g = Geometry.default(d, colocated_bob_agent=colocated)
    assert stime.eve_assembly_time(g) == pytest.approx(want * d, abs=1e-12)


@pytest.mark.parametrize("d", [1.0, 2.5, 7.0])
def test_no_position_beats_the_bound(d):
    g = Geometry.default(d)
    src = list(stime.eve_sources(g).values())
    grid = np.linspace(g.x_b - d, g.x_bp + d, 2001)
    best = min(stime.earliest_assembly(src, x) for x in grid)
    # the only faster spot is x_a itself, reachable only by a colocated agent
    assert best == pytest.approx(2 * d)
    sites = [g.x_b, g.x_bp]
    assert min(stime.earliest_assembly(src, x) for x in sites) == pytest.approx(3 * d)
    off_centre = [x for x in grid if abs(x - g.x_a) > 0.25 * d]
    assert min(stime.earliest_assembly(src, x) for x in off_centre) > 2 * d


def test_available_pieces_over_time(geom):
    at2 = stime.available_pieces(geom, 2.0)
    assert at2[0.0] == {"state_b", "beta", "alpha"}
    assert at2[2.0] == {"state_psi", "alpha"}
    at3 = stime.available_pieces(geom, 3.0)
    assert at3[0.0] == set(stime.EVE_PIECES)


class TestGeometry:
    def test_default(self):
        g = Geometry.default(2.0)
        assert (g.x_b, g.x_a, g.x_bp, g.t0, g.d) == (0.0, 2.0, 4.0, 2.0, 2.0)
        assert g.site("B1") == 1.0 and g.site("B2") == 3.0

    @pytest.mark.parametrize(
        "kw",
        [
            dict(x_b=0, x_a=1, x_bp=3),
            dict(x_b=1, x_a=1, x_bp=1),
            dict(receiver_sites={"A1": 0.5, "A2": 1.5, "B1": 1.2, "B2": 1.5}),
            dict(receiver_sites={"A1": 0.5}),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            Geometry(**kw)

    def test_dict_round_trip(self):
        g = Geometry.default(2.5, radius=0.5, colocated_bob_agent=True)
        assert Geometry.from_dict(g.to_dict()) == g
        assert Geometry.from_dict({"d": 2.5, "radius": 0.5, "colocated_bob_agent": True}) == g

    def test_from_dict_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown"):
            Geometry.from_dict({"d": 1, "bogus": 2})

    def test_to_dict_is_a_copy(self):
        g = Geometry()
        g.to_dict()["receiver_sites"]["A1"] = 99
        assert g.to_dict()["receiver_sites"]["A1"] == 0.5

    def test_colocated_receiver(self):
        g = Geometry.default(1.0, colocated_bob_agent=True)
        assert g.bob_receiver("B2") == g.x_a
        assert g.bob_assembly_sites() == (0.0, 2.0, 1.0)
