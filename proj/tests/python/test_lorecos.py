import math
import os
import struct

import pytest

import lorecos

SCENARIO_DIR = os.environ.get(
    "LORECOS_SCENARIO_DIR",
    os.path.join(os.path.dirname(__file__), "..", "..", "scenarios"),
)


def test_rreq_hex_vector_and_round_trip():
    p = lorecos.make_rreq(26, 25, 7)
    p.set_location(lorecos.Position(10, 20))
    data = lorecos.encode(p)
    assert data.hex() == "0101000000000007000000190000001a4120000041a00000"
    assert data[16:24] == struct.pack(">ff", 10.0, 20.0)
    back = lorecos.decode(data)
    assert back == p
    assert back.L and not back.H
    assert back.type == lorecos.PacketType.RREQ


def test_decode_rejects_truncated_and_flipped_reserved_bits():
    with pytest.raises(lorecos.DecodeError):
        lorecos.decode(b"\x01")
    data = bytearray(lorecos.encode(lorecos.make_connect(26, 25)))
    data[3] |= 0x01
    with pytest.raises(ValueError):
        lorecos.decode(bytes(data))


def test_event_payload_round_trip():
    e = lorecos.make_event(26, 25, 3, b"\xaa\xbb")
    assert lorecos.decode(lorecos.encode(e)) == e


def test_radio_range_is_inclusive():
    a = lorecos.Position(0, 0)
    assert lorecos.in_range(a, lorecos.Position(12, 0))
    assert not lorecos.in_range(a, lorecos.Position(12.001, 0))


def test_centroid_and_finalize():
    pts = [lorecos.Position(0, 0), lorecos.Position(10, 0), lorecos.Position(10, 10)]
    c = lorecos.centroid(pts)
    assert math.isclose(c.x, 20 / 3) and math.isclose(c.y, 10 / 3)
    kind, pos = lorecos.finalize_estimate([(1, pts[0]), (2, pts[1])])
    assert kind == "CLOC" and tuple(pos) == (5.0, 0.0)
    kind, pos = lorecos.finalize_estimate([(1, pts[2])])
    assert kind == "HLOC" and pos == pts[2]
    kind, pos = lorecos.finalize_estimate([], lorecos.Position(3, 4))
    assert kind == "DLOC" and tuple(pos) == (3.0, 4.0)
    assert lorecos.finalize_estimate([]) is None


def test_grid_and_mobility():
    grid = lorecos.build_grid()
    assert len(grid) == 25
    assert grid[0][0] == 1 and tuple(grid[0][1]) == (0.0, 40.0)
    assert lorecos.topology_kn_set(2) == {7, 9, 17, 19}
    assert tuple(lorecos.position_at(0)) == (15.0, 15.0)
    assert tuple(lorecos.position_at(333)) == (16.0, 15.0)


def test_metrics():
    assert lorecos.mae([1.0, None, 3.0]) == 2.0
    assert math.isclose(lorecos.rmse([3.0, 4.0]), math.sqrt(12.5))
    assert lorecos.mae([None]) is None


def test_run_canonical_topology_one():
    s = lorecos.run_canonical(1, "lorecos")
    assert s["success_count"] == 50
    assert s["cloc_pct"] == 100.0
    assert len(s["records"]) == 50
    errors = [r["error_m"] for r in s["records"]]
    assert math.isclose(lorecos.mae(errors), s["mae_m"], abs_tol=5e-5)
    assert s["packets"]["total"] == sum(v for k, v in s["packets"].items() if k != "total")


def test_run_scenario_file_matches_canonical():
    path = os.path.join(SCENARIO_DIR, "topology1-control.ini")
    from_file = lorecos.run_scenario(path, duration_ms=10000)
    canonical = lorecos.run_canonical(1, "control", 10000)
    assert from_file["packets"] == canonical["packets"]
    assert from_file["records"] == canonical["records"]


def test_scenario_errors_are_value_errors():
    with pytest.raises(lorecos.ScenarioError):
        lorecos.parse_scenario("[field]\nwidth = abc\n")
    with pytest.raises(ValueError):
        lorecos.run_canonical(1, "magic")
    echo = lorecos.parse_scenario(lorecos.format_canonical(3, "lorecos"))
    assert echo["kn_ids"] == [11, 12, 13, 14, 15]
