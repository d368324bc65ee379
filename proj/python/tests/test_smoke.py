import numpy as np
import pytest

import litalk


def test_packet_round_trip():
    assert litalk.packet_size(8) == 23
    assert litalk.build_packet(0) == "1000101" + "10" * 8
    for value in (0x00, 0x5A, 0xFF):
        assert litalk.parse_packet(litalk.build_packet(value)) == value


def test_errors_are_raised():
    with pytest.raises(litalk.LitalkError):
        litalk.build_packet(0x1FF)
    with pytest.raises(litalk.LitalkError):
        litalk.parse_packet("10101")


def test_camera_numbers():
    assert litalk.band_width_px() == pytest.approx(12.0)
    assert litalk.decodability_bound_px() == pytest.approx(276.0)
    assert litalk.expected_blob_diameter_px(0.2, iso=800) > litalk.expected_blob_diameter_px(0.2)


def test_synthesize_and_decode(tmp_path):
    frame = litalk.synthesize_frame(0xA5, distance_m=0.1, noise=1.0, seed=3, phase_s=1e-4)
    assert frame.shape == (720, 1280)
    assert frame.dtype == np.uint8
    blobs = litalk.decode_frame(frame)
    assert len(blobs) == 1
    assert blobs[0]["payload"] == 0xA5
    assert litalk.conventional_distance(2 * blobs[0]["radius_px"]) == pytest.approx(0.1, rel=0.01)

    path = tmp_path / "frame.pgm"
    litalk.write_pgm(frame, str(path))
    assert np.array_equal(litalk.read_pgm(str(path)), frame)


def test_blank_frame_has_no_blobs():
    assert litalk.decode_frame(np.full((720, 1280), 10, dtype=np.uint8)) == []


def test_regression():
    distances = [0.1 * k for k in range(1, 11)]
    diameters = [litalk.expected_blob_diameter_px(d) for d in distances]
    model = litalk.fit_regression(distances, diameters)
    assert model.feature_kind == "reciprocal_diameter"
    assert model.trained_on == 10
    for d, px in zip(distances, diameters):
        assert model.predict(px) == pytest.approx(d, rel=1e-9)
