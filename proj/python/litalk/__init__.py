"""Rolling-shutter LED link: packet codec, frame synthesis, decoding and ranging."""

from ._litalk import (
    LitalkError,
    RangeModel,
    band_width_px,
    build_packet,
    conventional_distance,
    decodability_bound_px,
    decode_frame,
    expected_blob_diameter_px,
    fit_regression,
    packet_size,
    parse_packet,
    read_pgm,
    synthesize_frame,
    write_pgm,
)

__all__ = [
    "LitalkError",
    "RangeModel",
    "band_width_px",
    "build_packet",
    "conventional_distance",
    "decodability_bound_px",
    "decode_frame",
    "expected_blob_diameter_px",
    "fit_regression",
    "packet_size",
    "parse_packet",
    "read_pgm",
    "synthesize_frame",
    "write_pgm",
]
