#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "litalk/camera.hpp"
#include "litalk/codec.hpp"
#include "litalk/decoder.hpp"
#include "litalk/error.hpp"
#include "litalk/frame.hpp"
#include "litalk/ranging.hpp"

namespace py = pybind11;
using namespace litalk;

namespace {

using Image = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Image to_array(const Frame& f) {
  Image out({f.height(), f.width()});
  std::memcpy(out.mutable_data(), f.pixels().data(), f.pixels().size());
  return out;
}

Frame from_array(const Image& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return Frame(w, h, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

camera::CameraParams camera_at(int iso, double readout_s) {
  camera::CameraParams cam;
  cam.iso = iso;
  cam.readout_time_s = readout_s;
  return cam;
}

camera::TxParams tx_at(double freq_hz, double duty) {
  camera::TxParams tx;
  tx.mod_freq_hz = freq_hz;
  tx.duty_cycle = duty;
  return tx;
}

}  // namespace

PYBIND11_MODULE(_litalk, m) {
  m.doc() = "Rolling-shutter LED link: packet codec, frame synthesis, decoding and ranging.";

  static py::exception<Error> error(m, "LitalkError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  m.def("packet_size", [](std::size_t bits) { return codec::packet_size(bits); },
        py::arg("bits") = 8);
  m.def(
      "build_packet",
      [](std::uint64_t payload, std::size_t bits) {
        codec::FramingConfig framing;
        framing.payload_bits = bits;
        return codec::build_packet(codec::Payload::from_value(payload, bits), framing).to_string();
      },
      py::arg("payload"), py::arg("bits") = 8, "Packet symbols as a '0'/'1' string.");
  m.def(
      "parse_packet",
      [](const std::string& symbols, std::size_t bits) {
        codec::FramingConfig framing;
        framing.payload_bits = bits;
        return codec::decode_stream(codec::SymbolStream::from_string(symbols), framing, bits)
            .to_value();
      },
      py::arg("symbols"), py::arg("bits") = 8);

  m.def(
      "band_width_px",
      [](double freq_hz, double readout_s) {
        return camera::band_width_px(tx_at(freq_hz, 0.4), camera_at(100, readout_s));
      },
      py::arg("freq_hz") = 2500.0, py::arg("readout_s") = 1.0 / 60000.0);
  m.def(
      "decodability_bound_px",
      [](std::size_t bits, double freq_hz, double readout_s) {
        return camera::decodability_bound_px(bits, tx_at(freq_hz, 0.4), camera_at(100, readout_s));
      },
      py::arg("bits") = 8, py::arg("freq_hz") = 2500.0, py::arg("readout_s") = 1.0 / 60000.0);
  m.def(
      "expected_blob_diameter_px",
      [](double distance_m, int iso) {
        return camera::expected_blob_diameter_px({distance_m, {}}, {}, camera_at(iso, 1.0 / 60000.0));
      },
      py::arg("distance_m"), py::arg("iso") = 100);

  m.def(
      "synthesize_frame",
      [](std::uint64_t payload, double distance_m, int iso, double noise, std::uint64_t seed,
         double phase_s, bool bloom, std::size_t bits, double duty) {
        codec::FramingConfig framing;
        framing.payload_bits = bits;
        camera::SynthesisOptions o;
        o.noise_sigma = noise;
        o.seed = seed;
        o.bloom.enabled = bloom;
        const auto stream =
            codec::build_packet(codec::Payload::from_value(payload, bits), framing);
        Frame f;
        {
          py::gil_scoped_release release;
          f = camera::synthesize_frame(stream, {distance_m, {}}, tx_at(2500.0, duty),
                                       camera_at(iso, 1.0 / 60000.0), o, phase_s);
        }
        return to_array(f);
      },
      py::arg("payload"), py::arg("distance_m") = 0.2, py::arg("iso") = 100,
      py::arg("noise") = 0.0, py::arg("seed") = 0, py::arg("phase_s") = 0.0,
      py::arg("bloom") = true, py::arg("bits") = 8, py::arg("duty") = 0.4,
      "1280x720 uint8 frame of one LED looping its packet.");

  m.def(
      "decode_frame",
      [](const Image& image, double freq_hz, double readout_s, double offset, std::size_t bits) {
        DecoderConfig cfg;
        cfg.mod_freq_hz = freq_hz;
        cfg.readout_time_s = readout_s;
        cfg.offset_fraction = offset;
        cfg.payload_bits = bits;
        const Frame frame = from_array(image);
        std::vector<BlobDecode> results;
        {
          py::gil_scoped_release release;
          results = decode_frame(frame, cfg);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["center_x"] = r.blob.center_x;
          d["center_y"] = r.blob.center_y;
          d["radius_px"] = r.blob.radius_px;
          d["payload"] = r.payload ? py::object(py::int_(r.payload->to_value())) : py::none();
          d["failure"] = r.payload ? py::object(py::none()) : py::object(py::str(r.failure));
          d["symbols"] = r.symbols.to_string();
          d["decode_time_ms"] = r.decode_time_ms;
          out.append(d);
        }
        return out;
      },
      py::arg("image"), py::arg("freq_hz") = 2500.0, py::arg("readout_s") = 1.0 / 60000.0,
      py::arg("offset") = 0.5, py::arg("bits") = 8,
      "One dict per detected blob, largest first.");

  m.def(
      "conventional_distance",
      [](double diameter_px) { return ranging::conventional_distance(diameter_px, {}, {}); },
      py::arg("diameter_px"), "Link distance in meters from the pinhole relation.");

  py::class_<ranging::RangeModel>(m, "RangeModel")
      .def_readonly("slope", &ranging::RangeModel::slope)
      .def_readonly("intercept", &ranging::RangeModel::intercept)
      .def_readonly("iso", &ranging::RangeModel::iso)
      .def_readonly("trained_on", &ranging::RangeModel::trained_on)
      .def_property_readonly("feature_kind",
                             [](const ranging::RangeModel& m) {
                               return std::string(ranging::to_string(m.feature_kind));
                             })
      .def("predict", [](const ranging::RangeModel& m, double d) {
        return ranging::predict_distance(m, d);
      }, py::arg("diameter_px"))
      .def("__repr__", [](const ranging::RangeModel& m) {
        return "RangeModel(slope=" + std::to_string(m.slope) +
               ", intercept=" + std::to_string(m.intercept) + ")";
      });

  m.def(
      "fit_regression",
      [](const std::vector<double>& distances_m, const std::vector<double>& diameters_px,
         const std::string& feature, int iso) {
        if (distances_m.size() != diameters_px.size()) {
          throw py::value_error("distances and diameters differ in length");
        }
        std::vector<ranging::RangeSample> samples;
        for (std::size_t i = 0; i < distances_m.size(); ++i) {
          samples.push_back({distances_m[i], diameters_px[i], iso});
        }
        auto model = ranging::fit_regression(samples, ranging::parse_feature_kind(feature));
        model.iso = iso;
        return model;
      },
      py::arg("distances_m"), py::arg("diameters_px"), py::arg("feature") = "reciprocal",
      py::arg("iso") = 100);

  m.def("read_pgm", [](const std::string& path) { return to_array(read_pgm(path)); },
        py::arg("path"));
  m.def(
      "write_pgm",
      [](const Image& image, const std::string& path) { write_pgm(from_array(image), path); },
      py::arg("image"), py::arg("path"));
}
