#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lorecos/lorecos.hpp"
#include "lorecos/runner.hpp"
#include "lorecos/wire.hpp"

namespace py = pybind11;
using namespace lorecos;

namespace {

struct WireDecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

py::dict to_dict(const nlohmann::json& j);

py::object to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case nlohmann::json::value_t::object: return to_dict(j);
    default: return py::none();
  }
}

py::dict to_dict(const nlohmann::json& j) {
  py::dict d;
  for (const auto& [k, v] : j.items()) d[py::str(k)] = to_py(v);
  return d;
}

Algorithm algo_from(const std::string& name) {
  const auto a = parse_algorithm(name);
  if (!a) throw py::value_error("algo must be lorecos, control or plain");
  return *a;
}

py::list records_of(const RunResult& r) {
  py::list out;
  for (const auto& rec : r.records) {
    py::dict d;
    d["t_ms"] = rec.t;
    d["true_pos"] = py::make_tuple(rec.true_pos.x, rec.true_pos.y);
    if (rec.estimate) {
      d["estimate"] = py::make_tuple(rec.estimate->position.x, rec.estimate->position.y);
      d["kind"] = std::string(label(rec.estimate->kind));
      d["error_m"] = rec.error_m;
    } else {
      d["estimate"] = py::none();
      d["kind"] = py::none();
      d["error_m"] = py::none();
    }
    out.append(d);
  }
  return out;
}

py::dict run_config(const ScenarioConfig& c) {
  RunResult r;
  {
    py::gil_scoped_release release;
    r = simulate(c);
  }
  py::dict out = to_dict(to_json(r.summary));
  out["records"] = records_of(r);
  return out;
}

std::vector<EstimateRecord> from_errors(const std::vector<std::optional<double>>& errors) {
  std::vector<EstimateRecord> rs;
  for (const auto& e : errors) {
    EstimateRecord r;
    if (e) {
      if (*e < 0) throw py::value_error("errors must be non-negative");
      r.estimate = LocationEstimate{};
      r.error_m = *e;
    }
    rs.push_back(r);
  }
  return rs;
}

}  // namespace

PYBIND11_MODULE(lorecos, m) {
  m.doc() = "LORECOS-AODVjr simulator bindings";

  py::class_<Position>(m, "Position")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("x", &Position::x)
      .def_readwrite("y", &Position::y)
      .def("__eq__", [](const Position& a, const Position& b) { return a == b; })
      .def("__iter__", [](const Position& p) { return py::iter(py::make_tuple(p.x, p.y)); })
      .def("__repr__", [](const Position& p) {
        return "Position(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
      });

  py::enum_<PacketType>(m, "PacketType")
      .value("RREQ", PacketType::kRreq)
      .value("RREP", PacketType::kRrep)
      .value("CONNECT", PacketType::kConnect)
      .value("EVENT", PacketType::kEvent);

  py::class_<WirePacket>(m, "WirePacket")
      .def(py::init<>())
      .def_readwrite("type", &WirePacket::type)
      .def_property(
          "L", [](const WirePacket& p) { return p.flags.location; }, [](WirePacket& p, bool v) { p.flags.location = v; })
      .def_property(
          "H", [](const WirePacket& p) { return p.flags.hello; }, [](WirePacket& p, bool v) { p.flags.hello = v; })
      .def_readwrite("rreq_id", &WirePacket::rreq_id)
      .def_readwrite("dest", &WirePacket::dest)
      .def_readwrite("orig", &WirePacket::orig)
      .def_readwrite("xloc", &WirePacket::xloc)
      .def_readwrite("yloc", &WirePacket::yloc)
      .def_readwrite("seq", &WirePacket::seq)
      .def_readwrite("payload", &WirePacket::payload)
      .def("set_location", &WirePacket::set_location)
      .def("clear_location", &WirePacket::clear_location)
      .def("__eq__", [](const WirePacket& a, const WirePacket& b) { return a == b; });

  m.def("make_rreq", &make_rreq, py::arg("orig"), py::arg("dest"), py::arg("rreq_id"));
  m.def("make_rrep", &make_rrep, py::arg("orig"), py::arg("dest"));
  m.def("make_hello_request", &make_hello_request, py::arg("requester"));
  m.def("make_hello_reply", &make_hello_reply, py::arg("replier"), py::arg("requester"), py::arg("position"));
  m.def("make_connect", &make_connect, py::arg("orig"), py::arg("dest"));
  m.def(
      "make_event",
      [](NodeId orig, NodeId dest, std::uint32_t seq, const py::bytes& payload) {
        const std::string s = payload;
        return make_event(orig, dest, seq, std::vector<std::uint8_t>(s.begin(), s.end()));
      },
      py::arg("orig"), py::arg("dest"), py::arg("seq"), py::arg("payload") = py::bytes());

  py::register_exception<EncodeError>(m, "EncodeError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<WireDecodeError>(m, "DecodeError", PyExc_ValueError);

  m.def("encode", [](const WirePacket& p) {
    const auto out = encode(p);
    return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
  });
  m.def("decode", [](const py::bytes& data) {
    const std::string s = data;
    const std::vector<std::uint8_t> bytes(s.begin(), s.end());
    auto result = decode(bytes);
    if (auto* e = std::get_if<DecodeError>(&result)) {
      throw WireDecodeError(std::string(to_string(e->kind)) + ": " + e->detail);
    }
    return std::get<WirePacket>(std::move(result));
  });

  m.def("in_range", [](Position a, Position b, double range_m) { return in_range(a, b, RadioModel{range_m, 1}); },
        py::arg("a"), py::arg("b"), py::arg("range_m") = 12.0);

  m.def("centroid", [](const std::vector<Position>& pts) {
    if (pts.empty()) throw py::value_error("centroid of no points");
    return centroid(pts);
  });

  m.def(
      "finalize_estimate",
      [](const std::vector<std::pair<NodeId, Position>>& replies,
         std::optional<Position> discovered) -> std::optional<py::tuple> {
        std::vector<HelloReply> window;
        for (const auto& [id, pos] : replies) window.push_back({id, pos});
        const auto e = finalize_estimate(window, discovered, 0);
        if (!e) return std::nullopt;
        return py::make_tuple(std::string(label(e->kind)), e->position);
      },
      py::arg("replies"), py::arg("discovered") = std::nullopt,
      "Returns (kind, position) or None when estimation fails.");

  m.def("build_grid", [] {
    py::list out;
    for (const NodeSpec& n : build_grid()) out.append(py::make_tuple(n.id, *n.position));
    return out;
  });
  m.def("topology_kn_set", &topology_kn_set, py::arg("kind"));
  m.def("canonical_waypoints", [] { return canonical_mobility().waypoints; });
  m.def("position_at", [](SimTime t) { return position_at(canonical_mobility(), t); }, py::arg("t_ms"),
        "Mobile node position on the canonical path.");

  m.def(
      "run_canonical",
      [](int topology, const std::string& algo, SimTime duration_ms) {
        ScenarioConfig c = canonical_scenario(topology, algo_from(algo));
        c.duration_ms = duration_ms;
        return run_config(c);
      },
      py::arg("topology"), py::arg("algo") = "lorecos", py::arg("duration_ms") = 100000);

  m.def(
      "run_scenario",
      [](const std::filesystem::path& path, std::optional<std::string> algo, std::optional<SimTime> duration_ms) {
        RunRequest req;
        req.scenario_path = path;
        if (algo) req.algo = algo_from(*algo);
        req.duration_ms = duration_ms;
        return run_config(resolve(req));
      },
      py::arg("path"), py::arg("algo") = std::nullopt, py::arg("duration_ms") = std::nullopt,
      "Runs a scenario file in memory and returns its summary with per-cycle records.");

  m.def("parse_scenario", [](const std::string& text) { return to_dict(config_echo(parse_scenario(text))); },
        "Validates scenario text and returns its configuration echo.");
  m.def("format_canonical", [](int topology, const std::string& algo) {
    return format_scenario(canonical_scenario(topology, algo_from(algo)));
  });

  m.def("mae", [](const std::vector<std::optional<double>>& errors) { return mae(from_errors(errors)); },
        "Mean of the non-None errors, or None.");
  m.def("rmse", [](const std::vector<std::optional<double>>& errors) { return rmse(from_errors(errors)); });
}
