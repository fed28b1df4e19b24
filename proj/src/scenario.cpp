#include "lorecos/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace lorecos {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Parser {
 public:
  explicit Parser(std::string default_name) { config_.name = std::move(default_name); }

  ScenarioConfig parse(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = text.find('\n', pos);
      std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      ++line_no;
      line_ = line_no;
      handle_line(line);
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    return std::move(config_);
  }

 private:
  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ScenarioError(field, message, line_);
  }

  void handle_line(std::string_view line) {
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;

    if (line.front() == '[') {
      if (line.back() != ']') fail("section", "unterminated section header");
      section_ = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> kSections{"field", "radio", "timers", "nodes", "mobility", "run"};
      if (!kSections.contains(section_)) fail(section_, "unknown section");
      return;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(section_.empty() ? "line" : section_, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section_.empty()) fail(key, "key outside of any section");
    if (key.empty()) fail(section_, "empty key");

    const std::string qualified = section_ + "." + key;
    if (!seen_.insert(qualified).second) fail(qualified, "duplicate key");
    key_lines_[qualified] = line_;

    if (section_ == "nodes") {
      parse_node(key, value);
    } else {
      assign(qualified, value);
    }
  }

  double number(const std::string& field, std::string_view text) const {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(field, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
  }

  SimTime millis(const std::string& field, std::string_view text) const {
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail(field, "expected an integer number of milliseconds, got '" + std::string(text) + "'");
    }
    if (v < 0) fail(field, "must not be negative");
    return static_cast<SimTime>(v);
  }

  bool boolean(const std::string& field, std::string_view text) const {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail(field, "expected true or false");
  }

  void assign(const std::string& field, std::string_view value) {
    auto& t = config_.timers;
    static const std::map<std::string, SimTime Timers::*> kTimers{
        {"timers.event_period_ms", &Timers::event_period_ms},
        {"timers.connect_period_ms", &Timers::connect_period_ms},
        {"timers.hello_wait_T_ms", &Timers::hello_wait_T_ms},
        {"timers.beacon_period_ms", &Timers::beacon_period_ms},
        {"timers.route_lifetime_ms", &Timers::route_lifetime_ms},
        {"timers.rrep_wait_ms", &Timers::rrep_wait_ms},
        {"timers.rreq_retention_ms", &Timers::rreq_retention_ms},
        {"timers.event_start_ms", &Timers::event_start_ms},
        {"timers.connect_start_ms", &Timers::connect_start_ms},
    };
    if (auto it = kTimers.find(field); it != kTimers.end()) {
      t.*(it->second) = millis(field, value);
    } else if (field == "field.width") {
      config_.field.width = number(field, value);
    } else if (field == "field.height") {
      config_.field.height = number(field, value);
    } else if (field == "radio.range_m") {
      config_.radio.range_m = number(field, value);
    } else if (field == "radio.hop_delay_ms") {
      config_.radio.hop_delay_ms = millis(field, value);
    } else if (field == "mobility.waypoints") {
      config_.mobility.waypoints = waypoints(field, value);
    } else if (field == "mobility.cyclic") {
      config_.mobility.cyclic = boolean(field, value);
    } else if (field == "mobility.step_m") {
      config_.mobility.step_m = number(field, value);
    } else if (field == "mobility.step_ms") {
      config_.mobility.step_ms = millis(field, value);
    } else if (field == "run.name") {
      if (value.empty()) fail(field, "empty name");
      config_.name = std::string(value);
    } else if (field == "run.algo") {
      const auto algo = parse_algorithm(value);
      if (!algo) fail(field, "expected lorecos, control or plain");
      config_.algo = *algo;
    } else if (field == "run.duration_ms") {
      config_.duration_ms = millis(field, value);
    } else if (field == "run.out_dir") {
      config_.out_dir = std::string(value);
    } else {
      fail(field, "unknown key");
    }
  }

  std::vector<Position> waypoints(const std::string& field, std::string_view value) const {
    std::vector<Position> out;
    std::size_t i = 0;
    while (true) {
      const auto open = value.find('(', i);
      if (open == std::string_view::npos) {
        if (!trim(value.substr(i)).empty()) fail(field, "stray text after waypoints");
        break;
      }
      if (!trim(value.substr(i, open - i)).empty()) fail(field, "stray text between waypoints");
      const auto close = value.find(')', open);
      if (close == std::string_view::npos) fail(field, "unterminated waypoint");
      const auto inner = value.substr(open + 1, close - open - 1);
      const auto comma = inner.find(',');
      if (comma == std::string_view::npos) fail(field, "waypoint needs (x,y)");
      out.push_back({number(field, trim(inner.substr(0, comma))), number(field, trim(inner.substr(comma + 1)))});
      i = close + 1;
    }
    if (out.empty()) fail(field, "no waypoints");
    return out;
  }

  void parse_node(const std::string& key, std::string_view value) {
    const std::string field = "nodes." + key;
    NodeSpec node;
    std::uint32_t id = 0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), id);
    if (res.ec != std::errc() || res.ptr != key.data() + key.size() || id == 0) {
      fail(field, "node id must be a positive integer");
    }
    node.id = id;

    const auto tokens = split_ws(value);
    std::size_t k = 0;
    if (!tokens.empty() && tokens[0] == "mobile") {
      k = 1;
    } else if (tokens.size() >= 2) {
      node.position = Position{number(field, tokens[0]), number(field, tokens[1])};
      k = 2;
    } else {
      fail(field, "expected '<x> <y> <kn|un> <role>' or 'mobile <kn|un> <role>'");
    }
    if (tokens.size() != k + 2) fail(field, "expected a kn/un flag and a role after the position");
    if (tokens[k] == "kn") {
      node.knows_location = true;
    } else if (tokens[k] != "un") {
      fail(field, "location flag must be kn or un");
    }
    const auto role = tokens[k + 1];
    if (role == "grid") {
      node.role = NodeRole::kGrid;
    } else if (role == "source") {
      node.role = NodeRole::kSource;
    } else if (role == "destination") {
      node.role = NodeRole::kDestination;
    } else {
      fail(field, "role must be grid, source or destination");
    }
    config_.nodes.push_back(node);
  }

  ScenarioConfig config_;
  std::string section_;
  std::set<std::string> seen_;
  int line_ = 0;

 public:
  /// Line each key was read from, for diagnostics raised after parsing.
  std::map<std::string, int> key_lines_;
};

struct Leg {
  Position from;
  Position to;
  double length;
};

std::vector<Leg> legs_of(const MobilityPath& path) {
  std::vector<Leg> legs;
  const auto& w = path.waypoints;
  for (std::size_t i = 1; i < w.size(); ++i) legs.push_back({w[i - 1], w[i], distance(w[i - 1], w[i])});
  if (path.cyclic && w.size() > 1 && w.back() != w.front()) {
    legs.push_back({w.back(), w.front(), distance(w.back(), w.front())});
  }
  return legs;
}

}  // namespace

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::kGrid: return "grid";
    case NodeRole::kSource: return "source";
    case NodeRole::kDestination: return "destination";
  }
  return "grid";
}

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kLorecos: return "lorecos";
    case Algorithm::kControl: return "control";
    case Algorithm::kPlain: return "plain";
  }
  return "lorecos";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "lorecos") return Algorithm::kLorecos;
  if (text == "control") return Algorithm::kControl;
  if (text == "plain") return Algorithm::kPlain;
  return std::nullopt;
}

ScenarioError::ScenarioError(std::string field, std::string message, int line)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + message),
      field_(std::move(field)),
      message_(std::move(message)),
      line_(line) {}

double MobilityPath::length() const {
  double total = 0.0;
  for (const Leg& leg : legs_of(*this)) total += leg.length;
  return total;
}

const NodeSpec& ScenarioConfig::node(NodeId id) const {
  for (const NodeSpec& n : nodes) {
    if (n.id == id) return n;
  }
  throw ScenarioError("nodes", "no node with id " + std::to_string(id));
}

const NodeSpec& ScenarioConfig::source() const {
  for (const NodeSpec& n : nodes) {
    if (n.role == NodeRole::kSource) return n;
  }
  throw ScenarioError("nodes", "no source node");
}

const NodeSpec& ScenarioConfig::destination() const {
  for (const NodeSpec& n : nodes) {
    if (n.role == NodeRole::kDestination) return n;
  }
  throw ScenarioError("nodes", "no destination node");
}

std::set<NodeId> ScenarioConfig::kn_ids() const {
  std::set<NodeId> out;
  for (const NodeSpec& n : nodes) {
    if (n.knows_location) out.insert(n.id);
  }
  return out;
}

std::vector<NodeSpec> build_grid() {
  std::vector<NodeSpec> grid;
  grid.reserve(25);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      NodeSpec node;
      node.id = static_cast<NodeId>(5 * r + c + 1);
      node.position = Position{10.0 * c, 40.0 - 10.0 * r};
      node.knows_location = true;
      node.role = NodeRole::kGrid;
      grid.push_back(node);
    }
  }
  return grid;
}

std::set<NodeId> topology_kn_set(int kind) {
  switch (kind) {
    case 1: {
      std::set<NodeId> all;
      for (NodeId id = 1; id <= 25; ++id) all.insert(id);
      return all;
    }
    case 2: return {7, 9, 17, 19};
    case 3: return {11, 12, 13, 14, 15};
    default: throw std::invalid_argument("unknown topology " + std::to_string(kind));
  }
}

MobilityPath canonical_mobility() {
  MobilityPath path;
  path.waypoints = {{15, 15}, {35, 15}, {35, 25}, {15, 25}, {15, 35}, {31, 35}, {31, 5}, {15, 5}, {15, 15}};
  path.step_m = 1.0;
  path.step_ms = 333;
  path.cyclic = true;
  return path;
}

Position position_at(const MobilityPath& path, SimTime t) {
  if (path.waypoints.empty()) throw std::invalid_argument("mobility path has no waypoints");
  const auto legs = legs_of(path);
  double total = 0.0;
  for (const Leg& leg : legs) total += leg.length;
  if (legs.empty() || total <= 0.0 || path.step_ms == 0) return path.waypoints.front();

  const auto steps = static_cast<double>(t / path.step_ms);
  double along = steps * path.step_m;
  if (path.cyclic) {
    along = std::fmod(along, total);
  } else if (along >= total) {
    return legs.back().to;
  }
  for (const Leg& leg : legs) {
    if (along < leg.length) {
      const double f = along / leg.length;
      return {leg.from.x + f * (leg.to.x - leg.from.x), leg.from.y + f * (leg.to.y - leg.from.y)};
    }
    along -= leg.length;
  }
  return legs.back().to;
}

ScenarioConfig canonical_scenario(int topology, Algorithm algo) {
  const auto kns = topology_kn_set(topology);
  ScenarioConfig config;
  config.name = "topology" + std::to_string(topology) + "-" + std::string(to_string(algo));
  config.nodes = build_grid();
  for (NodeSpec& n : config.nodes) {
    n.knows_location = kns.contains(n.id);
    if (n.id == kDestinationNodeId) n.role = NodeRole::kDestination;
  }
  config.nodes.push_back(NodeSpec{kMobileNodeId, std::nullopt, false, NodeRole::kSource});
  config.mobility = canonical_mobility();
  config.algo = algo;
  config.out_dir = "out/" + config.name;
  return config;
}

void validate(const ScenarioConfig& c) {
  if (!(c.field.width > 0.0)) throw ScenarioError("field.width", "must be positive");
  if (!(c.field.height > 0.0)) throw ScenarioError("field.height", "must be positive");
  if (!(c.radio.range_m > 0.0)) throw ScenarioError("radio.range_m", "must be positive");

  const auto& t = c.timers;
  const std::pair<const char*, SimTime> periods[] = {
      {"timers.event_period_ms", t.event_period_ms},     {"timers.connect_period_ms", t.connect_period_ms},
      {"timers.hello_wait_T_ms", t.hello_wait_T_ms},     {"timers.beacon_period_ms", t.beacon_period_ms},
      {"timers.route_lifetime_ms", t.route_lifetime_ms}, {"timers.rrep_wait_ms", t.rrep_wait_ms},
      {"timers.rreq_retention_ms", t.rreq_retention_ms}, {"run.duration_ms", c.duration_ms},
  };
  for (const auto& [field, value] : periods) {
    if (value == 0) throw ScenarioError(field, "must be positive");
  }
  if (t.hello_wait_T_ms >= t.event_period_ms) {
    throw ScenarioError("timers.hello_wait_T_ms", "must be shorter than event_period_ms");
  }
  if (t.rrep_wait_ms + t.hello_wait_T_ms >= t.event_period_ms) {
    throw ScenarioError("timers.rrep_wait_ms", "rrep_wait_ms + hello_wait_T_ms must be shorter than event_period_ms");
  }

  if (c.nodes.empty()) throw ScenarioError("nodes", "no nodes");
  std::set<NodeId> ids;
  int sources = 0;
  int destinations = 0;
  bool any_mobile = false;
  for (const NodeSpec& n : c.nodes) {
    const std::string field = "nodes." + std::to_string(n.id);
    if (n.id == kNoNode) throw ScenarioError("nodes", "node id 0 is reserved");
    if (!ids.insert(n.id).second) throw ScenarioError(field, "duplicate node id");
    if (n.position) {
      if (!is_finite(*n.position) || !c.field.contains(*n.position)) {
        throw ScenarioError(field, "position outside the field");
      }
    } else {
      any_mobile = true;
    }
    if (n.role == NodeRole::kSource) ++sources;
    if (n.role == NodeRole::kDestination) ++destinations;
  }
  if (sources != 1) throw ScenarioError("nodes", "exactly one source node required");
  if (destinations != 1) throw ScenarioError("nodes", "exactly one destination node required");

  if (any_mobile) {
    const auto& m = c.mobility;
    if (m.waypoints.empty()) throw ScenarioError("mobility.waypoints", "mobile nodes need waypoints");
    for (const Position& p : m.waypoints) {
      if (!c.field.contains(p)) throw ScenarioError("mobility.waypoints", "waypoint outside the field");
    }
    if (!(m.step_m > 0.0)) throw ScenarioError("mobility.step_m", "must be positive");
    if (m.step_ms == 0) throw ScenarioError("mobility.step_ms", "must be positive");
  }
}

ScenarioConfig parse_scenario(std::string_view text, std::string default_name) {
  Parser parser(std::move(default_name));
  ScenarioConfig config = parser.parse(text);
  if (config.out_dir.empty()) config.out_dir = "out/" + config.name;
  try {
    validate(config);
  } catch (const ScenarioError& e) {
    const auto it = parser.key_lines_.find(e.field());
    if (e.line() != 0 || it == parser.key_lines_.end()) throw;
    throw ScenarioError(e.field(), e.message(), it->second);
  }
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ScenarioError("file", "cannot read " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), file.stem().string());
}

std::string format_scenario(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "[field]\n"
      << "width = " << format_number(c.field.width) << "\n"
      << "height = " << format_number(c.field.height) << "\n\n"
      << "[radio]\n"
      << "range_m = " << format_number(c.radio.range_m) << "\n"
      << "hop_delay_ms = " << c.radio.hop_delay_ms << "\n\n"
      << "[timers]\n"
      << "event_period_ms = " << c.timers.event_period_ms << "\n"
      << "connect_period_ms = " << c.timers.connect_period_ms << "\n"
      << "hello_wait_T_ms = " << c.timers.hello_wait_T_ms << "\n"
      << "beacon_period_ms = " << c.timers.beacon_period_ms << "\n"
      << "route_lifetime_ms = " << c.timers.route_lifetime_ms << "\n"
      << "rrep_wait_ms = " << c.timers.rrep_wait_ms << "\n"
      << "rreq_retention_ms = " << c.timers.rreq_retention_ms << "\n"
      << "event_start_ms = " << c.timers.event_start_ms << "\n"
      << "connect_start_ms = " << c.timers.connect_start_ms << "\n\n"
      << "[nodes]\n"
      << "# id = x y kn|un role\n";
  for (const NodeSpec& n : c.nodes) {
    out << n.id << " = ";
    if (n.position) {
      out << format_number(n.position->x) << " " << format_number(n.position->y);
    } else {
      out << "mobile";
    }
    out << " " << (n.knows_location ? "kn" : "un") << " " << to_string(n.role) << "\n";
  }
  out << "\n[mobility]\nwaypoints =";
  for (const Position& p : c.mobility.waypoints) {
    out << " (" << format_number(p.x) << "," << format_number(p.y) << ")";
  }
  out << "\n"
      << "cyclic = " << (c.mobility.cyclic ? "true" : "false") << "\n"
      << "step_m = " << format_number(c.mobility.step_m) << "\n"
      << "step_ms = " << c.mobility.step_ms << "\n\n"
      << "[run]\n"
      << "name = " << c.name << "\n"
      << "algo = " << to_string(c.algo) << "\n"
      << "duration_ms = " << c.duration_ms << "\n"
      << "out_dir = " << c.out_dir << "\n";
  return out.str();
}

bool same_setup(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.field.width == b.field.width && a.field.height == b.field.height && a.radio.range_m == b.radio.range_m &&
         a.radio.hop_delay_ms == b.radio.hop_delay_ms && a.nodes == b.nodes && a.mobility == b.mobility;
}

}  // namespace lorecos
