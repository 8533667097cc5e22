#include "absnet/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace absnet::scenario {

namespace {

namespace fs = std::filesystem;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawValue {
  std::string text;
  int line = 0;
};

/// Parsed key/value store with single-consumption semantics: every key must
/// be taken exactly once, so leftovers at the end are unknown keys.
class KeyBag {
 public:
  KeyBag(const std::string& text, std::string origin)
      : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const size_t eq = line.find('=');
      require(eq != std::string::npos,
              origin_ + ":" + std::to_string(number) +
                  ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      require(!key.empty(), origin_ + ":" + std::to_string(number) +
                                ": missing key before '='");
      require(!value.empty(), origin_ + ":" + std::to_string(number) +
                                  ": key '" + key + "' has an empty value");
      const auto [it, inserted] = entries_.emplace(key, RawValue{value, number});
      require(inserted, origin_ + ":" + std::to_string(number) +
                            ": duplicate key '" + key + "' (first at line " +
                            std::to_string(it->second.line) + ")");
    }
  }

  const std::string& origin() const { return origin_; }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::optional<RawValue> take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    RawValue v = it->second;
    entries_.erase(it);
    return v;
  }

  [[noreturn]] void fail(const RawValue& v, const std::string& key,
                         const std::string& what) const {
    throw ValidationError(origin_ + ":" + std::to_string(v.line) + ": key '" +
                          key + "': " + what + " (got '" + v.text + "')");
  }

  std::string take_string(const std::string& key, std::string fallback) {
    const auto v = take(key);
    return v ? v->text : fallback;
  }

  double parse_double(const RawValue& v, const std::string& key) const {
    const char* begin = v.text.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || trim(std::string(end)) != "")
      fail(v, key, "expected a number");
    return x;
  }

  double take_double(const std::string& key, double fallback) {
    const auto v = take(key);
    return v ? parse_double(*v, key) : fallback;
  }

  int take_int(const std::string& key, int fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    const double x = parse_double(*v, key);
    if (x != std::floor(x) || std::abs(x) > 1e9)
      fail(*v, key, "expected an integer");
    return static_cast<int>(x);
  }

  std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    const char* begin = v->text.c_str();
    char* end = nullptr;
    const unsigned long long x = std::strtoull(begin, &end, 10);
    if (end == begin || trim(std::string(end)) != "")
      fail(*v, key, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(x);
  }

  bool take_bool(const std::string& key, bool fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    if (v->text == "true") return true;
    if (v->text == "false") return false;
    fail(*v, key, "expected 'true' or 'false'");
  }

  Vec3 parse_vec3(const RawValue& v, const std::string& key) const {
    std::istringstream in(v.text);
    Vec3 p;
    std::string rest;
    if (!(in >> p.x() >> p.y() >> p.z()) || (in >> rest))
      fail(v, key, "expected three numbers 'x y z'");
    return p;
  }

  Vec3 take_vec3(const std::string& key, const Vec3& fallback) {
    const auto v = take(key);
    return v ? parse_vec3(*v, key) : fallback;
  }

  /// Collects `prefix.N` keys (N = 0, 1, ...), enforcing a gap-free range.
  std::vector<Vec3> take_positions(const std::string& prefix) {
    std::map<int, RawValue> found;
    std::vector<std::string> keys;
    for (const auto& [key, value] : entries_) {
      if (key.rfind(prefix + ".", 0) != 0) continue;
      const std::string suffix = key.substr(prefix.size() + 1);
      if (suffix.empty() ||
          !std::all_of(suffix.begin(), suffix.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          }))
        continue;  // not an indexed entry; left for unknown-key detection
      found.emplace(std::stoi(suffix), value);
      keys.push_back(key);
    }
    for (const std::string& key : keys) entries_.erase(key);
    std::vector<Vec3> out;
    int expected = 0;
    for (const auto& [index, value] : found) {
      const std::string key = prefix + "." + std::to_string(index);
      require(index == expected,
              origin_ + ":" + std::to_string(value.line) + ": key '" + key +
                  "': indices must be contiguous from 0 (expected '" + prefix +
                  "." + std::to_string(expected) + "')");
      ++expected;
      out.push_back(parse_vec3(value, key));
    }
    return out;
  }

  std::vector<Commodity> take_commodities() {
    struct Partial {
      std::optional<int> source, destination;
      std::optional<double> demand;
      int line = 0;
    };
    std::map<int, Partial> found;
    std::vector<std::string> keys;
    for (const auto& [key, value] : entries_) {
      if (key.rfind("commodity.", 0) != 0) continue;
      const std::string rest = key.substr(std::string("commodity.").size());
      const size_t dot = rest.find('.');
      require(dot != std::string::npos,
              origin_ + ":" + std::to_string(value.line) + ": key '" + key +
                  "': expected commodity.<n>.<source|destination|demand>");
      const std::string n_text = rest.substr(0, dot);
      const std::string field = rest.substr(dot + 1);
      require(!n_text.empty() &&
                  std::all_of(n_text.begin(), n_text.end(), [](char c) {
                    return std::isdigit(static_cast<unsigned char>(c));
                  }),
              origin_ + ":" + std::to_string(value.line) + ": key '" + key +
                  "': commodity index must be a nonnegative integer");
      Partial& p = found[std::stoi(n_text)];
      p.line = value.line;
      const double x = parse_double(value, key);
      if (field == "source" || field == "destination") {
        if (x != std::floor(x))
          fail(value, key, "expected an integer node index");
        (field == "source" ? p.source : p.destination) =
            static_cast<int>(x);
      } else if (field == "demand") {
        p.demand = x;
      } else {
        throw ValidationError(
            origin_ + ":" + std::to_string(value.line) + ": key '" + key +
            "': unknown commodity field '" + field + "'");
      }
      keys.push_back(key);
    }
    for (const std::string& key : keys) entries_.erase(key);
    std::vector<Commodity> out;
    int expected = 0;
    for (const auto& [index, p] : found) {
      require(index == expected,
              origin_ + ":" + std::to_string(p.line) +
                  ": commodity indices must be contiguous from 0 (missing " +
                  std::to_string(expected) + ")");
      ++expected;
      require(p.source && p.destination,
              origin_ + ":" + std::to_string(p.line) + ": commodity." +
                  std::to_string(index) +
                  " needs both .source and .destination");
      out.push_back({*p.source, *p.destination, p.demand.value_or(1.0)});
    }
    return out;
  }

  void finish() const {
    if (entries_.empty()) return;
    const auto& [key, value] = *entries_.begin();
    throw ValidationError(origin_ + ":" + std::to_string(value.line) +
                          ": unknown key '" + key + "'");
  }

 private:
  std::string origin_;
  std::map<std::string, RawValue> entries_;
};

bool inside_region(const Vec3& p, const Vec3& extent) {
  return p.x() >= 0 && p.x() <= extent.x() && p.y() >= 0 &&
         p.y() <= extent.y() && p.z() >= 0 && p.z() <= extent.z();
}

std::string csv_path(const std::string& out_dir, const char* name) {
  return (fs::path(out_dir) / name).string();
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings on every platform
  if (!out.good())
    throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void write_trajectory_rows(std::ofstream& out, int run,
                           const mobility::TrajectoryLog& log) {
  for (const mobility::SlotRecord& s : log.slots)
    for (size_t node = 0; node < s.positions.size(); ++node) {
      const Vec3& p = s.positions[node];
      out << run << ',' << s.slot << ',' << node << ','
          << format_number(p.x()) << ',' << format_number(p.y()) << ','
          << format_number(p.z()) << '\n';
    }
}

void write_flow_rows(std::ofstream& out, int run, const std::string& metric,
                     const mobility::TrajectoryLog& log) {
  for (const mobility::SlotRecord& s : log.slots) {
    out << run << ',' << s.slot << ',' << metric << ','
        << format_number(s.flow_value) << '\n';
    out << run << ',' << s.slot << ",lambda2," << format_number(s.lambda2)
        << '\n';
  }
}

void write_distfiedler_trace(const std::string& path,
                             const distfiedler::Trace& trace,
                             std::vector<std::string>& files) {
  std::ofstream out = open_csv(path);
  out << "iteration,error_norm,messages\n";
  for (size_t k = 0; k < trace.error_per_iteration.size(); ++k) {
    const long long messages = k < trace.messages_per_iteration.size()
                                   ? trace.messages_per_iteration[k]
                                   : trace.messages;
    out << (k + 1) << ',' << format_number(trace.error_per_iteration[k])
        << ',' << messages << '\n';
  }
  files.push_back(path);
}

/// Re-reads an emitted trajectories.csv and enforces the speed limit, the
/// relay height floor, and terminal fixity.  `slot_duration` maps run ->
/// slot length; runs absent from the map are static snapshots.
void revalidate_trajectories(const std::string& path, const Scenario& sc,
                             const std::map<int, double>& slot_duration) {
  std::ifstream in(path);
  if (!in.good())
    throw std::runtime_error("cannot re-read '" + path + "'");
  std::string line;
  require(std::getline(in, line) && line == "run,slot,node_id,x,y,z",
          "trajectory re-validation: unexpected header in " + path);
  const std::vector<int> relays = sc.relay_ids();
  const auto is_relay = [&](int node) {
    return std::find(relays.begin(), relays.end(), node) != relays.end();
  };
  std::map<std::pair<int, int>, std::pair<int, Vec3>> last;
  std::map<std::pair<int, int>, Vec3> first;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    double cols[6];
    for (int c = 0; c < 6; ++c) {
      require(static_cast<bool>(std::getline(row, field, ',')),
              "trajectory re-validation: short row at " + path + ":" +
                  std::to_string(line_no));
      cols[c] = std::strtod(field.c_str(), nullptr);
    }
    const int run = static_cast<int>(cols[0]);
    const int slot = static_cast<int>(cols[1]);
    const int node = static_cast<int>(cols[2]);
    const Vec3 p{cols[3], cols[4], cols[5]};

    if (is_relay(node)) {
      require(p.z() >= sc.mobility.height_floor_m - 1e-9,
              "trajectory re-validation: relay " + std::to_string(node) +
                  " breaches the height floor at " + path + ":" +
                  std::to_string(line_no));
    } else {
      const auto key = std::make_pair(run, node);
      const auto it = first.find(key);
      if (it == first.end())
        first.emplace(key, p);
      else
        require((it->second - p).norm() == 0.0,
                "trajectory re-validation: terminal " + std::to_string(node) +
                    " moved at " + path + ":" + std::to_string(line_no));
    }

    const auto key = std::make_pair(run, node);
    const auto prev = last.find(key);
    const auto duration = slot_duration.find(run);
    if (prev != last.end() && duration != slot_duration.end() &&
        slot == prev->second.first + 1) {
      const double travelled = (p - prev->second.second).norm();
      const double limit = sc.mobility.v_max_mps * duration->second;
      // 1e-4 m of slack absorbs the deterministic degeneracy micro-nudges.
      require(travelled <= limit * (1.0 + 1e-9) + 1e-4,
              "trajectory re-validation: node " + std::to_string(node) +
                  " exceeds the speed limit at " + path + ":" +
                  std::to_string(line_no));
    }
    last[key] = {slot, p};
  }
}

double final_flow_of(const mobility::TrajectoryLog& log) {
  return log.slots.back().flow_value;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Weighted: return "weighted";
    case Mode::Unweighted: return "unweighted";
    case Mode::RandomBaseline: return "random-baseline";
    case Mode::EnergyEfficient: return "energy-efficient";
  }
  return "?";
}

std::string to_string(FlowEval e) {
  switch (e) {
    case FlowEval::Single: return "single";
    case FlowEval::Multicast: return "multicast";
    case FlowEval::MultiUnicast: return "multi-unicast";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  if (text == "weighted") return Mode::Weighted;
  if (text == "unweighted") return Mode::Unweighted;
  if (text == "random-baseline") return Mode::RandomBaseline;
  if (text == "energy-efficient") return Mode::EnergyEfficient;
  throw ValidationError(
      "mode must be one of weighted, unweighted, random-baseline, "
      "energy-efficient (got '" + text + "')");
}

FlowEval parse_flow_eval(const std::string& text) {
  if (text == "single") return FlowEval::Single;
  if (text == "multicast") return FlowEval::Multicast;
  if (text == "multi-unicast") return FlowEval::MultiUnicast;
  throw ValidationError(
      "flow.eval must be one of single, multicast, multi-unicast (got '" +
      text + "')");
}

std::vector<int> Scenario::source_ids() const {
  std::vector<int> out(sources.size());
  for (size_t i = 0; i < sources.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

std::vector<int> Scenario::destination_ids() const {
  std::vector<int> out(destinations.size());
  for (size_t i = 0; i < destinations.size(); ++i)
    out[i] = static_cast<int>(sources.size() + i);
  return out;
}

std::vector<int> Scenario::relay_ids() const {
  std::vector<int> out(relays.size());
  for (size_t i = 0; i < relays.size(); ++i)
    out[i] = static_cast<int>(sources.size() + destinations.size() + i);
  return out;
}

netgraph::NetworkState Scenario::initial_state() const {
  netgraph::NetworkState s;
  for (const Vec3& p : sources) {
    s.positions.push_back(p);
    s.kinds.push_back(NodeKind::Source);
  }
  for (const Vec3& p : destinations) {
    s.positions.push_back(p);
    s.kinds.push_back(NodeKind::Destination);
  }
  for (const Vec3& p : relays) {
    s.positions.push_back(p);
    s.kinds.push_back(NodeKind::Relay);
  }
  s.interferers = interferers;
  if (range_threshold_m > 0)
    s.range_threshold_m.assign(s.positions.size(), range_threshold_m);
  s.channel = channel;
  s.graph = graph;
  return s;
}

netgraph::WeightMatrix Scenario::weights() const {
  if (mode == Mode::Weighted || mode == Mode::EnergyEfficient)
    return netgraph::WeightMatrix::terminal_emphasis(
        initial_state().kinds, terminal_weight, relay_weight);
  return netgraph::WeightMatrix::uniform(node_count());
}

mobility::FlowMetric Scenario::metric() const {
  switch (flow_eval) {
    case FlowEval::Single: {
      const int s = commodities.front().source;
      const int d = commodities.front().destination;
      return [s, d](const netgraph::CapacityGraph& g) {
        return flow::max_flow(g, s, d).value;
      };
    }
    case FlowEval::Multicast: {
      const int s = commodities.front().source;
      std::vector<int> dests;
      for (const Commodity& c : commodities) dests.push_back(c.destination);
      return [s, dests](const netgraph::CapacityGraph& g) {
        return flow::multicast_flow(g, s, dests).value;
      };
    }
    case FlowEval::MultiUnicast: {
      std::vector<spectral::CommoditySpec> specs;
      for (const Commodity& c : commodities) {
        spectral::CommoditySpec spec;
        spec.source = c.source;
        spec.destination = c.destination;
        spec.demand = c.demand;
        specs.push_back(spec);
      }
      const double eps = flow_eps;
      return [specs, eps](const netgraph::CapacityGraph& g) {
        return flow::max_concurrent_flow(g, specs, eps).ratio;
      };
    }
  }
  throw std::runtime_error("unreachable flow_eval");
}

std::string Scenario::metric_name() const {
  switch (flow_eval) {
    case FlowEval::Single: return "maxflow";
    case FlowEval::Multicast: return "multicast_flow";
    case FlowEval::MultiUnicast: return "concurrent_flow_ratio";
  }
  return "?";
}

void Scenario::validate() const {
  require(!sources.empty(), "scenario: at least one source is required");
  require(!destinations.empty(),
          "scenario: at least one destination is required");
  require(!relays.empty(), "scenario: at least one abs is required");
  require(region_extent_m.x() > 0 && region_extent_m.y() > 0 &&
              region_extent_m.z() > 0,
          "scenario: region.extent_m components must be > 0");
  require(runs >= 1, "scenario: runs must be >= 1");
  require(terminal_weight > 0 && relay_weight > 0,
          "scenario: weights.terminal and weights.abs must be > 0");
  require(flow_eps > 0 && flow_eps < 0.5,
          "scenario: flow.eps must lie in (0, 0.5)");
  require(range_threshold_m >= 0,
          "scenario: graph.range_threshold_m must be >= 0");
  require(data_bits >= 0, "scenario: energy.data_bits must be >= 0");
  require(processing_rate > 0,
          "scenario: energy.processing_rate must be > 0");

  const auto check_ground = [&](const char* what, const std::vector<Vec3>& v) {
    for (size_t i = 0; i < v.size(); ++i) {
      require(inside_region(v[i], region_extent_m),
              "scenario: " + std::string(what) + "." + std::to_string(i) +
                  " lies outside the region");
      require(v[i].z() == 0.0,
              "scenario: " + std::string(what) + "." + std::to_string(i) +
                  " is terrestrial and must have z = 0");
    }
  };
  check_ground("source", sources);
  check_ground("destination", destinations);
  check_ground("interferer", interferers);
  for (size_t i = 0; i < relays.size(); ++i) {
    require(inside_region(relays[i], region_extent_m),
            "scenario: abs." + std::to_string(i) +
                " lies outside the region");
    require(relays[i].z() > 0,
            "scenario: abs." + std::to_string(i) +
                " is aerial and must have z > 0");
    require(relays[i].z() >= mobility.height_floor_m,
            "scenario: abs." + std::to_string(i) +
                " starts below the height floor");
    require(relays[i].z() <= mobility.height_ceiling_m,
            "scenario: abs." + std::to_string(i) +
                " starts above the height ceiling");
  }

  require(!commodities.empty(), "scenario: no flow commodities resolved");
  for (size_t k = 0; k < commodities.size(); ++k) {
    const Commodity& c = commodities[k];
    require(c.source >= 0 && c.source < node_count() && c.destination >= 0 &&
                c.destination < node_count(),
            "scenario: commodity." + std::to_string(k) +
                " endpoint index out of range");
    require(c.source != c.destination,
            "scenario: commodity." + std::to_string(k) +
                " source and destination must differ");
    require(c.demand > 0,
            "scenario: commodity." + std::to_string(k) +
                " demand must be > 0");
  }
  if (flow_eval == FlowEval::Multicast)
    for (size_t k = 1; k < commodities.size(); ++k)
      require(commodities[k].source == commodities.front().source,
              "scenario: multicast commodities must share one source");

  channel.validate();
  graph.validate();
  mobility.validate();
  energy.validate();
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  KeyBag bag(text, origin);

  const auto version = bag.take("schema.version");
  require(version.has_value(),
          origin + ": missing required key 'schema.version'");
  require(trim(version->text) == "1",
          origin + ":" + std::to_string(version->line) +
              ": schema.version must be 1 (got '" + version->text + "')");

  Scenario sc;
  sc.name = bag.take_string("name", "");
  sc.region_extent_m = bag.take_vec3("region.extent_m", sc.region_extent_m);
  sc.mode = parse_mode(bag.take_string("mode", "weighted"));
  sc.flow_eval = parse_flow_eval(bag.take_string("flow.eval", "single"));
  sc.runs = bag.take_int("runs", sc.runs);
  sc.seed = bag.take_u64("seed", sc.seed);
  sc.terminal_weight = bag.take_double("weights.terminal", sc.terminal_weight);
  sc.relay_weight = bag.take_double("weights.abs", sc.relay_weight);
  sc.flow_eps = bag.take_double("flow.eps", sc.flow_eps);

  sc.channel.carrier_frequency_hz =
      bag.take_double("channel.carrier_frequency_hz",
                      sc.channel.carrier_frequency_hz);
  sc.channel.path_loss_exponent = bag.take_double(
      "channel.path_loss_exponent", sc.channel.path_loss_exponent);
  sc.channel.mu_los_db = bag.take_double("channel.mu_los_db",
                                         sc.channel.mu_los_db);
  sc.channel.mu_nlos_db =
      bag.take_double("channel.mu_nlos_db", sc.channel.mu_nlos_db);
  sc.channel.psi = bag.take_double("channel.psi", sc.channel.psi);
  sc.channel.eta = bag.take_double("channel.eta", sc.channel.eta);

  sc.graph.bandwidth_hz =
      bag.take_double("graph.bandwidth_hz", sc.graph.bandwidth_hz);
  sc.graph.interference_radius_m = bag.take_double(
      "graph.interference_radius_m", sc.graph.interference_radius_m);
  sc.graph.zeta = bag.take_double("graph.zeta", sc.graph.zeta);
  sc.graph.kappa = bag.take_double("graph.kappa", sc.graph.kappa);
  sc.graph.y0 = bag.take_double("graph.y0", sc.graph.y0);
  sc.graph.sir_cap = bag.take_double("graph.sir_cap", sc.graph.sir_cap);
  sc.graph.capacity_floor_rel = bag.take_double(
      "graph.capacity_floor_rel", sc.graph.capacity_floor_rel);
  sc.graph.forbid_terminal_links = bag.take_bool(
      "graph.forbid_terminal_links", sc.graph.forbid_terminal_links);
  sc.range_threshold_m =
      bag.take_double("graph.range_threshold_m", sc.range_threshold_m);

  sc.mobility.step_time_s =
      bag.take_double("mobility.step_time_s", sc.mobility.step_time_s);
  sc.mobility.v_max_mps =
      bag.take_double("mobility.v_max_mps", sc.mobility.v_max_mps);
  sc.mobility.height_floor_m =
      bag.take_double("mobility.height_floor_m", sc.mobility.height_floor_m);
  sc.mobility.height_ceiling_m = bag.take_double(
      "mobility.height_ceiling_m", sc.mobility.height_ceiling_m);
  sc.mobility.max_iterations =
      bag.take_int("mobility.max_iterations", sc.mobility.max_iterations);
  sc.mobility.convergence_tol = bag.take_double(
      "mobility.convergence_tol", sc.mobility.convergence_tol);
  sc.mobility.fd_step_m =
      bag.take_double("mobility.fd_step_m", sc.mobility.fd_step_m);
  {
    const std::string source =
        bag.take_string("mobility.fiedler_source", "centralized");
    if (source == "centralized")
      sc.fiedler_source = mobility::FiedlerSource::Centralized;
    else if (source == "distributed")
      sc.fiedler_source = mobility::FiedlerSource::Distributed;
    else
      throw ValidationError(
          origin +
          ": mobility.fiedler_source must be 'centralized' or 'distributed' "
          "(got '" + source + "')");
  }

  sc.distfiedler.outer_iterations = bag.take_int(
      "distfiedler.outer_iterations", sc.distfiedler.outer_iterations);
  sc.distfiedler.gossip_rounds = bag.take_int("distfiedler.gossip_rounds",
                                              sc.distfiedler.gossip_rounds);
  sc.distfiedler.seed = bag.take_u64("distfiedler.seed", sc.distfiedler.seed);

  sc.energy.air_density =
      bag.take_double("energy.air_density", sc.energy.air_density);
  sc.energy.drag_coefficient =
      bag.take_double("energy.drag_coefficient", sc.energy.drag_coefficient);
  sc.energy.reference_area_m2 = bag.take_double("energy.reference_area_m2",
                                                sc.energy.reference_area_m2);
  sc.energy.blade_chord_m =
      bag.take_double("energy.blade_chord_m", sc.energy.blade_chord_m);
  sc.energy.blade_count =
      bag.take_int("energy.blade_count", sc.energy.blade_count);
  sc.energy.angular_velocity_rad_s = bag.take_double(
      "energy.angular_velocity_rad_s", sc.energy.angular_velocity_rad_s);
  sc.energy.rotor_radius_m =
      bag.take_double("energy.rotor_radius_m", sc.energy.rotor_radius_m);
  sc.energy.weight_n = bag.take_double("energy.weight_n", sc.energy.weight_n);
  sc.energy.clamp_descent =
      bag.take_bool("energy.clamp_descent", sc.energy.clamp_descent);
  sc.data_bits = bag.take_double("energy.data_bits", sc.data_bits);
  sc.processing_rate =
      bag.take_double("energy.processing_rate", sc.processing_rate);

  sc.sources = bag.take_positions("source");
  sc.destinations = bag.take_positions("destination");
  sc.interferers = bag.take_positions("interferer");
  sc.relays = bag.take_positions("abs");
  {
    const bool has_generator = bag.has("abs.line.start") ||
                               bag.has("abs.line.step") ||
                               bag.has("abs.line.count");
    if (has_generator) {
      require(sc.relays.empty(),
              origin + ": use either abs.<n> entries or the abs.line.* "
                       "generator, not both");
      const auto start = bag.take("abs.line.start");
      const auto step = bag.take("abs.line.step");
      const auto count = bag.take("abs.line.count");
      require(start && step && count,
              origin + ": the abs.line generator needs abs.line.start, "
                       "abs.line.step, and abs.line.count");
      const Vec3 p0 = bag.parse_vec3(*start, "abs.line.start");
      const Vec3 dp = bag.parse_vec3(*step, "abs.line.step");
      const double raw_count = bag.parse_double(*count, "abs.line.count");
      require(raw_count == std::floor(raw_count) && raw_count >= 1 &&
                  raw_count <= 4096,
              origin + ":" + std::to_string(count->line) +
                  ": abs.line.count must be a positive integer");
      for (int i = 0; i < static_cast<int>(raw_count); ++i)
        sc.relays.push_back(p0 + static_cast<double>(i) * dp);
    }
  }

  sc.commodities = bag.take_commodities();
  bag.finish();

  // Resolve default commodities from the declared terminals.
  if (sc.commodities.empty()) {
    const int ns = static_cast<int>(sc.sources.size());
    const int nd = static_cast<int>(sc.destinations.size());
    require(ns >= 1 && nd >= 1,
            origin + ": at least one source and one destination are required");
    switch (sc.flow_eval) {
      case FlowEval::Single:
        sc.commodities.push_back({0, ns, 1.0});
        break;
      case FlowEval::Multicast:
        for (int d = 0; d < nd; ++d) sc.commodities.push_back({0, ns + d, 1.0});
        break;
      case FlowEval::MultiUnicast:
        require(ns == nd,
                origin + ": multi-unicast needs explicit commodity.<n>.* keys "
                         "when source and destination counts differ");
        for (int k = 0; k < ns; ++k)
          sc.commodities.push_back({k, ns + k, 1.0});
        break;
    }
  }

  try {
    sc.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good())
    throw ValidationError("cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

BaselineResult random_stationary_baseline(const Scenario& sc, int runs,
                                          std::uint64_t seed) {
  require(runs >= 1, "baseline: runs must be >= 1");
  const netgraph::NetworkState base = sc.initial_state();
  const mobility::FlowMetric metric = sc.metric();
  const std::vector<int> relays = sc.relay_ids();

  BaselineResult out;
  for (int run = 0; run < runs; ++run) {
    netgraph::NetworkState state = base;
    std::uint64_t stream = derive_stream(seed, static_cast<std::uint64_t>(run));
    for (int id : relays) {
      Vec3& p = state.positions[static_cast<size_t>(id)];
      p.x() = uniform_in(stream, 0.0, sc.region_extent_m.x());
      p.y() = uniform_in(stream, 0.0, sc.region_extent_m.y());
      // altitude keeps its configured initial value
    }
    const netgraph::CapacityGraph g = netgraph::build_capacity_graph(state);
    out.per_run.push_back(metric(g));
    out.positions_per_run.push_back(state.positions);
  }

  double sum = 0.0;
  for (double v : out.per_run) sum += v;
  out.mean = sum / runs;
  if (runs > 1) {
    double ss = 0.0;
    for (double v : out.per_run) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / (runs - 1));
  }
  return out;
}

ExperimentResult run_experiment(const Scenario& sc,
                                const std::string& out_dir) {
  sc.validate();
  fs::create_directories(out_dir);

  ExperimentResult res;
  res.mode = sc.mode;
  const std::string trajectories_path = csv_path(out_dir, "trajectories.csv");
  const std::string flow_path = csv_path(out_dir, "flow.csv");
  const mobility::FlowMetric metric = sc.metric();
  std::map<int, double> slot_duration;

  if (sc.mode == Mode::RandomBaseline) {
    const BaselineResult b =
        random_stationary_baseline(sc, sc.runs, sc.seed);
    res.baseline_mean = b.mean;
    res.baseline_stddev = b.stddev;

    std::ofstream traj = open_csv(trajectories_path);
    traj << "run,slot,node_id,x,y,z\n";
    for (size_t run = 0; run < b.positions_per_run.size(); ++run)
      for (size_t node = 0; node < b.positions_per_run[run].size(); ++node) {
        const Vec3& p = b.positions_per_run[run][node];
        traj << run << ",0," << node << ',' << format_number(p.x()) << ','
             << format_number(p.y()) << ',' << format_number(p.z()) << '\n';
      }
    std::ofstream flow = open_csv(flow_path);
    flow << "run,slot,metric_name,value\n";
    for (size_t run = 0; run < b.per_run.size(); ++run)
      flow << run << ",0," << sc.metric_name() << ','
           << format_number(b.per_run[run]) << '\n';
    flow << "-1,0," << sc.metric_name() << "_mean,"
         << format_number(b.mean) << '\n';
    flow << "-1,0," << sc.metric_name() << "_stddev,"
         << format_number(b.stddev) << '\n';
  } else {
    const netgraph::NetworkState initial = sc.initial_state();
    const netgraph::WeightMatrix w = sc.weights();
    const mobility::TrajectoryLog log = mobility::run_maxflow_trajectory(
        initial, w, sc.mobility, metric, sc.fiedler_source, sc.distfiedler);
    res.slots_executed = static_cast<int>(log.slots.size()) - 1;
    res.converged = log.converged;
    res.stalled = log.stalled;
    res.final_flow = final_flow_of(log);
    res.final_lambda2 = log.slots.back().lambda2;
    slot_duration[0] = log.slot_duration_s;

    std::ofstream traj = open_csv(trajectories_path);
    traj << "run,slot,node_id,x,y,z\n";
    write_trajectory_rows(traj, 0, log);
    std::ofstream flow = open_csv(flow_path);
    flow << "run,slot,metric_name,value\n";
    write_flow_rows(flow, 0, sc.metric_name(), log);

    if (sc.mode == Mode::EnergyEfficient) {
      const energy::EnergyReport report =
          energy::trajectory_energy(log, sc.energy);
      const std::vector<Vec3>& final_positions = log.slots.back().positions;

      double common_time = 0.0;
      for (int id : sc.relay_ids())
        common_time = std::max(
            common_time, report.nodes[static_cast<size_t>(id)].moving_time_s);
      const mobility::TrajectoryLog straight =
          mobility::straight_line_trajectory(
              initial, final_positions, w, sc.mobility, metric,
              common_time > 0 ? common_time : -1.0);
      res.straight_final_flow = final_flow_of(straight);
      slot_duration[1] = straight.slot_duration_s;
      write_trajectory_rows(traj, 1, straight);
      write_flow_rows(flow, 1, sc.metric_name(), straight);

      const std::string energy_path = csv_path(out_dir, "energy.csv");
      std::ofstream energy_csv = open_csv(energy_path);
      energy_csv << "abs_id,D_m,E_maxflow_J,E_efficient_J,savings_pct\n";
      for (int id : sc.relay_ids()) {
        const energy::NodeEnergy& node =
            report.nodes[static_cast<size_t>(id)];
        EnergyRow row;
        row.abs_id = id;
        row.d_m = node.displacement_m;
        row.e_maxflow_j = node.energy_j;
        const Vec3 delta = final_positions[static_cast<size_t>(id)] -
                           initial.positions[static_cast<size_t>(id)];
        row.e_efficient_j =
            energy::straight_leg_energy(delta, node.moving_time_s, sc.energy);
        row.savings_pct =
            row.e_maxflow_j > 0
                ? energy::energy_savings(row.e_efficient_j, row.e_maxflow_j)
                : 0.0;
        res.energy.push_back(row);
        energy_csv << row.abs_id << ',' << format_number(row.d_m) << ','
                   << format_number(row.e_maxflow_j) << ','
                   << format_number(row.e_efficient_j) << ','
                   << format_number(row.savings_pct) << '\n';
      }
      res.files.push_back(energy_path);
      res.computation_latency_s = mobility::computation_latency(
          sc.data_bits, sc.processing_rate,
          static_cast<double>(res.slots_executed));
    }

    if (sc.fiedler_source == mobility::FiedlerSource::Distributed &&
        !log.solver_traces.empty())
      write_distfiedler_trace(csv_path(out_dir, "distfiedler_error.csv"),
                              log.solver_traces.front(), res.files);
  }

  res.files.insert(res.files.begin(), {trajectories_path, flow_path});
  revalidate_trajectories(trajectories_path, sc, slot_duration);
  return res;
}

}  // namespace absnet::scenario
