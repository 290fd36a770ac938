// src/scenario.cpp

#include "mecgame/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "mecgame/philox.hpp"
#include "mecgame/result_table.hpp"

namespace mecgame {

namespace {

constexpr std::uint64_t kRingStream = 0x52494E47;  // "RING"

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!node.IsMap()) throw ScenarioError(where + ": expected a table");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ScenarioError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T read(const YAML::Node& node, const std::string& key, const std::string& where, T fallback) {
  const YAML::Node value = node[key];
  if (!value.IsDefined() || value.IsNull()) return fallback;
  if (!value.IsScalar()) throw ScenarioError(where + "." + key + ": expected a scalar");
  try {
    return value.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioError(where + "." + key + ": cannot read '" + value.Scalar() + "'");
  }
}

template <class T>
std::vector<T> read_list(const YAML::Node& node, const std::string& key,
                         const std::string& where, std::vector<T> fallback) {
  const YAML::Node value = node[key];
  if (!value.IsDefined() || value.IsNull()) return fallback;
  if (!value.IsSequence()) throw ScenarioError(where + "." + key + ": expected a list");
  std::vector<T> out;
  for (const auto& item : value) {
    try {
      out.push_back(item.as<T>());
    } catch (const YAML::Exception&) {
      throw ScenarioError(where + "." + key + ": bad list entry");
    }
  }
  return out;
}

YAML::Node require_table(const YAML::Node& parent, const std::string& key,
                         const std::string& where) {
  const YAML::Node node = parent[key];
  if (!node.IsDefined() || !node.IsMap()) {
    throw ScenarioError(where + ": missing table '" + key + "'");
  }
  return node;
}

ChannelModel parse_channel(const YAML::Node& node) {
  const std::string where = "system.channel";
  check_keys(node, {"family", "mean_gain"}, where);
  const auto family = read<std::string>(node, "family", where, "rayleigh");
  if (family != "rayleigh") throw ScenarioError(where + ": unsupported family '" + family + "'");
  try {
    return ChannelModel::rayleigh(read<double>(node, "mean_gain", where, 1.0));
  } catch (const DomainError& e) {
    throw ScenarioError(where + ": " + e.what());
  }
}

SystemConfig parse_system(const YAML::Node& node) {
  SystemConfig c;
  if (!node.IsDefined() || node.IsNull()) return c;
  const std::string w = "system";
  check_keys(node,
             {"slot_seconds", "arrival_rate", "cycles_per_job", "offload_nats", "transmit_power",
              "noise_power", "path_loss_exponent", "edge_cpu_hz", "rate_unit_scale", "price",
              "epsilon", "max_sweeps", "channel"},
             w);
  c.slot_seconds = read(node, "slot_seconds", w, c.slot_seconds);
  c.arrival_rate = read(node, "arrival_rate", w, c.arrival_rate);
  c.cycles_per_job = read(node, "cycles_per_job", w, c.cycles_per_job);
  c.offload_nats = read(node, "offload_nats", w, c.offload_nats);
  c.transmit_power = read(node, "transmit_power", w, c.transmit_power);
  c.noise_power = read(node, "noise_power", w, c.noise_power);
  c.path_loss_exponent = read(node, "path_loss_exponent", w, c.path_loss_exponent);
  c.edge_cpu_hz = read(node, "edge_cpu_hz", w, c.edge_cpu_hz);
  c.rate_unit_scale = read(node, "rate_unit_scale", w, c.rate_unit_scale);
  c.price = read(node, "price", w, c.price);
  c.epsilon = read(node, "epsilon", w, c.epsilon);
  c.max_sweeps = read(node, "max_sweeps", w, c.max_sweeps);
  if (node["channel"].IsDefined()) c.channel = parse_channel(node["channel"]);
  return c;
}

UserProfile parse_profile(const YAML::Node& node, const std::string& w) {
  UserProfile p;
  if (!node.IsDefined() || node.IsNull()) return p;
  check_keys(node,
             {"distance", "snr", "delay_weight", "energy_weight", "local_cpu_hz",
              "energy_coefficient"},
             w);
  p.distance = read(node, "distance", w, p.distance);
  if (node["snr"].IsDefined() && !node["snr"].IsNull()) {
    p.snr_override = read<double>(node, "snr", w, 0.0);
  }
  p.delay_weight = read(node, "delay_weight", w, p.delay_weight);
  p.energy_weight = read(node, "energy_weight", w, p.energy_weight);
  p.local_cpu_hz = read(node, "local_cpu_hz", w, p.local_cpu_hz);
  p.energy_coefficient = read(node, "energy_coefficient", w, p.energy_coefficient);
  return p;
}

UsersSpec parse_users(const YAML::Node& node) {
  check_keys(node, {"homogeneous", "ring"}, "users");
  if (node.size() != 1) throw ScenarioError("users: give exactly one of 'homogeneous' or 'ring'");
  if (node["homogeneous"].IsDefined()) {
    const std::string w = "users.homogeneous";
    const YAML::Node h = node["homogeneous"];
    check_keys(h, {"n", "profile"}, w);
    HomogeneousUsers out;
    out.n = read(h, "n", w, out.n);
    out.profile = parse_profile(h["profile"], w + ".profile");
    return out;
  }
  const std::string w = "users.ring";
  const YAML::Node r = node["ring"];
  check_keys(r, {"n", "r_min", "r_max", "seed", "profile"}, w);
  RingUsers out;
  out.n = read(r, "n", w, out.n);
  out.r_min = read(r, "r_min", w, out.r_min);
  out.r_max = read(r, "r_max", w, out.r_max);
  out.seed = read(r, "seed", w, out.seed);
  out.profile = parse_profile(r["profile"], w + ".profile");
  return out;
}

ExperimentSpec parse_experiment(const YAML::Node& node) {
  ExperimentSpec e;
  if (!node.IsDefined() || node.IsNull()) return e;
  const std::string w = "experiment";
  check_keys(node, {"kind", "n_grid", "d_grid", "horizon_slots", "warmup_slots", "seed"}, w);
  const auto kind = read<std::string>(node, "kind", w, to_string(e.kind));
  try {
    e.kind = experiment_kind_from_string(kind);
  } catch (const std::invalid_argument&) {
    throw ScenarioError(w + ".kind: unknown experiment '" + kind + "'");
  }
  e.n_grid = read_list(node, "n_grid", w, e.n_grid);
  e.d_grid = read_list(node, "d_grid", w, e.d_grid);
  e.horizon_slots = read(node, "horizon_slots", w, e.horizon_slots);
  if (node["warmup_slots"].IsDefined() && !node["warmup_slots"].IsNull()) {
    e.warmup_slots = read<std::int64_t>(node, "warmup_slots", w, 0);
  }
  e.seed = read(node, "seed", w, e.seed);
  return e;
}

void emit_profile(YAML::Emitter& out, const UserProfile& p) {
  out << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "distance" << YAML::Value << format_number(p.distance);
  if (p.snr_override) out << YAML::Key << "snr" << YAML::Value << format_number(*p.snr_override);
  out << YAML::Key << "delay_weight" << YAML::Value << format_number(p.delay_weight);
  out << YAML::Key << "energy_weight" << YAML::Value << format_number(p.energy_weight);
  out << YAML::Key << "local_cpu_hz" << YAML::Value << format_number(p.local_cpu_hz);
  out << YAML::Key << "energy_coefficient" << YAML::Value << format_number(p.energy_coefficient);
  out << YAML::EndMap;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Convergence:
      return "convergence";
    case ExperimentKind::SweepN:
      return "sweep_n";
    case ExperimentKind::SweepD:
      return "sweep_d";
    case ExperimentKind::Delays:
      return "delays";
    case ExperimentKind::SimValidate:
      return "sim_validate";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::Convergence, ExperimentKind::SweepN, ExperimentKind::SweepD,
                 ExperimentKind::Delays, ExperimentKind::SimValidate}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind: " + name);
}

int ScenarioFile::user_count() const {
  return std::visit([](const auto& u) { return u.n; }, users);
}

void ScenarioFile::set_user_count(int n) {
  std::visit([n](auto& u) { u.n = n; }, users);
  system.n_users = n;
}

void ScenarioFile::set_seed(std::uint64_t seed) {
  if (auto* ring = std::get_if<RingUsers>(&users)) ring->seed = seed;
  experiment.seed = seed;
}

std::vector<double> ring_radii(const RingUsers& ring) {
  PhiloxStream stream(ring.seed, kRingStream);
  std::vector<double> radii(static_cast<std::size_t>(std::max(ring.n, 0)));
  for (double& r : radii) r = ring.r_min + (ring.r_max - ring.r_min) * stream.uniform();
  return radii;
}

std::vector<UserProfile> ScenarioFile::materialize_users() const {
  if (const auto* h = std::get_if<HomogeneousUsers>(&users)) {
    return std::vector<UserProfile>(static_cast<std::size_t>(h->n), h->profile);
  }
  const auto& ring = std::get<RingUsers>(users);
  std::vector<UserProfile> out;
  for (double r : ring_radii(ring)) {
    UserProfile p = ring.profile;
    p.distance = r;
    p.snr_override.reset();
    out.push_back(p);
  }
  return out;
}

void ScenarioFile::validate() const {
  try {
    system.validate();
    if (user_count() < 1) throw ScenarioError("users.n must be at least 1");
    if (const auto* ring = std::get_if<RingUsers>(&users)) {
      if (!(ring->r_min > 0.0 && ring->r_min < ring->r_max)) {
        throw ScenarioError("users.ring: need 0 < r_min < r_max");
      }
    }
    for (const auto& u : materialize_users()) u.validate(system);
    if (experiment.n_grid.empty() || experiment.d_grid.empty()) {
      throw ScenarioError("experiment: grids must not be empty");
    }
    for (int n : experiment.n_grid) {
      if (n < 1) throw ScenarioError("experiment.n_grid: entries must be at least 1");
    }
    for (double d : experiment.d_grid) {
      if (!(d > 0.0)) throw ScenarioError("experiment.d_grid: entries must be positive");
    }
    if (experiment.horizon_slots <= 0) throw ScenarioError("experiment.horizon_slots must be positive");
    if (experiment.warmup_slots &&
        (*experiment.warmup_slots < 0 || *experiment.warmup_slots >= experiment.horizon_slots)) {
      throw ScenarioError("experiment.warmup_slots must lie in [0, horizon_slots)");
    }
  } catch (const DomainError& e) {
    throw ScenarioError(e.what());
  } catch (const InfeasibleError& e) {
    throw ScenarioError(e.what());
  }
}

ScenarioFile parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::string("scenario is not valid YAML: ") + e.what());
  }
  check_keys(root, {"system", "users", "experiment"}, "scenario");
  ScenarioFile s;
  s.system = parse_system(root["system"]);
  s.users = parse_users(require_table(root, "users", "scenario"));
  s.experiment = parse_experiment(root["experiment"]);
  s.system.n_users = s.user_count();
  s.validate();
  return s;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioFile& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  const SystemConfig& c = s.system;
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "slot_seconds" << YAML::Value << format_number(c.slot_seconds);
  out << YAML::Key << "arrival_rate" << YAML::Value << format_number(c.arrival_rate);
  out << YAML::Key << "cycles_per_job" << YAML::Value << format_number(c.cycles_per_job);
  out << YAML::Key << "offload_nats" << YAML::Value << format_number(c.offload_nats);
  out << YAML::Key << "transmit_power" << YAML::Value << format_number(c.transmit_power);
  out << YAML::Key << "noise_power" << YAML::Value << format_number(c.noise_power);
  out << YAML::Key << "path_loss_exponent" << YAML::Value << format_number(c.path_loss_exponent);
  out << YAML::Key << "edge_cpu_hz" << YAML::Value << format_number(c.edge_cpu_hz);
  out << YAML::Key << "rate_unit_scale" << YAML::Value << format_number(c.rate_unit_scale);
  out << YAML::Key << "price" << YAML::Value << format_number(c.price);
  out << YAML::Key << "epsilon" << YAML::Value << format_number(c.epsilon);
  out << YAML::Key << "max_sweeps" << YAML::Value << c.max_sweeps;
  out << YAML::Key << "channel" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "family" << YAML::Value << c.channel.name();
  out << YAML::Key << "mean_gain" << YAML::Value << format_number(c.channel.mean_gain());
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "users" << YAML::Value << YAML::BeginMap;
  if (const auto* h = std::get_if<HomogeneousUsers>(&s.users)) {
    out << YAML::Key << "homogeneous" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << h->n;
    emit_profile(out, h->profile);
    out << YAML::EndMap;
  } else {
    const auto& r = std::get<RingUsers>(s.users);
    out << YAML::Key << "ring" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << r.n;
    out << YAML::Key << "r_min" << YAML::Value << format_number(r.r_min);
    out << YAML::Key << "r_max" << YAML::Value << format_number(r.r_max);
    out << YAML::Key << "seed" << YAML::Value << r.seed;
    emit_profile(out, r.profile);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  const ExperimentSpec& e = s.experiment;
  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(e.kind);
  out << YAML::Key << "n_grid" << YAML::Value << YAML::Flow << e.n_grid;
  out << YAML::Key << "d_grid" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double d : e.d_grid) out << format_number(d);
  out << YAML::EndSeq;
  out << YAML::Key << "horizon_slots" << YAML::Value << e.horizon_slots;
  if (e.warmup_slots) out << YAML::Key << "warmup_slots" << YAML::Value << *e.warmup_slots;
  out << YAML::Key << "seed" << YAML::Value << e.seed;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mecgame
