#include "wearnet/config.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <set>

namespace wearnet {

namespace {

using nlohmann::json;

const std::set<std::string> kScenarioKeys{
    "enclosure_length_m", "enclosure_width_m", "enclosure_height_m", "interferers", "body_diameter_m",
    "body_height_m", "wearable_offset_m", "link_distance_m", "wearable_height_min_m", "wearable_height_max_m",
    "receiver", "receiver_position_m", "onbody_beta", "reflectivity", "array_elements", "power_dbm",
    "wavelength_m", "noise_figure_db", "noise_psd_dbm_per_hz", "bandwidth_hz", "steering", "occlusion",
    "transmit_gains"};

const std::set<std::string> kExperimentKeys{
    "id", "seed", "replications", "mode", "interferers", "wearable_offsets_m", "array_elements", "bandwidths_hz",
    "onbody_betas", "shadow_losses_db", "reflectivities", "receivers"};

void check_keys(const json& section, const std::set<std::string>& allowed, const std::string& prefix) {
  if (!section.is_object()) throw ConfigError(prefix, "must be a JSON object");
  for (const auto& [key, value] : section.items())
    if (!allowed.count(key)) throw ConfigError(prefix + "." + key, "unknown key");
}

// Reads section[key] into out if present, naming the field on type errors.
template <typename T>
void read(const json& section, const std::string& prefix, const char* key, T& out) {
  auto it = section.find(key);
  if (it == section.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + "." + key, std::string("wrong type (") + e.what() + ")");
  }
}

template <typename Enum>
void read_enum(const json& section, const std::string& prefix, const char* key, Enum& out,
               const std::function<Enum(std::string_view)>& parse) {
  std::string s;
  auto it = section.find(key);
  if (it == section.end()) return;
  read(section, prefix, key, s);
  try {
    out = parse(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(prefix + "." + key, e.what());
  }
}

template <typename Enum>
void read_enum_list(const json& section, const std::string& prefix, const char* key, std::vector<Enum>& out,
                    const std::function<Enum(std::string_view)>& parse) {
  std::vector<std::string> names;
  if (section.find(key) == section.end()) return;
  read(section, prefix, key, names);
  out.clear();
  for (const auto& n : names) {
    try {
      out.push_back(parse(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(prefix + "." + key, e.what());
    }
  }
}

std::string field_of(const std::string& message) {
  const auto space = message.find(' ');
  return message.substr(0, space);
}

void parse_scenario(const json& s, ScenarioConfig& c) {
  const std::string p = "scenario";
  check_keys(s, kScenarioKeys, p);
  read(s, p, "enclosure_length_m", c.enclosure.length);
  read(s, p, "enclosure_width_m", c.enclosure.width);
  read(s, p, "enclosure_height_m", c.enclosure.height);
  read(s, p, "interferers", c.interferers);
  read(s, p, "body_diameter_m", c.body_diameter);
  read(s, p, "body_height_m", c.body_height);
  read(s, p, "wearable_offset_m", c.wearable_offset);
  read(s, p, "link_distance_m", c.link_distance);
  read(s, p, "wearable_height_min_m", c.wearable_height_min);
  read(s, p, "wearable_height_max_m", c.wearable_height_max);
  read_enum<ReceiverPlacement>(s, p, "receiver", c.placement, parse_receiver_placement);
  if (s.contains("receiver_position_m")) {
    std::vector<double> xyz;
    read(s, p, "receiver_position_m", xyz);
    if (xyz.size() != 3) throw ConfigError(p + ".receiver_position_m", "must be [x, y, z]");
    c.receiver_position = {xyz[0], xyz[1], xyz[2]};
  }
  read(s, p, "onbody_beta", c.onbody_beta);
  read_enum<Reflectivity>(s, p, "reflectivity", c.reflectivity, parse_reflectivity);
  read(s, p, "array_elements", c.array_elements);
  read(s, p, "power_dbm", c.power_dbm);
  read(s, p, "wavelength_m", c.wavelength);
  read(s, p, "noise_figure_db", c.noise_figure_db);
  read(s, p, "noise_psd_dbm_per_hz", c.noise_psd_dbm_per_hz);
  read(s, p, "bandwidth_hz", c.bandwidth);
  read_enum<SteeringPolicy>(s, p, "steering", c.steering, parse_steering_policy);
  read_enum<OcclusionRule>(s, p, "occlusion", c.occlusion, parse_occlusion_rule);
  if (s.contains("transmit_gains")) {
    std::string g;
    read(s, p, "transmit_gains", g);
    if (g != "exact" && g != "stochastic")
      throw ConfigError(p + ".transmit_gains", "must be \"exact\" or \"stochastic\"");
    c.stochastic_transmit_gains = g == "stochastic";
  }
}

void parse_experiment(const json& e, ExperimentSpec& x) {
  const std::string p = "experiment";
  read(e, p, "seed", x.seed);
  read(e, p, "replications", x.replications);
  read_enum<ModeSelection>(e, p, "mode", x.mode, parse_mode_selection);
  read(e, p, "interferers", x.interferers);
  read(e, p, "wearable_offsets_m", x.wearable_offsets);
  read(e, p, "array_elements", x.array_elements);
  read(e, p, "bandwidths_hz", x.bandwidths);
  read(e, p, "onbody_betas", x.onbody_betas);
  read(e, p, "shadow_losses_db", x.shadow_losses_db);
  read_enum_list<Reflectivity>(e, p, "reflectivities", x.reflectivities, parse_reflectivity);
  read_enum_list<ReceiverPlacement>(e, p, "receivers", x.placements, parse_receiver_placement);
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunConfig default_run_config(ExperimentId id) {
  RunConfig r{default_scenario(id), default_experiment(id)};
  return r;
}

RunConfig parse_config(const json& input, ExperimentId default_id) {
  const json* doc = &input;
  if (input.is_object() && input.contains("config") && input.contains("tool")) doc = &input.at("config");
  if (!doc->is_object()) throw ConfigError("config", "top level must be a JSON object");
  for (const auto& [key, value] : doc->items())
    if (key != "scenario" && key != "experiment") throw ConfigError(key, "unknown section");

  ExperimentId id = default_id;
  const json empty = json::object();
  const json& exp = doc->contains("experiment") ? doc->at("experiment") : empty;
  check_keys(exp, kExperimentKeys, "experiment");
  read_enum<ExperimentId>(exp, "experiment", "id", id, parse_experiment_id);

  RunConfig run = default_run_config(id);
  if (doc->contains("scenario")) parse_scenario(doc->at("scenario"), run.scenario);
  parse_experiment(exp, run.experiment);
  fill_defaults(run.experiment);

  try {
    run.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario." + field_of(e.what()), e.what());
  }
  try {
    run.experiment.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("experiment", e.what());
  }
  return run;
}

RunConfig load_config(const std::filesystem::path& path, ExperimentId default_id) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot be opened for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("is not valid JSON (") + e.what() + ")");
  }
  return parse_config(doc, default_id);
}

json to_json(const ScenarioConfig& c) {
  return json{{"enclosure_length_m", c.enclosure.length},
              {"enclosure_width_m", c.enclosure.width},
              {"enclosure_height_m", c.enclosure.height},
              {"interferers", c.interferers},
              {"body_diameter_m", c.body_diameter},
              {"body_height_m", c.body_height},
              {"wearable_offset_m", c.wearable_offset},
              {"link_distance_m", c.link_distance},
              {"wearable_height_min_m", c.wearable_height_min},
              {"wearable_height_max_m", c.wearable_height_max},
              {"receiver", to_string(c.placement)},
              {"receiver_position_m", {c.receiver_position.x(), c.receiver_position.y(), c.receiver_position.z()}},
              {"onbody_beta", c.onbody_beta},
              {"reflectivity", to_string(c.reflectivity)},
              {"array_elements", c.array_elements},
              {"power_dbm", c.power_dbm},
              {"wavelength_m", c.wavelength},
              {"noise_figure_db", c.noise_figure_db},
              {"noise_psd_dbm_per_hz", c.noise_psd_dbm_per_hz},
              {"bandwidth_hz", c.bandwidth},
              {"steering", to_string(c.steering)},
              {"occlusion", to_string(c.occlusion)},
              {"transmit_gains", c.stochastic_transmit_gains ? "stochastic" : "exact"}};
}

json to_json(const ExperimentSpec& x) {
  json refl = json::array();
  for (auto r : x.reflectivities) refl.push_back(to_string(r));
  json places = json::array();
  for (auto p : x.placements) places.push_back(to_string(p));
  return json{{"id", to_string(x.id)},
              {"seed", x.seed},
              {"replications", x.replications},
              {"mode", to_string(x.mode)},
              {"interferers", x.interferers},
              {"wearable_offsets_m", x.wearable_offsets},
              {"array_elements", x.array_elements},
              {"bandwidths_hz", x.bandwidths},
              {"onbody_betas", x.onbody_betas},
              {"shadow_losses_db", x.shadow_losses_db},
              {"reflectivities", refl},
              {"receivers", places}};
}

json to_json(const RunConfig& run) { return json{{"scenario", to_json(run.scenario)}, {"experiment", to_json(run.experiment)}}; }

std::string config_hash(const RunConfig& run) {
  const std::string text = to_json(run).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

json manifest_json(const RunConfig& run, const std::string& timestamp) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"timestamp", timestamp},
              {"seed", run.experiment.seed},
              {"mode", to_string(run.experiment.mode)},
              {"config_hash", config_hash(run)},
              {"config", to_json(run)}};
}

std::filesystem::path emit_manifest(const std::filesystem::path& dir, const RunConfig& run) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write run manifest to " + path.string());
  out << manifest_json(run, utc_timestamp()).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing run manifest to " + path.string());
  return path;
}

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--workers", "must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("SIM_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) throw ConfigError("SIM_WORKERS", "must be an integer in 1..4096");
    return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace wearnet
