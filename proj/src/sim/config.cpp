#include "dragoncast/sim/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "dragoncast/config_file.hpp"

namespace dragoncast {

namespace {

// Field descriptors bind each config key to its storage so parsing, the
// resolved echo, validation messages, and sweep overrides all share one
// schema.
struct FieldDesc {
  std::string section;
  std::string key;
  std::function<void(SimConfig&, const std::string&)> set;  // throws std::invalid_argument
  std::function<std::string(const SimConfig&)> get;
};

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("trailing junk in '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("trailing junk in '" + s + "'");
  return v;
}

template <typename T>
std::uint64_t checked_u(const std::string& s, std::uint64_t max) {
  const std::uint64_t v = parse_u64(s);
  if (v > max) throw std::invalid_argument("value " + s + " too large");
  return static_cast<T>(v);
}

const std::vector<FieldDesc>& schema() {
  static const std::vector<FieldDesc> fields = [] {
    std::vector<FieldDesc> f;
    auto dbl = [&f](const char* sec, const char* key, double SimConfig::*member) {
      f.push_back({sec, key,
                   [member](SimConfig& c, const std::string& v) { c.*member = parse_double(v); },
                   [member](const SimConfig& c) { return format_double(c.*member); }});
    };
    f.push_back({"sim", "n_nodes",
                 [](SimConfig& c, const std::string& v) {
                   c.n_nodes = static_cast<std::uint16_t>(checked_u<std::uint16_t>(v, 0xffff));
                 },
                 [](const SimConfig& c) { return std::to_string(c.n_nodes); }});
    dbl("sim", "field_width", &SimConfig::field_width);
    dbl("sim", "field_height", &SimConfig::field_height);
    dbl("sim", "radio_range", &SimConfig::radio_range);
    f.push_back({"sim", "placement",
                 [](SimConfig& c, const std::string& v) {
                   if (v == "uniform") c.placement = Placement::uniform;
                   else if (v == "line") c.placement = Placement::line;
                   else throw std::invalid_argument("expected uniform|line, got '" + v + "'");
                 },
                 [](const SimConfig& c) {
                   return std::string(c.placement == Placement::uniform ? "uniform" : "line");
                 }});
    dbl("sim", "line_spacing", &SimConfig::line_spacing);
    dbl("sim", "speed_min", &SimConfig::speed_min);
    dbl("sim", "speed_max", &SimConfig::speed_max);
    dbl("sim", "pause_time", &SimConfig::pause_time);
    dbl("sim", "loss_probability", &SimConfig::loss_probability);
    f.push_back({"sim", "collision_model",
                 [](SimConfig& c, const std::string& v) {
                   if (v == "off") c.collision_model = CollisionModel::off;
                   else if (v == "overlap") c.collision_model = CollisionModel::overlap;
                   else throw std::invalid_argument("expected off|overlap, got '" + v + "'");
                 },
                 [](const SimConfig& c) {
                   return std::string(c.collision_model == CollisionModel::off ? "off" : "overlap");
                 }});
    dbl("sim", "bitrate", &SimConfig::bitrate);
    f.push_back({"sim", "payload_size",
                 [](SimConfig& c, const std::string& v) {
                   c.payload_size = static_cast<std::size_t>(checked_u<std::size_t>(v, 1u << 20));
                 },
                 [](const SimConfig& c) { return std::to_string(c.payload_size); }});
    dbl("sim", "jitter", &SimConfig::jitter);
    dbl("sim", "horizon", &SimConfig::horizon);
    dbl("sim", "sample_period", &SimConfig::sample_period);
    f.push_back({"sim", "seed",
                 [](SimConfig& c, const std::string& v) { c.seed = parse_u64(v); },
                 [](const SimConfig& c) { return std::to_string(c.seed); }});

    f.push_back({"coding", "field",
                 [](SimConfig& c, const std::string& v) {
                   if (v == "gf2") c.field = FieldOrder::gf2;
                   else if (v == "gf256") c.field = FieldOrder::gf256;
                   else throw std::invalid_argument("expected gf2|gf256, got '" + v + "'");
                 },
                 [](const SimConfig& c) {
                   return std::string(c.field == FieldOrder::gf2 ? "gf2" : "gf256");
                 }});
    f.push_back({"coding", "generation_size",
                 [](SimConfig& c, const std::string& v) {
                   c.generation_size = static_cast<std::uint16_t>(checked_u<std::uint16_t>(v, 0xffff));
                 },
                 [](const SimConfig& c) { return std::to_string(c.generation_size); }});
    f.push_back({"coding", "window",
                 [](SimConfig& c, const std::string& v) {
                   c.window = static_cast<std::uint16_t>(checked_u<std::uint16_t>(v, 0xffff));
                 },
                 [](const SimConfig& c) { return std::to_string(c.window); }});

    dbl("protocol", "lifetime", &SimConfig::lifetime);
    dbl("protocol", "source_rate", &SimConfig::source_rate);

    f.push_back({"rate", "policy",
                 [](SimConfig& c, const std::string& v) {
                   if (v != "fixed" && v != "iron" && v != "dragon")
                     throw std::invalid_argument("expected fixed|iron|dragon, got '" + v + "'");
                   c.policy = v;
                 },
                 [](const SimConfig& c) { return c.policy; }});
    dbl("rate", "fixed_rate", &SimConfig::fixed_rate);
    dbl("rate", "iron_base_rate", &SimConfig::iron_base_rate);
    dbl("rate", "iron_m", &SimConfig::iron_m);
    dbl("rate", "dragon_alpha", &SimConfig::dragon_alpha);
    return f;
  }();
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

RatePolicy SimConfig::make_policy() const {
  if (policy == "fixed") return FixedRate{fixed_rate};
  if (policy == "iron") return IronRate{iron_base_rate, iron_m};
  return DragonRate{dragon_alpha};
}

SimConfig load_config(const std::string& text) {
  const IniDoc doc = IniDoc::parse(text);
  SimConfig cfg;
  std::vector<std::string> problems;

  for (const auto& field : schema()) {
    const auto value = doc.get(field.section, field.key);
    if (!value) continue;
    try {
      field.set(cfg, *value);
    } catch (const std::invalid_argument& e) {
      problems.push_back(field.section + "." + field.key + ": " + e.what());
    }
  }

  // Unknown keys are hard errors: a typo must not silently fall back to a
  // default.
  for (const auto& entry : doc.entries()) {
    bool known = false;
    for (const auto& field : schema())
      if (field.section == entry.section && field.key == entry.key) {
        known = true;
        break;
      }
    if (!known)
      problems.push_back("line " + std::to_string(entry.line) + ": unknown key '" +
                         entry.section + "." + entry.key + "'");
  }

  if (problems.empty()) {
    auto range = validate_config(cfg);
    problems.insert(problems.end(), range.begin(), range.end());
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

std::string save_config(const SimConfig& cfg) {
  std::ostringstream out;
  std::string current;
  for (const auto& field : schema()) {
    if (field.section != current) {
      if (!current.empty()) out << "\n";
      out << "[" << field.section << "]\n";
      current = field.section;
    }
    out << field.key << " = " << field.get(cfg) << "\n";
  }
  if (cfg.field == FieldOrder::gf256) {
    // Record the modulus so result directories are self-describing.
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%x", kGf256Polynomial);
    out << "# field_polynomial " << buf << "\n";
  }
  return out.str();
}

std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> p;
  auto require = [&p](bool ok, const std::string& msg) {
    if (!ok) p.push_back(msg);
  };
  require(cfg.n_nodes >= 1, "sim.n_nodes: must be at least 1");
  require(cfg.field_width > 0, "sim.field_width: must be positive");
  require(cfg.field_height > 0, "sim.field_height: must be positive");
  require(cfg.radio_range > 0, "sim.radio_range: must be positive");
  require(cfg.line_spacing > 0, "sim.line_spacing: must be positive");
  require(cfg.speed_min >= 0, "sim.speed_min: must be non-negative");
  require(cfg.speed_max >= cfg.speed_min, "sim.speed_max: must be >= speed_min");
  require(cfg.pause_time >= 0, "sim.pause_time: must be non-negative");
  require(cfg.loss_probability >= 0 && cfg.loss_probability < 1,
          "sim.loss_probability: must lie in [0, 1)");
  require(cfg.bitrate > 0, "sim.bitrate: must be positive");
  require(cfg.payload_size >= 1, "sim.payload_size: must be at least 1");
  require(cfg.jitter >= 0 && cfg.jitter < 1, "sim.jitter: must lie in [0, 1)");
  require(cfg.horizon > 0, "sim.horizon: must be positive");
  require(cfg.sample_period > 0, "sim.sample_period: must be positive");
  require(cfg.generation_size >= 1, "coding.generation_size: must be at least 1");
  require(cfg.window >= 1, "coding.window: must be at least 1");
  require(cfg.window <= cfg.generation_size,
          "coding.window: must be <= coding.generation_size");
  require(cfg.window <= 255,
          "coding.window: the wire format carries at most 255 coefficients");
  require(cfg.lifetime > 0, "protocol.lifetime: must be positive");
  require(cfg.lifetime * 1000 <= 65535, "protocol.lifetime: must fit 65535 ms");
  require(cfg.source_rate > 0, "protocol.source_rate: must be positive");
  require(cfg.fixed_rate > 0, "rate.fixed_rate: must be positive");
  require(cfg.iron_base_rate > 0, "rate.iron_base_rate: must be positive");
  require(cfg.iron_m > 0, "rate.iron_m: must be positive");
  require(cfg.dragon_alpha > 0, "rate.dragon_alpha: must be positive");
  return p;
}

void apply_override(SimConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& field : schema()) {
    if (field.key != key) continue;
    try {
      field.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError({field.section + "." + field.key + ": " + e.what()});
    }
    return;
  }
  throw ConfigError({"unknown config key '" + key + "'"});
}

}  // namespace dragoncast
