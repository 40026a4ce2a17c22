#include "iirsim/scenario.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "iirsim/errors.hpp"
#include "iirsim/numeric_text.hpp"

namespace iirsim {
namespace {

// Setters report a problem by returning a non-empty message.
using Setter = std::function<std::string(ScenarioConfig&, std::string_view)>;
using Getter = std::function<std::string(const ScenarioConfig&)>;

struct KeySpec {
  std::string_view key;
  Setter set;
  Getter get;
};

template <typename T>
KeySpec real_key(std::string_view key, T ScenarioConfig::*group, double T::*field) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) -> std::string {
            auto x = parse_real(v);
            if (!x || !std::isfinite(*x)) return "expected a finite real";
            (c.*group).*field = *x;
            return {};
          },
          [=](const ScenarioConfig& c) { return format_real((c.*group).*field); }};
}

KeySpec top_real_key(std::string_view key, double ScenarioConfig::*field) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) -> std::string {
            auto x = parse_real(v);
            if (!x || !std::isfinite(*x)) return "expected a finite real";
            c.*field = *x;
            return {};
          },
          [=](const ScenarioConfig& c) { return format_real(c.*field); }};
}

template <typename Int, typename Apply, typename Read>
KeySpec int_key(std::string_view key, Apply apply, Read read) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) -> std::string {
            auto x = parse_integer<Int>(v);
            if (!x) return "expected a non-negative integer";
            apply(c, *x);
            return {};
          },
          [=](const ScenarioConfig& c) { return std::to_string(read(c)); }};
}

std::optional<bool> parse_bool(std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  return std::nullopt;
}

template <typename Apply, typename Read>
KeySpec bool_key(std::string_view key, Apply apply, Read read) {
  return {key,
          [=](ScenarioConfig& c, std::string_view v) -> std::string {
            auto x = parse_bool(v);
            if (!x) return "expected true or false";
            apply(c, *x);
            return {};
          },
          [=](const ScenarioConfig& c) { return std::string(read(c) ? "true" : "false"); }};
}

const std::vector<KeySpec>& key_table() {
  using C = ScenarioConfig;
  static const std::vector<KeySpec> table = {
      int_key<std::size_t>("node_count", [](C& c, std::size_t v) { c.layout.node_count = v; },
                           [](const C& c) { return c.layout.node_count; }),
      {"placement",
       [](C& c, std::string_view v) -> std::string {
         v = trim(v);
         if (v == "grid") c.layout.placement = Placement::Grid;
         else if (v == "uniform") c.layout.placement = Placement::Uniform;
         else return "expected grid or uniform";
         return {};
       },
       [](const C& c) {
         return std::string(c.layout.placement == Placement::Grid ? "grid" : "uniform");
       }},
      real_key("grid_spacing", &C::layout, &LayoutConfig::grid_spacing),
      int_key<std::size_t>("grid_cols", [](C& c, std::size_t v) { c.layout.grid_cols = v; },
                           [](const C& c) { return c.layout.grid_cols; }),
      real_key("field_size", &C::layout, &LayoutConfig::field_size),
      real_key("comm_radius", &C::layout, &LayoutConfig::comm_radius),
      int_key<NodeId>("sink_id", [](C& c, NodeId v) { c.layout.sink_id = v; },
                      [](const C& c) { return c.layout.sink_id; }),
      {"subsink_id",
       [](C& c, std::string_view v) -> std::string {
         v = trim(v);
         if (v == "auto") {
           c.layout.subsink_placement = SubSinkPlacement::Central;
         } else if (v == "none") {
           c.layout.subsink_placement = SubSinkPlacement::None;
         } else if (auto id = parse_integer<NodeId>(v)) {
           c.layout.subsink_placement = SubSinkPlacement::Fixed;
           c.layout.subsink_id = *id;
         } else {
           return "expected auto, none or a node id";
         }
         return {};
       },
       [](const C& c) -> std::string {
         switch (c.layout.subsink_placement) {
           case SubSinkPlacement::Central: return "auto";
           case SubSinkPlacement::None: return "none";
           case SubSinkPlacement::Fixed: break;
         }
         return std::to_string(c.layout.subsink_id);
       }},
      {"aggregators",
       [](C& c, std::string_view v) -> std::string {
         std::vector<NodeId> ids;
         v = trim(v);
         while (!v.empty()) {
           const auto comma = v.find(',');
           auto id = parse_integer<NodeId>(v.substr(0, comma));
           if (!id) return "expected a comma-separated list of node ids";
           ids.push_back(*id);
           if (comma == std::string_view::npos) break;
           v.remove_prefix(comma + 1);
         }
         c.layout.aggregators = std::move(ids);
         return {};
       },
       [](const C& c) {
         std::string out;
         for (std::size_t i = 0; i < c.layout.aggregators.size(); ++i) {
           if (i) out += ',';
           out += std::to_string(c.layout.aggregators[i]);
         }
         return out;
       }},
      int_key<std::size_t>("aggregator_every",
                           [](C& c, std::size_t v) { c.layout.aggregator_every = v; },
                           [](const C& c) { return c.layout.aggregator_every; }),
      int_key<std::size_t>("aggregator_count",
                           [](C& c, std::size_t v) { c.layout.aggregator_count = v; },
                           [](const C& c) { return c.layout.aggregator_count; }),
      int_key<Round>("rounds", [](C& c, Round v) { c.rounds = v; },
                     [](const C& c) { return c.rounds; }),
      int_key<std::uint64_t>("seed", [](C& c, std::uint64_t v) { c.seed = v; },
                             [](const C& c) { return c.seed; }),
      real_key("e_elec", &C::radio, &RadioParams::e_elec),
      real_key("e_amp", &C::radio, &RadioParams::e_amp),
      top_real_key("initial_energy", &C::initial_energy),
      real_key("field_base", &C::field, &FieldParams::base),
      real_key("drift_amplitude", &C::field, &FieldParams::drift_amplitude),
      real_key("drift_period", &C::field, &FieldParams::drift_period),
      real_key("noise_sigma", &C::field, &FieldParams::noise_sigma),
      real_key("event_rate", &C::events, &EventParams::rate),
      real_key("event_radius", &C::events, &EventParams::radius),
      real_key("event_magnitude", &C::events, &EventParams::magnitude),
      int_key<Round>("event_duration", [](C& c, Round v) { c.events.duration = v; },
                     [](const C& c) { return c.events.duration; }),
      bool_key("dedup_enabled", [](C& c, bool v) { c.dedup_enabled = v; },
               [](const C& c) { return c.dedup_enabled; }),
      top_real_key("dedup_eps", &C::dedup_eps),
      real_key("band_lo", &C::pipeline, &PipelineConfig::band_lo),
      real_key("band_hi", &C::pipeline, &PipelineConfig::band_hi),
      real_key("theta_p", &C::pipeline, &PipelineConfig::theta_p),
      int_key<std::size_t>("window_w", [](C& c, std::size_t v) { c.pipeline.window_w = v; },
                           [](const C& c) { return c.pipeline.window_w; }),
      real_key("delta_o", &C::pipeline, &PipelineConfig::delta_o),
      real_key("range_lo", &C::pipeline, &PipelineConfig::range_lo),
      real_key("range_hi", &C::pipeline, &PipelineConfig::range_hi),
      real_key("tau_r", &C::pipeline, &PipelineConfig::tau_r),
      real_key("quorum_q", &C::pipeline, &PipelineConfig::quorum_q),
      real_key("rescue_score", &C::pipeline, &PipelineConfig::rescue_score),
      bool_key("symbolic_only", [](C& c, bool v) { c.pipeline.symbolic_only = v; },
               [](const C& c) { return c.pipeline.symbolic_only; }),
      int_key<std::size_t>("batch_cap", [](C& c, std::size_t v) { c.batch_cap = v; },
                           [](const C& c) { return c.batch_cap; }),
      {"mode",
       [](C& c, std::string_view v) -> std::string {
         v = trim(v);
         if (v == "baseline") c.mode = Mode::Baseline;
         else if (v == "framework") c.mode = Mode::Framework;
         else return "expected baseline or framework";
         return {};
       },
       [](const C& c) { return std::string(to_string(c.mode)); }},
  };
  return table;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& spec : key_table()) {
    if (spec.key == key) return &spec;
  }
  return nullptr;
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidScenario(what);
  };
  const auto& l = cfg.layout;
  require(l.node_count >= 2, "node_count must be at least 2");
  require(l.sink_id < l.node_count, "sink_id must name an existing node");
  require(l.comm_radius > 0, "comm_radius must be positive");
  require(l.grid_spacing > 0, "grid_spacing must be positive");
  require(l.field_size > 0, "field_size must be positive");
  require(cfg.radio.e_elec > 0 && cfg.radio.e_amp > 0, "e_elec and e_amp must be positive");
  require(cfg.initial_energy > 0, "initial_energy must be positive");
  require(cfg.field.drift_period > 0, "drift_period must be positive");
  require(cfg.field.noise_sigma >= 0, "noise_sigma must be non-negative");
  require(cfg.events.rate >= 0, "event_rate must be non-negative");
  require(cfg.events.radius >= 0, "event_radius must be non-negative");
  require(cfg.dedup_eps >= 0, "dedup_eps must be non-negative");
  require(cfg.batch_cap >= 1, "batch_cap must be at least 1");
  validate(cfg.pipeline);
  if (cfg.mode == Mode::Framework) {
    require(l.subsink_placement != SubSinkPlacement::None,
            "framework mode needs a sub-sink (subsink_id must not be none)");
    require(!l.aggregators.empty() || l.aggregator_every > 0 || l.aggregator_count > 0,
            "framework mode needs at least one aggregator");
  }
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw MalformedLine(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw MalformedLine(where + ": missing key before '='");

    const KeySpec* spec = find_key(key);
    if (spec == nullptr) throw UnknownKey(where + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw MalformedLine(where + ": key '" + std::string(key) + "' given twice");
    }
    if (auto problem = spec->set(cfg, value); !problem.empty()) {
      throw InvalidValue(where + ": key '" + std::string(key) + "': " + problem + ", got '" +
                         std::string(value) + "'");
    }
  }
  return cfg;
}

std::string format_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  for (const auto& spec : key_table()) out << spec.key << " = " << spec.get(cfg) << '\n';
  return out.str();
}

PipelineConfig permissive_pipeline(const PipelineConfig& base) {
  PipelineConfig p = base;
  p.theta_p = 0.0;
  p.delta_o = 0.0;
  p.tau_r = 0.0;
  p.quorum_q = 0.0;
  p.rescue_score = 0.0;
  p.range_lo = std::min(p.band_lo, -std::numeric_limits<double>::max());
  p.range_hi = std::max(p.band_hi, std::numeric_limits<double>::max());
  return p;
}

}  // namespace iirsim
