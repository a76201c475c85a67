#include "crowd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace crowd {

using nlohmann::json;

bool SimConfig::operator==(const SimConfig& o) const {
    const auto& a = scenario;
    const auto& b = o.scenario;
    return a.kind == b.kind && a.size_x == b.size_x && a.size_y == b.size_y &&
           a.door_width == b.door_width && a.target_density == b.target_density &&
           a.agent_count == b.agent_count && a.gait == b.gait && a.params == b.params &&
           measurement == o.measurement && seed == o.seed && ticks == o.ticks &&
           output_dir == o.output_dir;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        fail(path.empty() ? "<root>" : path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) {
            fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
        }
    }
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

void read_number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    out = v.get<double>();
}

template <typename Int>
void read_count(const json& obj, const std::string& path, const char* key, Int& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(join(path, key), "expected a non-negative integer");
    out = v.get<Int>();
}

void read_int(const json& obj, const std::string& path, const char* key, int& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    out = v.get<int>();
}

void read_pair(const json& obj, const std::string& path, const char* key, double& a, double& b) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(join(path, key), "expected [number, number]");
    }
    a = v[0].get<double>();
    b = v[1].get<double>();
}

std::string line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Maps a validate() message ("model.phi_tau must ...") onto the config error type.
template <typename F>
void checked(F&& f) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace

SimConfig default_config(ScenarioKind kind) {
    SimConfig cfg;
    cfg.scenario = kind == ScenarioKind::corridor ? ScenarioSpec::corridor_defaults()
                                                  : ScenarioSpec::room_defaults();
    cfg.measurement.roi.center = {0.5 * cfg.scenario.size_x, 0.5 * cfg.scenario.size_y};
    return cfg;
}

SimConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: syntax error at " + line_and_column(text, e.byte) + ": " +
                          e.what());
    }
    reject_unknown(doc, "", {"scenario", "model", "gait", "measurement", "seed", "ticks",
                             "output_dir"});

    SimConfig cfg;
    if (!doc.contains("scenario")) fail("scenario", "missing required section");
    const json& sc = doc.at("scenario");
    reject_unknown(sc, "scenario",
                   {"kind", "dimensions", "door_width", "target_density", "agent_count"});
    if (!sc.contains("kind") || !sc.at("kind").is_string()) {
        fail("scenario.kind", "required: \"corridor\" or \"room\"");
    }
    const auto kind = sc.at("kind").get<std::string>();
    if (kind == "corridor") {
        cfg = default_config(ScenarioKind::corridor);
    } else if (kind == "room") {
        cfg = default_config(ScenarioKind::room);
    } else {
        fail("scenario.kind", "expected \"corridor\" or \"room\", got \"" + kind + "\"");
    }
    ScenarioSpec& s = cfg.scenario;
    read_pair(sc, "scenario", "dimensions", s.size_x, s.size_y);
    read_number(sc, "scenario", "door_width", s.door_width);
    read_number(sc, "scenario", "target_density", s.target_density);
    if (sc.contains("agent_count")) {
        std::size_t n = 0;
        read_count(sc, "scenario", "agent_count", n);
        s.agent_count = n;
    }
    cfg.measurement.roi.center = {0.5 * s.size_x, 0.5 * s.size_y};

    if (doc.contains("model")) {
        const json& m = doc.at("model");
        reject_unknown(m, "model", {"phi_tau", "w_alpha", "w_phi", "n_alpha", "n_phi", "dt"});
        read_number(m, "model", "phi_tau", s.params.phi_tau);
        read_number(m, "model", "w_alpha", s.params.w_alpha);
        read_number(m, "model", "w_phi", s.params.w_phi);
        read_int(m, "model", "n_alpha", s.params.n_alpha);
        read_int(m, "model", "n_phi", s.params.n_phi);
        read_number(m, "model", "dt", s.params.dt);
    }
    if (doc.contains("gait")) {
        const json& g = doc.at("gait");
        reject_unknown(g, "gait",
                       {"mu_step", "sigma_step", "sigma_heading", "p_walk", "body_diameter"});
        read_number(g, "gait", "mu_step", s.gait.mu_step);
        read_number(g, "gait", "sigma_step", s.gait.sigma_step);
        read_number(g, "gait", "sigma_heading", s.gait.sigma_heading);
        read_number(g, "gait", "p_walk", s.gait.p_walk);
        read_number(g, "gait", "body_diameter", s.gait.body_diameter);
    }
    if (doc.contains("measurement")) {
        const json& m = doc.at("measurement");
        reject_unknown(m, "measurement", {"warmup_ticks", "measure_ticks", "roi_center",
                                          "roi_size", "flow_window_s", "max_ticks"});
        MeasurementSpec& ms = cfg.measurement;
        read_count(m, "measurement", "warmup_ticks", ms.warmup_ticks);
        read_count(m, "measurement", "measure_ticks", ms.measure_ticks);
        read_pair(m, "measurement", "roi_center", ms.roi.center.x, ms.roi.center.y);
        read_number(m, "measurement", "roi_size", ms.roi.size);
        read_number(m, "measurement", "flow_window_s", ms.flow_window_s);
        read_count(m, "measurement", "max_ticks", ms.max_ticks);
    }
    read_count(doc, "", "seed", cfg.seed);
    read_count(doc, "", "ticks", cfg.ticks);
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) fail("output_dir", "expected a string");
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    }

    checked([&] { s.validate(); });
    const MeasurementSpec& ms = cfg.measurement;
    if (!(ms.roi.size > 0.0)) fail("measurement.roi_size", "must be > 0");
    const double h = 0.5 * ms.roi.size;
    if (ms.roi.center.x - h < 0.0 || ms.roi.center.x + h > s.size_x ||
        ms.roi.center.y - h < 0.0 || ms.roi.center.y + h > s.size_y) {
        fail("measurement.roi_center", "region of interest must lie inside the scenario");
    }
    if (!(ms.flow_window_s > 0.0)) fail("measurement.flow_window_s", "must be > 0");
    const double window_ticks = ms.flow_window_s / s.params.dt;
    if (std::abs(window_ticks - std::round(window_ticks)) > 1e-9) {
        fail("measurement.flow_window_s", "must be a multiple of model.dt");
    }
    if (ms.measure_ticks == 0) fail("measurement.measure_ticks", "must be > 0");
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const SimConfig& cfg) {
    const ScenarioSpec& s = cfg.scenario;
    json sc = {{"kind", to_string(s.kind)},
               {"dimensions", {s.size_x, s.size_y}},
               {"door_width", s.door_width},
               {"target_density", s.target_density}};
    if (s.agent_count) sc["agent_count"] = *s.agent_count;
    const MeasurementSpec& m = cfg.measurement;
    const json doc = {
        {"scenario", sc},
        {"model",
         {{"phi_tau", s.params.phi_tau},
          {"w_alpha", s.params.w_alpha},
          {"w_phi", s.params.w_phi},
          {"n_alpha", s.params.n_alpha},
          {"n_phi", s.params.n_phi},
          {"dt", s.params.dt}}},
        {"gait",
         {{"mu_step", s.gait.mu_step},
          {"sigma_step", s.gait.sigma_step},
          {"sigma_heading", s.gait.sigma_heading},
          {"p_walk", s.gait.p_walk},
          {"body_diameter", s.gait.body_diameter}}},
        {"measurement",
         {{"warmup_ticks", m.warmup_ticks},
          {"measure_ticks", m.measure_ticks},
          {"roi_center", {m.roi.center.x, m.roi.center.y}},
          {"roi_size", m.roi.size},
          {"flow_window_s", m.flow_window_s},
          {"max_ticks", m.max_ticks}}},
        {"seed", cfg.seed},
        {"ticks", cfg.ticks},
        {"output_dir", cfg.output_dir}};
    return doc.dump(2) + "\n";
}

}  // namespace crowd
