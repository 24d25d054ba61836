#include "finview/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

namespace finview {

namespace {

constexpr double deg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct KvFile {
    // section -> key -> value, with consumption tracking for unknown-key checks
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::map<std::string, std::map<std::string, bool>> used;
    std::string origin;

    bool has(const std::string& sec, const std::string& key) {
        const auto s = sections.find(sec);
        if (s == sections.end()) return false;
        return s->second.count(key) > 0;
    }

    std::string take(const std::string& sec, const std::string& key) {
        used[sec][key] = true;
        return sections.at(sec).at(key);
    }
};

KvFile parse_kv(const std::string& text, const std::string& origin) {
    KvFile kv;
    kv.origin = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated section");
            }
            section = trim(line.substr(1, line.size() - 2));
            kv.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key or value");
        }
        if (!kv.sections[section].emplace(key, value).second) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
        }
    }
    return kv;
}

double to_double(const KvFile& kv, const std::string& sec, const std::string& key,
                 const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(kv.origin + ": [" + sec + "] " + key + ": malformed number '" + value +
                          "'");
    }
}

long to_long(const KvFile& kv, const std::string& sec, const std::string& key,
             const std::string& value) {
    try {
        size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(kv.origin + ": [" + sec + "] " + key + ": malformed integer '" + value +
                          "'");
    }
}

void get(KvFile& kv, const std::string& sec, const std::string& key, double& out) {
    if (kv.has(sec, key)) out = to_double(kv, sec, key, kv.take(sec, key));
}
void get(KvFile& kv, const std::string& sec, const std::string& key, int& out) {
    if (kv.has(sec, key)) out = static_cast<int>(to_long(kv, sec, key, kv.take(sec, key)));
}
void get(KvFile& kv, const std::string& sec, const std::string& key, long& out) {
    if (kv.has(sec, key)) out = to_long(kv, sec, key, kv.take(sec, key));
}
void get(KvFile& kv, const std::string& sec, const std::string& key, std::optional<int>& out) {
    if (kv.has(sec, key)) out = static_cast<int>(to_long(kv, sec, key, kv.take(sec, key)));
}
void get(KvFile& kv, const std::string& sec, const std::string& key, std::optional<double>& out) {
    if (kv.has(sec, key)) out = to_double(kv, sec, key, kv.take(sec, key));
}
void get(KvFile& kv, const std::string& sec, const std::string& key, std::string& out) {
    if (kv.has(sec, key)) out = kv.take(sec, key);
}

void reject_unused(const KvFile& kv) {
    for (const auto& [sec, keys] : kv.sections) {
        for (const auto& [key, value] : keys) {
            const auto s = kv.used.find(sec);
            if (s == kv.used.end() || !s->second.count(key)) {
                throw ConfigError(kv.origin + ": unknown key '" + key + "' in section [" + sec +
                                  "]");
            }
        }
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Bounds resolve_bounds(const BoundsConfig& cfg, const FingerParams& finger) {
    validate(finger);
    const double back_len = std::hypot(finger.tip_taper * finger.base_width,
                                       finger.finger_length) /
                            (finger.n_back_nodes - 1);
    Bounds b;
    b.theta_min = cfg.theta_min_deg * deg;
    b.theta_max = cfg.theta_max_deg * deg;
    b.offset_min = cfg.offset_min_frac * back_len;
    b.offset_max = cfg.offset_max_frac * back_len;
    b.length_min = cfg.length_min_mm;
    b.length_max = cfg.length_max_frac * back_len;
    b.u_min = cfg.u_min;
    b.u_max = cfg.u_max;
    b.phi_min = cfg.phi_min_deg * deg;
    b.phi_max = cfg.phi_max_deg * deg;
    const auto ordered = [](double lo, double hi) { return lo < hi; };
    if (!ordered(b.theta_min, b.theta_max) || !ordered(b.offset_min, b.offset_max) ||
        !ordered(b.length_min, b.length_max) || !ordered(b.u_min, b.u_max) ||
        !ordered(b.phi_min, b.phi_max)) {
        throw ConfigError("bounds: each min must be strictly below its max");
    }
    if (!(b.u_min > 0.0 && b.u_max < 1.0)) {
        throw ConfigError("bounds: u range must stay inside (0, 1)");
    }
    return b;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    KvFile kv = parse_kv(text, origin);
    RunConfig cfg;

    get(kv, "finger", "n_back_nodes", cfg.finger.n_back_nodes);
    get(kv, "finger", "n_pad_points", cfg.finger.n_pad_points);
    get(kv, "finger", "finger_length_mm", cfg.finger.finger_length);
    get(kv, "finger", "base_width_mm", cfg.finger.base_width);
    get(kv, "finger", "tip_taper", cfg.finger.tip_taper);
    get(kv, "finger", "compliance_gain_mm_per_n", cfg.finger.compliance_gain);
    get(kv, "finger", "curvature_profile_exp", cfg.finger.curvature_profile_exp);

    get(kv, "bounds", "theta_min_deg", cfg.bounds.theta_min_deg);
    get(kv, "bounds", "theta_max_deg", cfg.bounds.theta_max_deg);
    get(kv, "bounds", "offset_min_frac", cfg.bounds.offset_min_frac);
    get(kv, "bounds", "offset_max_frac", cfg.bounds.offset_max_frac);
    get(kv, "bounds", "length_min_mm", cfg.bounds.length_min_mm);
    get(kv, "bounds", "length_max_frac", cfg.bounds.length_max_frac);
    get(kv, "bounds", "u_min", cfg.bounds.u_min);
    get(kv, "bounds", "u_max", cfg.bounds.u_max);
    get(kv, "bounds", "phi_min_deg", cfg.bounds.phi_min_deg);
    get(kv, "bounds", "phi_max_deg", cfg.bounds.phi_max_deg);

    get(kv, "camera", "fov_deg", cfg.fov_deg);
    get(kv, "camera", "ray_count", cfg.ray_count);

    std::string table;
    get(kv, "loads", "table", table);
    if (!table.empty()) cfg.loads.table_path = table;
    get(kv, "loads", "f_max_n", cfg.loads.f_max);
    get(kv, "loads", "k", cfg.loads.k);

    get(kv, "cmaes", "population", cfg.cmaes.population);
    get(kv, "cmaes", "parents", cfg.cmaes.parents);
    get(kv, "cmaes", "sigma0", cfg.cmaes.sigma0);
    get(kv, "cmaes", "max_generations", cfg.cmaes.max_generations);
    get(kv, "cmaes", "target_objective", cfg.cmaes.target_objective);
    get(kv, "cmaes", "sigma_tol", cfg.cmaes.sigma_tol);
    if (!kv.has("cmaes", "seed")) {
        throw ConfigError(origin + ": [cmaes] seed is mandatory");
    }
    cfg.cmaes.seed = static_cast<std::uint64_t>(to_long(kv, "cmaes", "seed", kv.take("cmaes", "seed")));

    get(kv, "output", "dir", cfg.output_dir);

    reject_unused(kv);

    try {
        validate(cfg.finger);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!(cfg.fov_deg > 0.0 && cfg.fov_deg < 180.0)) {
        throw ConfigError(origin + ": [camera] fov_deg must be in (0, 180)");
    }
    if (cfg.ray_count < 3) {
        throw ConfigError(origin + ": [camera] ray_count must be >= 3");
    }
    if (!cfg.loads.table_path) {
        if (!(cfg.loads.f_max > 0.0)) throw ConfigError(origin + ": [loads] f_max_n must be > 0");
        if (cfg.loads.k < 2) throw ConfigError(origin + ": [loads] k must be >= 2");
    }
    if (!(cfg.cmaes.sigma0 > 0.0)) throw ConfigError(origin + ": [cmaes] sigma0 must be > 0");
    if (cfg.cmaes.max_generations < 1) {
        throw ConfigError(origin + ": [cmaes] max_generations must be >= 1");
    }
    resolve_bounds(cfg.bounds, cfg.finger);  // validates ordering
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const auto fd = format_double;
    out << "[finger]\n";
    out << "n_back_nodes = " << cfg.finger.n_back_nodes << "\n";
    out << "n_pad_points = " << cfg.finger.n_pad_points << "\n";
    out << "finger_length_mm = " << fd(cfg.finger.finger_length) << "\n";
    out << "base_width_mm = " << fd(cfg.finger.base_width) << "\n";
    out << "tip_taper = " << fd(cfg.finger.tip_taper) << "\n";
    out << "compliance_gain_mm_per_n = " << fd(cfg.finger.compliance_gain) << "\n";
    out << "curvature_profile_exp = " << fd(cfg.finger.curvature_profile_exp) << "\n";
    out << "\n[bounds]\n";
    out << "theta_min_deg = " << fd(cfg.bounds.theta_min_deg) << "\n";
    out << "theta_max_deg = " << fd(cfg.bounds.theta_max_deg) << "\n";
    out << "offset_min_frac = " << fd(cfg.bounds.offset_min_frac) << "\n";
    out << "offset_max_frac = " << fd(cfg.bounds.offset_max_frac) << "\n";
    out << "length_min_mm = " << fd(cfg.bounds.length_min_mm) << "\n";
    out << "length_max_frac = " << fd(cfg.bounds.length_max_frac) << "\n";
    out << "u_min = " << fd(cfg.bounds.u_min) << "\n";
    out << "u_max = " << fd(cfg.bounds.u_max) << "\n";
    out << "phi_min_deg = " << fd(cfg.bounds.phi_min_deg) << "\n";
    out << "phi_max_deg = " << fd(cfg.bounds.phi_max_deg) << "\n";
    out << "\n[camera]\n";
    out << "fov_deg = " << fd(cfg.fov_deg) << "\n";
    out << "ray_count = " << cfg.ray_count << "\n";
    out << "\n[loads]\n";
    if (cfg.loads.table_path) {
        out << "table = " << *cfg.loads.table_path << "\n";
    } else {
        out << "f_max_n = " << fd(cfg.loads.f_max) << "\n";
        out << "k = " << cfg.loads.k << "\n";
    }
    out << "\n[cmaes]\n";
    if (cfg.cmaes.population) out << "population = " << *cfg.cmaes.population << "\n";
    if (cfg.cmaes.parents) out << "parents = " << *cfg.cmaes.parents << "\n";
    out << "sigma0 = " << fd(cfg.cmaes.sigma0) << "\n";
    out << "max_generations = " << cfg.cmaes.max_generations << "\n";
    if (cfg.cmaes.target_objective) {
        out << "target_objective = " << fd(*cfg.cmaes.target_objective) << "\n";
    }
    out << "sigma_tol = " << fd(cfg.cmaes.sigma_tol) << "\n";
    out << "seed = " << cfg.cmaes.seed << "\n";
    out << "\n[output]\n";
    out << "dir = " << cfg.output_dir << "\n";
    return out.str();
}

LayoutVector load_layout_file(const std::string& path, double fov_rad, int ray_count) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("layout: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    KvFile kv = parse_kv(buf.str(), path);

    // Mirrors are numbered 1..n contiguously.
    std::vector<MirrorParams> mirrors;
    for (int i = 1;; ++i) {
        const std::string tag = "mirror." + std::to_string(i) + ".";
        if (!kv.has("", tag + "theta_deg")) break;
        MirrorParams m;
        m.theta = to_double(kv, "", tag + "theta_deg", kv.take("", tag + "theta_deg")) * deg;
        if (!kv.has("", tag + "offset_mm") || !kv.has("", tag + "length_mm")) {
            throw ConfigError(path + ": incomplete parameters for mirror " + std::to_string(i));
        }
        m.offset = to_double(kv, "", tag + "offset_mm", kv.take("", tag + "offset_mm"));
        m.length = to_double(kv, "", tag + "length_mm", kv.take("", tag + "length_mm"));
        mirrors.push_back(m);
    }
    if (!kv.has("", "camera.u") || !kv.has("", "camera.phi_deg")) {
        throw ConfigError(path + ": missing camera.u or camera.phi_deg");
    }
    LayoutVector layout;
    layout.mirrors = std::move(mirrors);
    layout.camera.u = to_double(kv, "", "camera.u", kv.take("", "camera.u"));
    layout.camera.phi = to_double(kv, "", "camera.phi_deg", kv.take("", "camera.phi_deg")) * deg;
    layout.camera.fov = fov_rad;
    layout.camera.ray_count = ray_count;
    reject_unused(kv);
    return layout;
}

std::string serialize_layout(const LayoutVector& layout) {
    std::ostringstream out;
    for (size_t i = 0; i < layout.mirrors.size(); ++i) {
        const std::string tag = "mirror." + std::to_string(i + 1) + ".";
        out << tag << "theta_deg = " << format_double(layout.mirrors[i].theta / deg) << "\n";
        out << tag << "offset_mm = " << format_double(layout.mirrors[i].offset) << "\n";
        out << tag << "length_mm = " << format_double(layout.mirrors[i].length) << "\n";
    }
    out << "camera.u = " << format_double(layout.camera.u) << "\n";
    out << "camera.phi_deg = " << format_double(layout.camera.phi / deg) << "\n";
    return out.str();
}

void save_layout_file(const LayoutVector& layout, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("layout: cannot write '" + path + "'");
    }
    out << serialize_layout(layout);
}

}  // namespace finview
