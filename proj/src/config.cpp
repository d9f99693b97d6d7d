#include "mcamsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mcamsim {

namespace {

std::string trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

double to_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + key + "' has non-numeric value '" +
                                 value + "'");
    }
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(to_double(key, trim(tok)));
    if (out.empty())
        throw std::runtime_error("config: key '" + key + "' has an empty list");
    return out;
}

}  // namespace

KvConfig parse_kv(std::string_view text) {
    KvConfig kv;
    size_t start = 0;
    int line_no = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     " is not key = value: '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: empty key on line " + std::to_string(line_no));
        if (kv.count(key))
            throw std::runtime_error("config: duplicate key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

KvConfig load_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kv(buf.str());
}

void apply_config(const KvConfig& kv, CamConfig& cam, TimingParams& timing) {
    static const char* known[] = {
        "vth_top_mv",   "vth_spacing_mv",       "vth_levels_mv", "dl_inputs_mv",
        "center_mv",    "subthreshold_slope_mv", "g_on_us",       "g_off_us",
        "knee_overdrive_mv", "overdrive_sat_mv", "c_ml_ff",       "v_precharge_v",
        "v_sense_v",
    };
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::runtime_error("config: unknown key '" + key + "'");
        (void)value;
    }

    auto get = [&](const char* key) { return kv.find(key); };
    const int n = 1 << cam.bits;

    bool ladder_changed = false;
    if (auto it = get("vth_levels_mv"); it != kv.end()) {
        auto levels = to_double_list(it->first, it->second);
        if (static_cast<int>(levels.size()) != n)
            throw std::runtime_error("config: vth_levels_mv needs " + std::to_string(n) +
                                     " entries, got " + std::to_string(levels.size()));
        cam.device.vth_levels = std::move(levels);
        ladder_changed = true;
    } else if (kv.count("vth_top_mv") || kv.count("vth_spacing_mv")) {
        double top = cam.device.vth_levels.back();
        double spacing = cam.device.vth_levels[1] - cam.device.vth_levels[0];
        if (auto t = get("vth_top_mv"); t != kv.end()) top = to_double(t->first, t->second);
        if (auto s = get("vth_spacing_mv"); s != kv.end())
            spacing = to_double(s->first, s->second);
        for (int k = 0; k < n; ++k)
            cam.device.vth_levels[k] = top - spacing * (n - 1 - k);
        ladder_changed = true;
    }

    if (auto it = get("dl_inputs_mv"); it != kv.end()) {
        auto inputs = to_double_list(it->first, it->second);
        if (static_cast<int>(inputs.size()) != n)
            throw std::runtime_error("config: dl_inputs_mv needs " + std::to_string(n) +
                                     " entries, got " + std::to_string(inputs.size()));
        cam.dl_inputs = std::move(inputs);
    } else if (ladder_changed) {
        const auto& v = cam.device.vth_levels;
        const double spacing = v[1] - v[0];
        for (int k = 0; k < n; ++k) cam.dl_inputs[k] = v[k] - spacing / 2.0;
    }

    if (auto it = get("center_mv"); it != kv.end()) {
        cam.center = to_double(it->first, it->second);
    } else if (ladder_changed) {
        const auto& v = cam.device.vth_levels;
        cam.center = (v.front() + v.back()) / 2.0 + (v[1] - v[0]) / 4.0;
    }

    if (auto it = get("subthreshold_slope_mv"); it != kv.end())
        cam.device.subthreshold_slope = to_double(it->first, it->second);
    if (auto it = get("g_on_us"); it != kv.end())
        cam.device.g_on = to_double(it->first, it->second);
    if (auto it = get("g_off_us"); it != kv.end())
        cam.device.g_off = to_double(it->first, it->second);
    if (auto it = get("knee_overdrive_mv"); it != kv.end())
        cam.device.knee_overdrive = to_double(it->first, it->second);
    if (auto it = get("overdrive_sat_mv"); it != kv.end())
        cam.device.overdrive_sat = to_double(it->first, it->second);

    if (auto it = get("c_ml_ff"); it != kv.end())
        timing.c_ml = to_double(it->first, it->second);
    if (auto it = get("v_precharge_v"); it != kv.end())
        timing.v_precharge = to_double(it->first, it->second);
    if (auto it = get("v_sense_v"); it != kv.end())
        timing.v_sense = to_double(it->first, it->second);

    validate(cam);
    if (!(timing.c_ml > 0.0) || !(timing.v_precharge > timing.v_sense) ||
        !(timing.v_sense > 0.0))
        throw std::runtime_error("config: timing values are inconsistent");
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[32];
    if (std::isfinite(v) && v == std::rint(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

void ConfigFingerprint::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

void ConfigFingerprint::set(const std::string& key, double value) {
    kv_[key] = format_double(value);
}

void ConfigFingerprint::set(const std::string& key, std::uint64_t value) {
    kv_[key] = std::to_string(value);
}

void ConfigFingerprint::add_cam(const CamConfig& cam) {
    set("bits", static_cast<std::uint64_t>(cam.bits));
    std::string levels, inputs;
    for (size_t k = 0; k < cam.device.vth_levels.size(); ++k) {
        if (k) levels += ",";
        levels += format_double(cam.device.vth_levels[k]);
    }
    for (size_t k = 0; k < cam.dl_inputs.size(); ++k) {
        if (k) inputs += ",";
        inputs += format_double(cam.dl_inputs[k]);
    }
    set("vth_levels_mv", levels);
    set("dl_inputs_mv", inputs);
    set("center_mv", cam.center);
    set("subthreshold_slope_mv", cam.device.subthreshold_slope);
    set("g_on_us", cam.device.g_on);
    set("g_off_us", cam.device.g_off);
    set("knee_overdrive_mv", cam.device.knee_overdrive);
    set("overdrive_sat_mv", cam.device.overdrive_sat);
}

void ConfigFingerprint::add_timing(const TimingParams& t) {
    set("c_ml_ff", t.c_ml);
    set("v_precharge_v", t.v_precharge);
    set("v_sense_v", t.v_sense);
}

std::string ConfigFingerprint::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    return out;
}

std::string ConfigFingerprint::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize())));
    return buf;
}

}  // namespace mcamsim
