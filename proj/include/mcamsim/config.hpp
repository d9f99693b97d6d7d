#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "mcamsim/array.hpp"

namespace mcamsim {

/// Flat key = value file, '#' starts a comment. Unknown keys are rejected
/// by apply_config so typos fail loudly.
using KvConfig = std::map<std::string, std::string>;

KvConfig load_kv_file(const std::string& path);
KvConfig parse_kv(std::string_view text);

/// Applies device/cell/timing overrides. Recognized keys (units fixed):
///   vth_top_mv, vth_spacing_mv, vth_levels_mv (comma list),
///   dl_inputs_mv (comma list), center_mv, subthreshold_slope_mv,
///   g_on_us, g_off_us, knee_overdrive_mv, overdrive_sat_mv,
///   c_ml_ff, v_precharge_v, v_sense_v
/// Ladder keys rebuild the dependent defaults (inputs, center) unless those
/// are overridden too. The result is validated.
void apply_config(const KvConfig& kv, CamConfig& cam, TimingParams& timing);

/// FNV-1a, for stable cross-process fingerprints of canonical text.
std::uint64_t fnv1a64(std::string_view text);

/// Canonical "key=value\n" serialization (sorted) and its hash; every CLI
/// output embeds the hash so reruns are checkable byte-for-byte.
class ConfigFingerprint {
  public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::uint64_t value);
    void add_cam(const CamConfig& cam);
    void add_timing(const TimingParams& t);

    std::string serialize() const;
    std::string hash_hex() const;

  private:
    std::map<std::string, std::string> kv_;
};

/// Shortest round-trip decimal form of a double (printf %.17g trimmed).
std::string format_double(double v);

}  // namespace mcamsim
