#ifndef BLETRADEOFF_CONFIG_H
#define BLETRADEOFF_CONFIG_H

#include "bletradeoff/scenario.h"
#include "bletradeoff/sweep.h"

#include <filesystem>
#include <optional>
#include <string>

namespace bletradeoff
{

/**
 * A parsed scenario document.
 *
 * Flat keys: ber, payload_v_bytes, payload_d_bytes, x, n, ci_v_us, ci_d_us, ifs_us,
 * phy_rate_bps. An optional "sweep" object holds param, values | (min, max,
 * step | points, scale) and a "family" object {param, values}. Unknown keys are
 * rejected everywhere.
 */
struct LoadedConfig
{
    RawScenario raw;
    Scenario scenario;
    std::optional<SweepSpec> sweep;
};

LoadedConfig ParseConfig(const std::string& text);
LoadedConfig LoadConfig(const std::filesystem::path& path);

} // namespace bletradeoff

#endif
