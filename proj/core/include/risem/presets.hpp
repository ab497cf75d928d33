#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risem/experiment.hpp"

namespace risem {

struct PresetInfo {
    std::string name;
    std::string description;
    ExperimentSpec spec;
};

/// Figure configurations: fig1a-N{36,144}-M{1,2,4}, fig1b-N{36,100,256}[-iid],
/// fig1c-{lambda4,lambda8,lambda12,iid}, fig2a-N{49,100,196},
/// fig2b-N{49,100,196}.
const std::vector<PresetInfo>& list_presets();

/// Throws ConfigError for unknown names.
const PresetInfo& find_preset(std::string_view name);

/// Settings a caller may change without breaking a preset.
struct PresetOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<NmseDomain> nmse_domain;
    /// Only fig1a presets accept a transmit-antenna override.
    std::optional<std::size_t> antennas;
};

ExperimentSpec resolve_preset(std::string_view name, const PresetOverrides& overrides = {});

/// For specs carrying a preset name: throws ConfigError unless the scenario
/// equals the preset's up to sample_count (and m_antennas for fig1a).
void check_preset_consistency(const ExperimentSpec& spec);

}  // namespace risem
