#pragma once

// Run configuration: an INI file with [model], [descriptor], [init], [train],
// [synth] and [run] sections. Every key can be overridden on the command
// line with --set section.key=value; dedicated flags map onto the same keys.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hiact/descriptors.hpp"
#include "hiact/learning.hpp"
#include "hiact/synthetic.hpp"

namespace hiact::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string schema = "kinect20";
    DescriptorConfig descriptor;
    InitConfig init;
    TrainConfig train;
    Supervision supervision = Supervision::Temporal;
    SyntheticSpec synth;
    std::uint64_t video_seed = 1;
    unsigned jobs = 1;

    /// Sorted key=value listing of every resolved setting.
    std::map<std::string, std::string> entries() const;
    /// FNV-1a of entries(), hex.
    std::string hash() const;
};

/// Applies key=value pairs ("section.key") on top of the defaults.
RunConfig make_config(const std::map<std::string, std::string>& values);
/// Reads an INI file (missing path -> ConfigError) and layers `overrides` on top.
RunConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides);
std::map<std::string, std::string> read_ini(const std::filesystem::path& path);

}  // namespace hiact::cli
