#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "emofuse/alignment.hpp"
#include "emofuse/fusion.hpp"
#include "emofuse/gbt.hpp"

namespace emofuse {

// Everything a pipeline run can be configured with. A JSON config file
// (--config) mirrors this struct; explicit flags override it.
struct RunConfig {
    std::uint64_t seed = 42;
    double split_ratio = 0.8;
    double bin_width = 0.1;
    FuseMethod fusion_method = FuseMethod::sum_softmax;
    AlignTargets targets;
    std::string angle_table_path;  // empty selects the built-in table
    TrainConfig train;
};

RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& cfg);
void validate(const RunConfig& cfg);

// Entry point behind the `emofuse` binary. Returns the process exit code:
// 0 success, 2 parse error, 3 validation error, 4 degenerate geometry.
int run_cli(int argc, const char* const* argv);

}  // namespace emofuse
