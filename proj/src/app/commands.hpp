#pragma once

#include "app/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace coco::app {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    bool csv = false;
    unsigned parallel_scenarios = 1;
    std::filesystem::path config_file; ///< hashed into the manifest when set
};

const std::vector<std::string>& command_names();

/// Runs one subcommand; text goes to `text`, files to options.out_dir. Throws coco::Error.
void run_command(const std::string& name, const Config& config, const RunOptions& options, std::ostream& text);

int exit_code_for(const std::exception& e);

} // namespace coco::app
