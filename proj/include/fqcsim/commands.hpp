#pragma once

#include "fqcsim/config.hpp"
#include "fqcsim/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fqcsim {

struct OutputFile {
    std::string name;
    std::string content;
};

/// Files produced by one subcommand plus a JSON summary for the console.
struct CommandOutput {
    std::vector<OutputFile> files;
    Json summary;

    const OutputFile& file(const std::string& name) const;
};

/// Provenance block embedded in every output: command, code version, seed and
/// the resolved config.
Json provenance(const std::string& command, const RunConfig& cfg);

/// Validates `cfg` and runs one subcommand entirely in memory. Output payloads
/// are a pure function of (command, cfg); `threads` only affects speed.
CommandOutput run_command(const std::string& command, const RunConfig& cfg, int threads = 0);

/// Writes each file under `dir`; throws IoError.
void write_outputs(const CommandOutput& out, const std::filesystem::path& dir);

}  // namespace fqcsim
