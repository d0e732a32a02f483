#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace polymt::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

struct Streams {
  std::istream* in;
  std::ostream* out;
  std::ostream* err;
};

/// Runs one subcommand. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, const Streams& streams);
int dispatch(const std::vector<std::string>& args);

/// Default seed: $POLYMT_SEED when set, else 0.
unsigned long long default_seed();

/// Runs the stages of a JSON manifest in dependency order. Stages whose
/// inputs, arguments and outputs hash to the recorded state are skipped.
/// Throws polymt::Error (CycleDetected, StageFailed, ...).
void run_manifest(const std::filesystem::path& manifest, bool force, const Streams& streams);

}  // namespace polymt::cli
