#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mpersuade/json_io.hpp"

namespace mpersuade::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitSolver = 3;

// Command-line overrides of config values.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> tol;
};

// Validates the config, runs its task and writes the report (and CSV curve,
// for sweeps) into out_dir. Returns an exit status; diagnostics go to err as
// "error [code]: message".
int run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, const Overrides& overrides,
        std::ostream& err);

// Same, for an already-parsed config. Throws on failure.
void run_config(const json_io::Json& config, const std::filesystem::path& out_dir, const Overrides& overrides);

// Writes through a temporary file in the same directory, then renames.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace mpersuade::cli
