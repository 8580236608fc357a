#pragma once

#include "homoclinic/config.hpp"

#include <optional>
#include <string_view>

namespace homoclinic {

enum class Command { check, spectrum, solve, multi_solve, verify };

std::optional<Command> command_from_name(std::string_view name);

/// Executes one batch command: writes the command's CSV/JSON artifacts under
/// cfg.out_dir and returns the process exit status (0 on success). Failures
/// are reported as machine-readable JSON on stderr.
int run(Command cmd, const RunConfig& cfg);

/// Applies the HOMOCLINIC_THREADS cap (default 1) to the underlying BLAS /
/// OpenMP pools. Call once, before any linear algebra.
void apply_thread_cap();

}  // namespace homoclinic
