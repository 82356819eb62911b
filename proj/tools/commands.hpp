#pragma once

#include <CLI11.hpp>

namespace sepals::cli {

/// Adds the simulate, fit, sweep, tail and tailcorr subcommands.
void register_commands(CLI::App& app);

}  // namespace sepals::cli
