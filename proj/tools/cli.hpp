#pragma once

namespace gmot::cli {

/// Entry point of the gmot tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace gmot::cli
