#pragma once

#include <spdlog/spdlog.h>

namespace wshr {

/// Stderr logger shared by the library and the CLI. Verbosity comes from the
/// HSI_LOG environment variable (trace, debug, info, warn, error, off);
/// default is warn.
spdlog::logger& logger();

}  // namespace wshr
