#pragma once

namespace cwvote {

// Library version; stamped into JSON outputs and part of the sampler
// reproducibility contract (seed + parameters + version -> identical output).
inline constexpr const char* kVersion = "0.1.0";

}  // namespace cwvote
