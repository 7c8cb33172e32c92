#pragma once

// Command line front end: catalog, coeffs, bound, classify, theta-verify, selftest.

#include <iosfwd>
#include <string>
#include <vector>

namespace borcherds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMismatch = 2;
inline constexpr int kExitUsage = 64;

/// Results go to out, diagnostics to err. The cache path comes from --cache
/// or the BORCHERDS_CACHE environment variable.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace borcherds::cli
