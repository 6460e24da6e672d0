#pragma once

#include "propscore/numeric.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

namespace propscore::cli {

/// Exit codes shared by every command.
enum Exit : int { kOk = 0, kCheckFailed = 1, kInputError = 2 };

/// Entry point behind the `propscore` binary; streams are injectable for tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Prints acc_v(x) (credence specs, v in {0, 1}) or acc_k(x) (estimate specs) to 12 significant digits.
int cmd_eval(const std::string &spec_path, double value, double x, const Tolerances &tol, std::ostream &out,
             std::ostream &err);

/// Runs the selected checks ("all", or any of: propriety, directedness, stationarity, equivalences,
/// mass, entropy, k-independence, bregman). Exit 0 iff every check that ran passed.
int cmd_verify(const std::string &spec_path, const std::set<std::string> &checks, std::uint64_t seed,
               const Tolerances &tol, std::ostream &out, std::ostream &err);

/// Emits the spec converted to `target` ("schervish" or "bregman") as JSON with residual diagnostics.
int cmd_convert(const std::string &spec_path, const std::string &target, const Tolerances &tol,
                std::ostream &out, std::ostream &err);

/// Writes a CSV of "scores", "entropy" or "divergence" on an n-point grid to `out_path`
/// (stdout when empty).
int cmd_tabulate(const std::string &spec_path, const std::string &what, std::size_t n,
                 const std::string &out_path, const Tolerances &tol, std::ostream &out, std::ostream &err);

} // namespace propscore::cli
