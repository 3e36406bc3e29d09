#pragma once

#include "protochk/compat.hpp"
#include "protochk/equiv.hpp"
#include "protochk/subst.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace protochk::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kUsage = 2, kResourceCap = 3 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits `path::Name` into its parts; the name is empty when absent.
std::pair<std::string, std::string> split_input(const std::string& spec);

std::string compat_json(const std::vector<std::string>& inputs, CompatNotion notion, const Verdict& v);
std::string relation_json(const std::vector<std::string>& inputs, RelationKind kind, const Verdict& v);
std::string subst_json(const std::vector<std::string>& inputs, const SubstitutionReport& r,
                       bool recompose_warning = true);

} // namespace protochk::cli
