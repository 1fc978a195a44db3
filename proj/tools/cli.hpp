#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace retra::cli {

inline constexpr const char* kReportFormat = "retra-report/1";
inline constexpr const char* kJobFormat = "retra-job/1";

enum ExitCode : int { kPass = 0, kVerifyFail = 1, kParseFail = 2, kBudget = 3 };

std::uint64_t fnv1a64(std::string_view bytes);

// Runs one subcommand; args excludes the program name. Reports go to `out`
// (or to --out), usage and CLI errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace retra::cli
