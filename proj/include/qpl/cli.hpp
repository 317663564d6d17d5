#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpl/padic.hpp"

namespace qpl {

// Exit codes: 0 ok, 1 computation error, 2 usage error, 3 failed check.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::ordered_json padic_json(const PadicNumber& x);

}  // namespace qpl
