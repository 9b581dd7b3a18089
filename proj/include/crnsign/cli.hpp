#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crnsign::cli {

enum ExitCode : int { ok = 0, check_failed = 1, input_error = 2 };

/// Settings of one invocation. Every randomized check draws from `seed`.
struct CliConfig {
    std::string subcommand;
    std::string input;
    std::string output;      // artifact: fixed network, DOT file
    std::string report_path; // JSON or plain report; stdout when empty
    bool plain = false;
    bool check = false;
    bool permissive = false;
    std::uint64_t seed = 0;

    std::string order;
    double rate = 1.0;
    std::string rates;
    std::string x0;
    std::string clamp;
    bool allow_boundary = false;
    std::string trajectory;
    double t_end = 10.0;
    double dt = 1e-3;

    std::string k_grid = "1:1e6:7";
    std::size_t class_index = 1;
    std::size_t samples = 0; // 0: subcommand default
    bool fixed = false;
};

/// Runs one subcommand. Exit codes: 0 success, 1 a requested check failed
/// (or an internal cross-check disagreed), 2 bad input or usage.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace crnsign::cli
