#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qmzv/plan.hpp"
#include "qmzv/verifier.hpp"

namespace qmzv {

inline constexpr const char* engine_version = "qmzv 1.0.0";

struct SuiteOptions {
    CheckOptions check;
    unsigned threads = 1;
};

struct Report {
    std::string engine = engine_version;
    std::vector<std::string> q_values;  // first-appearance order in the plan
    std::string plan_hash;
    std::string terms_policy;  // "auto" or the fixed M_max
    std::vector<CheckResult> results;  // plan order
    std::size_t passed = 0, failed = 0, indeterminate = 0;

    Verdict overall() const;
};

// Runs every entry; a check that throws is recorded as indeterminate with the error message.
Report run_suite(const Plan& plan, const SuiteOptions& options);

// Parallelism: QMZV_THREADS when set to a positive integer, else the hardware concurrency.
unsigned default_threads();

// Elapsed times are written only when `timings` is set (null otherwise), which keeps
// the output byte-identical across runs.
std::string to_json(const Report& report, bool timings = false);
std::string to_csv(const Report& report, bool timings = false);

// 0 pass, 1 fail, 3 indeterminate.
int exit_code(Verdict overall);

}  // namespace qmzv
