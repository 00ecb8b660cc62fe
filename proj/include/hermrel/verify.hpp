#pragma once

// Per-field verification suites behind `hermrel verify-all`.

#include <cstdint>
#include <string>
#include <vector>

#include "hermrel/census.hpp"

namespace hermrel {

struct VerifyOptions {
    std::uint64_t samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;
    std::uint64_t bruteforce_budget = 100000;
    std::uint64_t extension_samples = 100;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0;
};

// Expected (A, B, C) class counts: 1, sqrt q, (sqrt q + 1)(sqrt q - 2)/2.
std::array<std::size_t, 3> expected_class_counts(std::uint64_t sqrt_q);

SuiteResult verify_congruence(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_bounds(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_properties(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_table1(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_hermitian_counts(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_solvers(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_equivalence(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_residual_law(FieldPtr f, const VerifyOptions& opt);
SuiteResult verify_determinism(FieldPtr f, const VerifyOptions& opt);

std::vector<SuiteResult> verify_all(FieldPtr f, const VerifyOptions& opt);

}  // namespace hermrel
