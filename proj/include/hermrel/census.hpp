#pragma once

// Seeded and exhaustive sweeps over coefficient matrices A, checking the
// point-count congruence, the m bounds, the mirror/dual properties and the
// tangent multiplicity dichotomy. Reports merge across workers.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "hermrel/curve.hpp"

namespace hermrel {

enum class Check { congruence, m_bounds, mirror_props, dual_incidence, multiplicity_dichotomy };

std::string to_string(Check c);
Check parse_check(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr std::uint64_t kDefaultExhaustiveBudget = 1u << 20;

struct SweepPlan {
    FieldSpec field{2, 1, std::nullopt};
    bool exhaustive = false;
    std::uint64_t samples = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::set<Check> checks;
    unsigned workers = 1;
    // Upper bound on q^9 for exhaustive mode.
    std::uint64_t budget = kDefaultExhaustiveBudget;
    // Curves also checked over F_{q^2} (first indices only, 4 < q <= 49).
    std::uint64_t extension_samples = 100;

    // key=value lines; '#' starts a comment. Throws ParseError.
    static SweepPlan parse(std::istream& in);
    static SweepPlan parse_file(const std::string& path);
};

struct Violation {
    std::uint64_t index = 0;
    std::string check;
    std::string matrix;
    std::string detail;

    friend auto operator<=>(const Violation&, const Violation&) = default;
};

struct SweepTotals {
    std::uint64_t tuples = 0;               // indices visited
    std::uint64_t singular_rejected = 0;    // det = 0 draws or tuples
    std::uint64_t non_normalized = 0;       // exhaustive: skipped scalar duplicates
    std::uint64_t curves = 0;
    std::uint64_t extension_curves = 0;
    std::uint64_t points = 0;

    friend bool operator==(const SweepTotals&, const SweepTotals&) = default;
};

struct SweepTiming {
    unsigned workers = 1;
    double seconds = 0;
    double curves_per_second = 0;
    double curves_per_second_per_worker = 0;
};

struct SweepReport {
    std::string sweep;
    std::string field;
    std::uint32_t q = 0;
    bool exhaustive = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::set<Check> checks;
    SweepTotals totals;
    // (N_q, rational inflexions) -> curves.
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> histogram;
    std::vector<Violation> violations;  // sorted
    // Never part of the deterministic output.
    std::optional<SweepTiming> timing;

    bool ok() const noexcept { return violations.empty(); }
    // m -> curves, derived from the histogram.
    std::map<std::uint64_t, std::uint64_t> m_histogram() const;
    // Equality ignoring timing.
    friend bool operator==(const SweepReport& a, const SweepReport& b) {
        return std::tie(a.sweep, a.field, a.q, a.exhaustive, a.samples, a.seed, a.checks, a.totals, a.histogram,
                        a.violations) == std::tie(b.sweep, b.field, b.q, b.exhaustive, b.samples, b.seed, b.checks,
                                                  b.totals, b.histogram, b.violations);
    }
};

// Adds the counts and violations of `part` into `into`. Associative and commutative.
void merge(SweepReport& into, const SweepReport& part);

// Matrix number `index` of the seeded stream; rejected singular draws are counted.
Mat3 sample_matrix(const FieldCtx& f, std::uint64_t seed, std::uint64_t index, std::uint64_t* rejected = nullptr);

// Number of indices the plan visits: q^9 tuples or the sample count. Throws BudgetExceeded.
std::uint64_t sweep_size(const SweepPlan& plan);

// Single-threaded sweep of indices [lo, hi).
SweepReport sweep_range(const SweepPlan& plan, std::string_view name, std::uint64_t lo, std::uint64_t hi);

// Full sweep over plan.workers threads.
SweepReport run_sweep(const SweepPlan& plan, std::string_view name);

// The named sweeps add their checks to the plan.
SweepReport sweep_congruence(SweepPlan plan);
SweepReport sweep_corollary_bounds(SweepPlan plan);
SweepReport sweep_properties(SweepPlan plan);

std::string to_json(const SweepReport& r, bool with_timing = false);
std::string to_csv(const SweepReport& r);

}  // namespace hermrel
