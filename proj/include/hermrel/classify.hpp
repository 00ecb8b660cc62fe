#pragma once

// Curves with at least two rational inflexions: reduction to the omega form
//   x^e y + omega x y^e + z^(e+1) = 0,   e = sqrt(q),
// the three types A (omega = 1), B (Nm omega = 1, omega != 1) and
// C (Nm omega != 1), canonical class invariants, and projective equivalence.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "hermrel/curve.hpp"

namespace hermrel {

struct TypeA {
    friend bool operator==(const TypeA&, const TypeA&) = default;
};
struct TypeB {
    Elem eta;  // smallest code in eta * F_sqrt(q)^*
    friend bool operator==(const TypeB&, const TypeB&) = default;
};
struct TypeC {
    Elem omega;  // smaller code of {omega, omega^(-sqrt q)}
    friend bool operator==(const TypeC&, const TypeC&) = default;
};
struct OutOfTheoremScope {
    std::size_t inflexion_count = 0;
    friend bool operator==(const OutOfTheoremScope&, const OutOfTheoremScope&) = default;
};

using CurveClass = std::variant<TypeA, TypeB, TypeC, OutOfTheoremScope>;

// "A", "B", "C" or "out_of_scope".
std::string type_label(const CurveClass& cls);

// Matrix of C_omega: a12 = 1, a21 = omega, a33 = 1.
Mat3 omega_matrix(Elem omega);
Curve omega_curve(FieldPtr field, Elem omega);

struct NormalForm {
    Elem omega;
    PglElem transform;  // transform(C, T) = C_omega
    ProjPoint first;    // inflexion sent to (1, 0, 0)
    ProjPoint second;   // inflexion sent to (0, 1, 0)
};

std::vector<ProjPoint> rational_inflexions(const Curve& c);

// Uses the two smallest rational inflexions unless a pair is given.
// Throws TooFewInflexions, ShapeAssertionFailed.
NormalForm normalize_two_inflexions(const Curve& c,
                                    std::optional<std::pair<ProjPoint, ProjPoint>> pair = std::nullopt);

// Class of C_omega read directly off omega (no normalization).
CurveClass class_of_omega(const FieldCtx& f, Elem omega);

struct Classification {
    CurveClass cls;
    std::optional<NormalForm> normal;
    std::uint64_t n_points = 0;
    std::size_t n_inflexions = 0;
};

Classification classify(const Curve& c);

struct Diagonalization {
    Elem beta;          // beta^(1 - sqrt q) = omega
    Elem eta;           // beta^sqrt(q), outside F_sqrt(q)
    PglElem rescale;    // C_omega -> x^e y + x y^e + eta z^(e+1)
    PglElem to_diag;    // the trace/norm transform onto diag[1, 1, eta]
    PglElem composite;  // rescale * to_diag
};

// Throws NotTypeB.
Diagonalization type_b_diagonalize(const FieldCtx& f, Elem omega);

// Invariant of the eta-coset eta * F_sqrt(q)^* (smallest code).
Elem eta_coset_representative(const FieldCtx& f, Elem eta);
// Smaller code of {omega, omega^(-sqrt q)}.
Elem omega_pair_representative(const FieldCtx& f, Elem omega);

// Throws NotApplicable for TypeA and OutOfTheoremScope.
Elem canonical_invariant(const CurveClass& cls);

enum class EquivMethod { theorem, bruteforce };

struct Equivalence {
    bool equivalent = false;
    std::optional<PglElem> witness;  // T with T* A1 T = A2 in PGL
};

inline constexpr std::uint64_t kDefaultBruteforceBudget = 100000;

// Theorem method throws MethodUnavailable unless both curves have two
// rational inflexions; brute force throws BudgetExceeded when |PGL(3, q)|
// exceeds the budget.
Equivalence equivalent(const Curve& c1, const Curve& c2, EquivMethod method,
                       std::uint64_t budget = kDefaultBruteforceBudget);

// The PGL(3, q) orbit { T* A T } of a matrix. Throws BudgetExceeded.
std::unordered_set<PglElem, PglHash> pgl_orbit(const FieldCtx& f, const PglElem& a,
                                               std::uint64_t budget = kDefaultBruteforceBudget);

struct Table1Row {
    std::string type;
    std::size_t classes = 0;
    std::optional<std::uint64_t> n_points;
    std::optional<std::size_t> n_inflexions;
    // Every curve of the type shared the same (N_q, inflexion count).
    bool uniform = true;
};

struct Table1Report {
    std::uint32_t q = 0;
    std::array<Table1Row, 3> rows;
    std::vector<std::string> notes;
    // Disagreements between the normalized class and the class read off omega.
    std::vector<std::string> violations;
};

Table1Report class_census(FieldPtr field, unsigned workers = 1);

}  // namespace hermrel
