#pragma once

// Finite fields F_q with q = p^(2m), stored as exp/log/Zech tables over a
// fixed primitive element. Elements are identified by their integer code:
// the base-p digits c0, c1, ... of the code are the coefficients of
// c0 + c1*t + ... in the polynomial basis F_p[t]/(modulus).

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hermrel/error.hpp"

namespace hermrel {

struct Elem {
    std::uint32_t code = 0;

    friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline constexpr Elem operator""_e(unsigned long long code) { return Elem{static_cast<std::uint32_t>(code)}; }

// Parsed form of "p^2m[:modulus-code]", e.g. "3^2" or "3^2:10".
struct FieldSpec {
    std::uint32_t p = 0;
    std::uint32_t m = 0;
    std::optional<std::uint64_t> modulus_code;

    static FieldSpec parse(std::string_view text);
    std::string str() const;
};

// q bound for table construction; HERMREL_MAX_Q overrides the 2^20 default.
std::uint64_t configured_max_q();

bool is_prime(std::uint64_t n);

// Polynomials over F_p as ascending coefficient lists.
using PolyFp = std::vector<std::uint32_t>;

bool is_irreducible(const PolyFp& poly, std::uint32_t p);
std::uint64_t poly_code(const PolyFp& poly, std::uint32_t p);
PolyFp poly_from_code(std::uint64_t code, std::uint32_t p);
// Lexicographically smallest monic irreducible of the given degree, scanning
// codes p^degree, p^degree + 1, ... in ascending order.
PolyFp smallest_irreducible(std::uint32_t p, std::uint32_t degree);

class FieldCtx {
public:
    static std::shared_ptr<const FieldCtx> build(std::uint32_t p, std::uint32_t m,
                                                 std::optional<PolyFp> modulus = std::nullopt,
                                                 std::uint64_t max_q = configured_max_q());
    static std::shared_ptr<const FieldCtx> build(const FieldSpec& spec,
                                                 std::uint64_t max_q = configured_max_q());

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t m() const noexcept { return m_; }
    std::uint32_t degree() const noexcept { return 2 * m_; }
    std::uint32_t q() const noexcept { return q_; }
    std::uint32_t sqrt_q() const noexcept { return sqrt_q_; }
    const PolyFp& modulus() const noexcept { return modulus_; }
    std::uint64_t modulus_code() const { return poly_code(modulus_, p_); }
    FieldSpec spec() const { return {p_, m_, modulus_code()}; }
    Elem generator() const noexcept { return generator_; }

    bool contains(Elem a) const noexcept { return a.code < q_; }
    Elem zero() const noexcept { return Elem{0}; }
    Elem one() const noexcept { return Elem{1}; }
    Elem minus_one() const noexcept { return neg_[1]; }
    // Image of an integer in the prime field.
    Elem from_int(std::int64_t k) const noexcept;

    Elem add(Elem a, Elem b) const noexcept {
        if (a.code == 0) return b;
        if (b.code == 0) return a;
        const std::uint32_t la = log_[a.code];
        std::uint32_t d = log_[b.code] + order_ - la;
        if (d >= order_) d -= order_;
        const std::uint32_t z = zech_[d];
        if (z == kNoLog) return Elem{0};
        return exp_[la + z];
    }
    Elem neg(Elem a) const noexcept { return neg_[a.code]; }
    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg_[b.code]); }
    Elem mul(Elem a, Elem b) const noexcept {
        if (a.code == 0 || b.code == 0) return Elem{0};
        return exp_[log_[a.code] + log_[b.code]];
    }
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const;
    Elem pow(Elem a, std::uint64_t e) const noexcept;
    // a^(-k) for a != 0.
    Elem pow_neg(Elem a, std::uint64_t k) const;

    // a -> a^sqrt(q); an involution of F_q fixing exactly F_sqrt(q).
    Elem frob(Elem a) const noexcept { return frob_[a.code]; }
    std::span<const Elem> frobenius_table() const noexcept { return frob_; }
    bool in_subfield(Elem a) const noexcept { return frob_[a.code] == a; }
    const std::vector<Elem>& subfield_elements() const noexcept { return subfield_; }

    Elem trace(Elem a) const noexcept { return add(a, frob(a)); }
    // Nm(a) = a^(sqrt q + 1); Nm(0) is reported as 0.
    Elem norm(Elem a) const noexcept { return pow(a, std::uint64_t{sqrt_q_} + 1); }

    // Discrete logarithm base generator(); a must be nonzero.
    std::uint32_t log(Elem a) const;
    Elem exp(std::uint64_t k) const noexcept { return exp_[k % order_]; }

    std::vector<std::uint32_t> digits(Elem a) const;
    Elem from_digits(std::span<const std::uint32_t> digits) const;

private:
    FieldCtx() = default;

    static constexpr std::uint32_t kNoLog = 0xffffffffu;

    std::uint32_t p_ = 0;
    std::uint32_t m_ = 0;
    std::uint32_t q_ = 0;
    std::uint32_t sqrt_q_ = 0;
    std::uint32_t order_ = 0;  // q - 1
    PolyFp modulus_;
    Elem generator_;
    std::vector<Elem> exp_;  // length 2(q-1), so exp_[i + j] needs no reduction
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> zech_;  // log(1 + g^n), kNoLog when 1 + g^n = 0
    std::vector<Elem> neg_;
    std::vector<Elem> frob_;
    std::vector<Elem> subfield_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

// Root sets of the three semilinear equations; all results sorted by code.

// X^sqrt(q) - X - beta = 0. Nonempty iff Tr(beta) = 0, then a coset of F_sqrt(q).
std::vector<Elem> solve_artin_schreier(const FieldCtx& f, Elem beta);
// X^(sqrt(q) - 1) = beta over F_q^*. Nonempty iff Nm(beta) = 1. Throws ZeroInput.
std::vector<Elem> solve_kummer(const FieldCtx& f, Elem beta);
// X^sqrt(q) + alpha X + beta = 0, solved as a 2x2 linear system over F_sqrt(q).
// Throws ZeroAlpha.
std::vector<Elem> solve_semilinear(const FieldCtx& f, Elem alpha, Elem beta);

struct SpecialElements {
    Elem trace_one;       // smallest code u with Tr u = 1
    Elem norm_minus_one;  // smallest code a with Nm a = -1
};

SpecialElements special_elements(const FieldCtx& f);

// Smallest-code rho with rho^(1 - sqrt q) = lambda. Throws NormNotOne.
Elem solve_rho(const FieldCtx& f, Elem lambda);

}  // namespace hermrel
