#include "hermrel/field.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace hermrel {

namespace {

constexpr std::uint64_t kHardMaxQ = std::uint64_t{1} << 30;

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

void trim(PolyFp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial b.
PolyFp poly_mod(PolyFp a, const PolyFp& b, std::uint32_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const std::uint32_t lead = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            const std::uint64_t sub = std::uint64_t{lead} * b[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

// Dense arithmetic on length-n digit vectors modulo a degree-n modulus; only
// used while building the tables.
class SlowArith {
public:
    SlowArith(const PolyFp& modulus, std::uint32_t p) : mod_(modulus), p_(p), n_(modulus.size() - 1) {}

    PolyFp mul(const PolyFp& a, const PolyFp& b) const {
        PolyFp prod(2 * n_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p_);
            }
        }
        PolyFp r = poly_mod(std::move(prod), mod_, p_);
        r.resize(n_, 0);
        return r;
    }

    PolyFp pow(PolyFp a, std::uint64_t e) const {
        PolyFp r(n_, 0);
        r[0] = 1;
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

private:
    const PolyFp& mod_;
    std::uint32_t p_;
    std::size_t n_;
};

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

std::uint64_t configured_max_q() {
    if (const char* env = std::getenv("HERMREL_MAX_Q")) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return std::min(v, kHardMaxQ);
    }
    return std::uint64_t{1} << 20;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::uint64_t poly_code(const PolyFp& poly, std::uint32_t p) {
    std::uint64_t code = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) code = code * p + *it;
    return code;
}

PolyFp poly_from_code(std::uint64_t code, std::uint32_t p) {
    PolyFp out;
    while (code > 0) {
        out.push_back(static_cast<std::uint32_t>(code % p));
        code /= p;
    }
    return out;
}

bool is_irreducible(const PolyFp& poly, std::uint32_t p) {
    PolyFp f = poly;
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t n = f.size() - 1;
    if (f.back() != 1) {
        // Scale to monic.
        std::uint32_t inv = 1;
        while (std::uint64_t{inv} * f.back() % p != 1) ++inv;
        for (auto& c : f) c = static_cast<std::uint32_t>(std::uint64_t{c} * inv % p);
    }
    for (std::size_t d = 1; d <= n / 2; ++d) {
        const std::uint64_t lo = checked_pow(p, static_cast<std::uint32_t>(d), kHardMaxQ);
        for (std::uint64_t code = lo; code < 2 * lo; ++code) {
            if (poly_mod(f, poly_from_code(code, p), p).empty()) return false;
        }
    }
    return true;
}

PolyFp smallest_irreducible(std::uint32_t p, std::uint32_t degree) {
    const std::uint64_t lo = checked_pow(p, degree, kHardMaxQ);
    for (std::uint64_t code = lo; code < 2 * lo; ++code) {
        PolyFp f = poly_from_code(code, p);
        if (is_irreducible(f, p)) return f;
    }
    throw Error(Errc::ReducibleModulus, "no irreducible polynomial found");
}

FieldSpec FieldSpec::parse(std::string_view text) {
    auto parse_uint = [&](std::string_view s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
            throw Error(Errc::ParseError, "bad field spec '" + std::string(text) + "'");
        }
        return v;
    };
    const auto caret = text.find('^');
    if (caret == std::string_view::npos) {
        throw Error(Errc::ParseError, "field spec must look like p^2m[:modulus], got '" + std::string(text) + "'");
    }
    const auto colon = text.find(':', caret);
    FieldSpec spec;
    const std::uint64_t p = parse_uint(text.substr(0, caret));
    const std::uint64_t e = parse_uint(text.substr(caret + 1, colon == std::string_view::npos ? text.npos : colon - caret - 1));
    if (e == 0 || e % 2 != 0) {
        throw Error(Errc::ParseError, "field exponent must be even and positive in '" + std::string(text) + "'");
    }
    if (p > std::numeric_limits<std::uint32_t>::max() || e > 64) {
        throw Error(Errc::FieldTooLarge, "field spec out of range '" + std::string(text) + "'");
    }
    spec.p = static_cast<std::uint32_t>(p);
    spec.m = static_cast<std::uint32_t>(e / 2);
    if (colon != std::string_view::npos) spec.modulus_code = parse_uint(text.substr(colon + 1));
    return spec;
}

std::string FieldSpec::str() const {
    std::string s = std::to_string(p) + "^" + std::to_string(2 * m);
    if (modulus_code) s += ":" + std::to_string(*modulus_code);
    return s;
}

FieldPtr FieldCtx::build(const FieldSpec& spec, std::uint64_t max_q) {
    std::optional<PolyFp> modulus;
    if (spec.modulus_code) modulus = poly_from_code(*spec.modulus_code, spec.p);
    return build(spec.p, spec.m, std::move(modulus), max_q);
}

FieldPtr FieldCtx::build(std::uint32_t p, std::uint32_t m, std::optional<PolyFp> modulus, std::uint64_t max_q) {
    if (!is_prime(p)) throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
    if (m == 0) throw Error(Errc::InvalidArgument, "m must be positive");
    const std::uint32_t n = 2 * m;
    const std::uint64_t cap = std::min(max_q, kHardMaxQ);
    const std::uint64_t q = checked_pow(p, n, cap);
    if (q > cap) {
        throw Error(Errc::FieldTooLarge, std::to_string(p) + "^" + std::to_string(n) + " exceeds q <= " + std::to_string(cap));
    }

    if (modulus) {
        trim(*modulus);
        if (modulus->size() != n + 1 || modulus->back() != 1) {
            throw Error(Errc::InvalidArgument, "modulus must be monic of degree " + std::to_string(n));
        }
        for (auto c : *modulus) {
            if (c >= p) throw Error(Errc::InvalidArgument, "modulus coefficient out of range");
        }
        if (!is_irreducible(*modulus, p)) {
            throw Error(Errc::ReducibleModulus, "modulus code " + std::to_string(poly_code(*modulus, p)) + " is reducible");
        }
    } else {
        modulus = smallest_irreducible(p, n);
    }

    std::shared_ptr<FieldCtx> f(new FieldCtx());
    f->p_ = p;
    f->m_ = m;
    f->q_ = static_cast<std::uint32_t>(q);
    f->sqrt_q_ = static_cast<std::uint32_t>(checked_pow(p, m, cap));
    f->order_ = f->q_ - 1;
    f->modulus_ = std::move(*modulus);

    const std::uint32_t order = f->order_;
    const SlowArith slow(f->modulus_, p);
    auto to_digits = [&](std::uint32_t code) {
        PolyFp d(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            d[i] = code % p;
            code /= p;
        }
        return d;
    };
    auto to_code = [&](const PolyFp& d) { return static_cast<std::uint32_t>(poly_code(d, p)); };

    // Smallest code of multiplicative order q - 1.
    const auto factors = prime_factors(order);
    std::uint32_t gen = 0;
    for (std::uint32_t c = 1; c < f->q_ && gen == 0; ++c) {
        const PolyFp g = to_digits(c);
        bool primitive = true;
        for (auto r : factors) {
            if (to_code(slow.pow(g, order / r)) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) gen = c;
    }
    if (gen == 0) throw Error(Errc::ReducibleModulus, "no primitive element found");
    f->generator_ = Elem{gen};

    f->exp_.assign(2 * std::size_t{order}, Elem{0});
    f->log_.assign(f->q_, kNoLog);
    const PolyFp g = to_digits(gen);
    PolyFp x = to_digits(1);
    for (std::uint32_t i = 0; i < order; ++i) {
        const std::uint32_t c = to_code(x);
        f->exp_[i] = Elem{c};
        f->exp_[i + order] = Elem{c};
        f->log_[c] = i;
        x = slow.mul(x, g);
    }

    f->neg_.resize(f->q_);
    for (std::uint32_t c = 0; c < f->q_; ++c) {
        PolyFp d = to_digits(c);
        for (auto& v : d) v = (p - v) % p;
        f->neg_[c] = Elem{to_code(d)};
    }

    f->zech_.resize(order);
    for (std::uint32_t k = 0; k < order; ++k) {
        PolyFp d = to_digits(f->exp_[k].code);
        d[0] = (d[0] + 1) % p;
        const std::uint32_t c = to_code(d);
        f->zech_[k] = c == 0 ? kNoLog : f->log_[c];
    }

    f->frob_.resize(f->q_);
    f->frob_[0] = Elem{0};
    for (std::uint32_t c = 1; c < f->q_; ++c) {
        const std::uint64_t e = std::uint64_t{f->log_[c]} * f->sqrt_q_ % order;
        f->frob_[c] = f->exp_[e];
    }
    for (std::uint32_t c = 0; c < f->q_; ++c) {
        if (f->frob_[c].code == c) f->subfield_.push_back(Elem{c});
    }
    return f;
}

Elem FieldCtx::from_int(std::int64_t k) const noexcept {
    std::int64_t r = k % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return Elem{static_cast<std::uint32_t>(r)};
}

Elem FieldCtx::inv(Elem a) const {
    if (a.code == 0) throw Error(Errc::DivisionByZero, "inverse of 0");
    const std::uint32_t l = log_[a.code];
    return exp_[l == 0 ? 0 : order_ - l];
}

Elem FieldCtx::div(Elem a, Elem b) const {
    if (b.code == 0) throw Error(Errc::DivisionByZero, "division by 0");
    if (a.code == 0) return Elem{0};
    return exp_[log_[a.code] + order_ - log_[b.code]];
}

Elem FieldCtx::pow(Elem a, std::uint64_t e) const noexcept {
    if (e == 0) return Elem{1};
    if (a.code == 0) return Elem{0};
    const std::uint64_t k = (std::uint64_t{log_[a.code]} * (e % order_)) % order_;
    return exp_[k];
}

Elem FieldCtx::pow_neg(Elem a, std::uint64_t k) const {
    return inv(pow(a, k));
}

std::uint32_t FieldCtx::log(Elem a) const {
    if (a.code == 0 || a.code >= q_) throw Error(Errc::ZeroInput, "logarithm of 0");
    return log_[a.code];
}

std::vector<std::uint32_t> FieldCtx::digits(Elem a) const {
    std::vector<std::uint32_t> d(degree(), 0);
    std::uint32_t c = a.code;
    for (auto& v : d) {
        v = c % p_;
        c /= p_;
    }
    return d;
}

Elem FieldCtx::from_digits(std::span<const std::uint32_t> digits) const {
    std::uint64_t code = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) code = code * p_ + (*it % p_);
    return Elem{static_cast<std::uint32_t>(code % q_)};
}

namespace {

// F_q as a 2-dimensional F_sqrt(q)-space with basis {1, theta}.
struct SubfieldBasis {
    const FieldCtx& f;
    Elem theta;
    Elem denom;  // theta - theta^sqrt(q), nonzero

    explicit SubfieldBasis(const FieldCtx& field) : f(field) {
        for (std::uint32_t c = 0; c < f.q(); ++c) {
            if (!f.in_subfield(Elem{c})) {
                theta = Elem{c};
                break;
            }
        }
        denom = f.sub(theta, f.frob(theta));
    }

    std::pair<Elem, Elem> coords(Elem z) const {
        const Elem b = f.div(f.sub(z, f.frob(z)), denom);
        const Elem a = f.sub(z, f.mul(b, theta));
        return {a, b};
    }

    Elem compose(Elem a, Elem b) const { return f.add(a, f.mul(b, theta)); }
};

}  // namespace

std::vector<Elem> solve_semilinear(const FieldCtx& f, Elem alpha, Elem beta) {
    if (alpha.code == 0) throw Error(Errc::ZeroAlpha, "alpha must be nonzero");
    const SubfieldBasis basis(f);
    // Columns are the images of 1 and theta under z -> z^sqrt(q) + alpha z.
    const auto [m11, m21] = basis.coords(f.add(f.one(), alpha));
    const auto [m12, m22] = basis.coords(f.add(f.frob(basis.theta), f.mul(alpha, basis.theta)));
    const auto [r1, r2] = basis.coords(f.neg(beta));

    std::vector<Elem> roots;
    const Elem det = f.sub(f.mul(m11, m22), f.mul(m12, m21));
    if (det.code != 0) {
        const Elem a = f.div(f.sub(f.mul(r1, m22), f.mul(m12, r2)), det);
        const Elem b = f.div(f.sub(f.mul(m11, r2), f.mul(r1, m21)), det);
        roots.push_back(basis.compose(a, b));
        return roots;
    }

    // Rank one: the map is nonzero because alpha != 0.
    const bool row1 = m11.code != 0 || m12.code != 0;
    const Elem ra = row1 ? m11 : m21;
    const Elem rb = row1 ? m12 : m22;
    const Elem rr = row1 ? r1 : r2;
    Elem pa{0}, pb{0};
    if (ra.code != 0) {
        pa = f.div(rr, ra);
    } else {
        pb = f.div(rr, rb);
    }
    const bool consistent = f.add(f.mul(m11, pa), f.mul(m12, pb)) == r1 &&
                            f.add(f.mul(m21, pa), f.mul(m22, pb)) == r2;
    if (!consistent) return roots;
    const Elem ka = f.neg(rb);
    const Elem kb = ra;
    for (Elem c : f.subfield_elements()) {
        roots.push_back(basis.compose(f.add(pa, f.mul(c, ka)), f.add(pb, f.mul(c, kb))));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<Elem> solve_artin_schreier(const FieldCtx& f, Elem beta) {
    return solve_semilinear(f, f.minus_one(), f.neg(beta));
}

std::vector<Elem> solve_kummer(const FieldCtx& f, Elem beta) {
    if (beta.code == 0) throw Error(Errc::ZeroInput, "beta must be nonzero");
    const std::uint32_t d = f.sqrt_q() - 1;
    const std::uint32_t period = f.sqrt_q() + 1;
    std::vector<Elem> roots;
    if (d == 0) return roots;
    const std::uint32_t lb = f.log(beta);
    if (lb % d != 0) return roots;
    const std::uint64_t k0 = lb / d;
    for (std::uint32_t j = 0; j < d; ++j) roots.push_back(f.exp(k0 + std::uint64_t{j} * period));
    std::sort(roots.begin(), roots.end());
    return roots;
}

SpecialElements special_elements(const FieldCtx& f) {
    std::optional<Elem> u, a;
    for (std::uint32_t c = 0; c < f.q() && (!u || !a); ++c) {
        const Elem e{c};
        if (!u && f.trace(e) == f.one()) u = e;
        if (!a && c != 0 && f.norm(e) == f.minus_one()) a = e;
    }
    if (!u || !a) throw Error(Errc::InvalidArgument, "trace/norm witnesses not found");
    return {*u, *a};
}

Elem solve_rho(const FieldCtx& f, Elem lambda) {
    if (lambda.code == 0 || f.norm(lambda) != f.one()) {
        throw Error(Errc::NormNotOne, "Nm(" + std::to_string(lambda.code) + ") != 1");
    }
    const auto roots = solve_kummer(f, f.inv(lambda));
    return roots.front();
}

}  // namespace hermrel
