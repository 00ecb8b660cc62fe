#include "hermrel/census.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "hermrel/classify.hpp"
#include "json.hpp"

namespace hermrel {

namespace {

constexpr std::array<std::pair<Check, std::string_view>, 5> kCheckNames{{
    {Check::congruence, "congruence"},
    {Check::m_bounds, "m_bounds"},
    {Check::mirror_props, "mirror_props"},
    {Check::dual_incidence, "dual_incidence"},
    {Check::multiplicity_dichotomy, "multiplicity_dichotomy"},
}};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) throw Error(Errc::ParseError, key + ": not an integer: " + value);
    return v;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Immutable state shared by all workers of one sweep.
struct SweepContext {
    FieldPtr field;
    std::set<Check> checks;
    std::optional<FieldExtension> ext;
    std::uint64_t extension_samples = 0;
    // q = 4: the PGL orbit of diag[1, w, w^2].
    std::optional<std::unordered_set<PglElem, PglHash>> special_orbit;

    bool has(Check c) const { return checks.count(c) != 0; }
};

SweepContext make_context(const SweepPlan& plan) {
    SweepContext ctx;
    ctx.field = FieldCtx::build(plan.field);
    ctx.checks = plan.checks;
    const FieldCtx& f = *ctx.field;
    if (ctx.has(Check::multiplicity_dichotomy) && plan.extension_samples > 0 && f.q() > 4) {
        ctx.ext = FieldExtension::build(ctx.field);
        ctx.extension_samples = plan.extension_samples;
    }
    if (ctx.has(Check::m_bounds) && f.q() == 4) {
        const Elem w = f.generator();
        ctx.special_orbit = pgl_orbit(f, PglElem::make(f, Mat3::diag(f.one(), w, f.mul(w, w))));
    }
    return ctx;
}

SweepReport empty_report(const SweepPlan& plan, std::string_view name, const FieldCtx& f) {
    SweepReport r;
    r.sweep = std::string(name);
    r.field = f.spec().str();
    r.q = f.q();
    r.exhaustive = plan.exhaustive;
    r.samples = plan.exhaustive ? 0 : plan.samples;
    r.seed = plan.exhaustive ? 0 : plan.seed;
    r.checks = plan.checks;
    return r;
}

class CurveChecker {
public:
    CurveChecker(const SweepContext& ctx, SweepReport& rep) : ctx_(ctx), f_(*ctx.field), rep_(rep) {}

    void run(std::uint64_t index, const Mat3& a) {
        index_ = index;
        const Curve c(ctx_.field, a);
        matrix_ = format_matrix(c.matrix().mat());
        const HermitianForm form = c.form();
        const std::uint32_t e = f_.sqrt_q();

        const auto pts = form.points();
        std::vector<TangentDivisor> divs;
        divs.reserve(pts.size());
        std::uint64_t inflexions = 0;
        for (const auto& pt : pts) {
            divs.push_back(form.tangent_divisor(pt));
            inflexions += divs.back().multiplicity == e + 1;
        }
        const std::uint64_t n = pts.size();
        ++rep_.totals.curves;
        rep_.totals.points += n;
        ++rep_.histogram[{n, inflexions}];

        if (ctx_.has(Check::congruence) && n % e != 1) {
            add("congruence", "N = " + std::to_string(n) + " is not 1 mod " + std::to_string(e));
        }
        if (ctx_.has(Check::m_bounds)) check_bounds(c, n);
        if (ctx_.has(Check::mirror_props)) check_mirror(c, pts, divs);
        if (ctx_.has(Check::dual_incidence)) check_dual(c, form, pts);
        if (ctx_.has(Check::multiplicity_dichotomy)) {
            check_divisors(form, divs, "");
            if (ctx_.ext && index < ctx_.extension_samples) {
                const HermitianForm big = c.form_over(*ctx_.ext);
                std::vector<TangentDivisor> big_divs;
                for (const auto& pt : big.points()) big_divs.push_back(big.tangent_divisor(pt));
                check_divisors(big, big_divs, " over F_" + std::to_string(ctx_.ext->big().q()));
                ++rep_.totals.extension_curves;
            }
        }
    }

private:
    void add(std::string check, std::string detail) {
        rep_.violations.push_back({index_, std::move(check), matrix_, std::move(detail)});
    }

    void check_bounds(const Curve& c, std::uint64_t n) {
        const std::uint64_t q = f_.q(), e = f_.sqrt_q();
        if (n % e != 1) return;
        const std::uint64_t m = (n - 1) / e;
        if (m != q && m > e + 2) {
            add("m_bounds", "m = " + std::to_string(m) + " outside {q} and [0, sqrt q + 2]");
            return;
        }
        if (m == q && !c.is_hermitian()) {
            if (!(ctx_.special_orbit && ctx_.special_orbit->count(c.matrix()))) {
                add("m_bounds", "m = q but the curve is not Hermitian");
            }
        }
    }

    void check_mirror(const Curve& c, const std::vector<ProjPoint>& pts, const std::vector<TangentDivisor>& divs) {
        const Curve mc = c.mirror();
        const HermitianForm mform = mc.form();
        if (mform.points() != pts) {
            add("mirror_props", "point sets of C_A and C_A* differ");
            return;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& pt = pts[i];
            const TangentDivisor md = mform.tangent_divisor(pt);
            const bool infl = divs[i].residual == pt, minfl = md.residual == pt;
            if (infl != minfl) {
                add("mirror_props", "inflexion status differs at " + format_point(pt));
            } else if (infl && c.tangent_line(pt) != mform.tangent_line(pt)) {
                add("mirror_props", "tangent lines differ at inflexion " + format_point(pt));
            }
            const TangentDivisor back = mform.tangent_divisor(divs[i].residual);
            if (back.residual != pt) {
                add("mirror_props", "reciprocity fails at " + format_point(pt) + ": residual " +
                                        format_point(divs[i].residual) + " maps back to " + format_point(back.residual));
            }
        }
    }

    void check_dual(const Curve& c, const HermitianForm& form, const std::vector<ProjPoint>& pts) {
        const HermitianForm dform = c.dual().form();
        for (const auto& pt : pts) {
            const ProjLine l = form.tangent_line(pt);
            if (!dform.contains(ProjPoint{l.c})) {
                add("dual_incidence", "tangent " + format_line(l) + " at " + format_point(pt) + " is off the dual curve");
            }
        }
    }

    void check_divisors(const HermitianForm& form, const std::vector<TangentDivisor>& divs, const std::string& where) {
        const FieldCtx& f = form.field();
        const std::uint32_t e = form.exponent();
        for (const auto& d : divs) {
            std::string bad;
            if (d.coeffs[0].code != 0 || d.coeffs[1].code != 0) bad = "c0 or c1 nonzero";
            else if (d.multiplicity != e && d.multiplicity != e + 1) bad = "multiplicity " + std::to_string(d.multiplicity);
            else if (!form.contains(d.residual)) bad = "residual off the curve";
            else if (!incident(f, d.residual, form.tangent_line(d.base))) bad = "residual off the tangent";
            if (!bad.empty()) add("multiplicity_dichotomy", bad + " at " + format_point(d.base) + where);
        }
    }

    const SweepContext& ctx_;
    const FieldCtx& f_;
    SweepReport& rep_;
    std::uint64_t index_ = 0;
    std::string matrix_;
};

SweepReport sweep_range_ctx(const SweepPlan& plan, const SweepContext& ctx, std::string_view name, std::uint64_t lo,
                            std::uint64_t hi) {
    const FieldCtx& f = *ctx.field;
    SweepReport rep = empty_report(plan, name, f);
    CurveChecker checker(ctx, rep);
    const std::uint64_t q = f.q();
    for (std::uint64_t i = lo; i < hi; ++i) {
        ++rep.totals.tuples;
        Mat3 a;
        if (plan.exhaustive) {
            std::uint64_t rest = i;
            bool leading = true, normalized = true;
            for (auto& x : a.a) {
                x = Elem{static_cast<std::uint32_t>(rest % q)};
                rest /= q;
                if (leading && x.code != 0) {
                    normalized = x.code == 1;
                    leading = false;
                }
            }
            if (leading) {
                ++rep.totals.singular_rejected;
                continue;
            }
            if (!normalized) {
                ++rep.totals.non_normalized;
                continue;
            }
            if (det(f, a).code == 0) {
                ++rep.totals.singular_rejected;
                continue;
            }
        } else {
            a = sample_matrix(f, plan.seed, i, &rep.totals.singular_rejected);
        }
        checker.run(i, a);
    }
    std::sort(rep.violations.begin(), rep.violations.end());
    return rep;
}

}  // namespace

std::string to_string(Check c) {
    for (const auto& [k, name] : kCheckNames)
        if (k == c) return std::string(name);
    return "?";
}

Check parse_check(std::string_view name) {
    for (const auto& [k, n] : kCheckNames)
        if (n == name) return k;
    throw Error(Errc::ParseError, "unknown check: " + std::string(name));
}

SweepPlan SweepPlan::parse(std::istream& in) {
    SweepPlan plan;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key == "field") {
            plan.field = FieldSpec::parse(value);
        } else if (key == "mode") {
            if (value != "exhaustive" && value != "sampled") throw Error(Errc::ParseError, "mode: " + value);
            plan.exhaustive = value == "exhaustive";
        } else if (key == "samples") {
            plan.samples = parse_u64(key, value);
        } else if (key == "seed") {
            plan.seed = parse_u64(key, value);
        } else if (key == "workers") {
            plan.workers = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_u64(key, value)));
        } else if (key == "budget") {
            plan.budget = parse_u64(key, value);
        } else if (key == "extension_samples") {
            plan.extension_samples = parse_u64(key, value);
        } else if (key == "checks") {
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (!item.empty()) plan.checks.insert(parse_check(item));
            }
        } else {
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown key " + key);
        }
    }
    return plan;
}

SweepPlan SweepPlan::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot read plan file " + path);
    return parse(in);
}

std::map<std::uint64_t, std::uint64_t> SweepReport::m_histogram() const {
    std::map<std::uint64_t, std::uint64_t> out;
    std::uint64_t e = 1;
    while (e * e < q) ++e;
    for (const auto& [key, count] : histogram) out[(key.first - 1) / e] += count;
    return out;
}

void merge(SweepReport& into, const SweepReport& part) {
    into.totals.tuples += part.totals.tuples;
    into.totals.singular_rejected += part.totals.singular_rejected;
    into.totals.non_normalized += part.totals.non_normalized;
    into.totals.curves += part.totals.curves;
    into.totals.extension_curves += part.totals.extension_curves;
    into.totals.points += part.totals.points;
    for (const auto& [key, count] : part.histogram) into.histogram[key] += count;
    const auto mid = into.violations.size();
    into.violations.insert(into.violations.end(), part.violations.begin(), part.violations.end());
    std::inplace_merge(into.violations.begin(), into.violations.begin() + static_cast<std::ptrdiff_t>(mid),
                       into.violations.end());
}

Mat3 sample_matrix(const FieldCtx& f, std::uint64_t seed, std::uint64_t index, std::uint64_t* rejected) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t q = f.q();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % q;
    while (true) {
        Mat3 a;
        for (auto& x : a.a) {
            std::uint64_t v;
            do v = rng();
            while (v >= limit);
            x = Elem{static_cast<std::uint32_t>(v % q)};
        }
        if (det(f, a).code != 0) return a;
        if (rejected) ++*rejected;
    }
}

std::uint64_t sweep_size(const SweepPlan& plan) {
    if (!plan.exhaustive) return plan.samples;
    const std::uint64_t q = ipow(plan.field.p, 2 * plan.field.m);
    // q^9 overflows well before q = 2^7.
    if (q > 64 || ipow(q, 9) > plan.budget) {
        throw Error(Errc::BudgetExceeded, "exhaustive sweep over q^9 tuples exceeds budget " + std::to_string(plan.budget));
    }
    return ipow(q, 9);
}

SweepReport sweep_range(const SweepPlan& plan, std::string_view name, std::uint64_t lo, std::uint64_t hi) {
    sweep_size(plan);
    return sweep_range_ctx(plan, make_context(plan), name, lo, hi);
}

SweepReport run_sweep(const SweepPlan& plan, std::string_view name) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t total = sweep_size(plan);
    const SweepContext ctx = make_context(plan);
    const unsigned workers = std::max(1u, plan.workers);

    std::vector<SweepReport> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] {
            try {
                parts[w] = sweep_range_ctx(plan, ctx, name, lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    SweepReport rep = empty_report(plan, name, *ctx.field);
    for (const auto& part : parts) merge(rep, part);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    SweepTiming t;
    t.workers = workers;
    t.seconds = secs;
    t.curves_per_second = secs > 0 ? static_cast<double>(rep.totals.curves) / secs : 0;
    t.curves_per_second_per_worker = t.curves_per_second / workers;
    rep.timing = t;
    return rep;
}

SweepReport sweep_congruence(SweepPlan plan) {
    plan.checks.insert(Check::congruence);
    return run_sweep(plan, "congruence");
}

SweepReport sweep_corollary_bounds(SweepPlan plan) {
    plan.checks.insert(Check::congruence);
    plan.checks.insert(Check::m_bounds);
    return run_sweep(plan, "bounds");
}

SweepReport sweep_properties(SweepPlan plan) {
    plan.checks.insert(Check::mirror_props);
    plan.checks.insert(Check::dual_incidence);
    plan.checks.insert(Check::multiplicity_dichotomy);
    return run_sweep(plan, "props");
}

std::string to_json(const SweepReport& r, bool with_timing) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["sweep"] = r.sweep;
    j["field"] = r.field;
    j["q"] = r.q;
    j["mode"] = r.exhaustive ? "exhaustive" : "sampled";
    if (!r.exhaustive) {
        j["samples"] = r.samples;
        j["seed"] = r.seed;
    }
    ordered_json checks = ordered_json::array();
    for (Check c : r.checks) checks.push_back(to_string(c));
    j["checks"] = checks;
    j["totals"] = {{"tuples", r.totals.tuples},
                   {"singular_rejected", r.totals.singular_rejected},
                   {"non_normalized", r.totals.non_normalized},
                   {"curves", r.totals.curves},
                   {"extension_curves", r.totals.extension_curves},
                   {"points", r.totals.points},
                   {"violations", r.violations.size()}};
    std::uint64_t e = 1;
    while (e * e < r.q) ++e;
    ordered_json hist = ordered_json::array();
    for (const auto& [key, count] : r.histogram) {
        hist.push_back({{"n_points", key.first}, {"m", (key.first - 1) / e}, {"inflexions", key.second}, {"count", count}});
    }
    j["histogram"] = hist;
    ordered_json ms = ordered_json::array();
    for (const auto& [m, count] : r.m_histogram()) ms.push_back({{"m", m}, {"count", count}});
    j["m_values"] = ms;
    ordered_json viol = ordered_json::array();
    for (const auto& v : r.violations) {
        viol.push_back({{"index", v.index}, {"check", v.check}, {"matrix", v.matrix}, {"detail", v.detail}});
    }
    j["violations"] = viol;
    if (with_timing && r.timing) {
        j["timing"] = {{"workers", r.timing->workers},
                       {"seconds", r.timing->seconds},
                       {"curves_per_second", r.timing->curves_per_second},
                       {"curves_per_second_per_worker", r.timing->curves_per_second_per_worker}};
    }
    return j.dump(2);
}

std::string to_csv(const SweepReport& r) {
    std::ostringstream out;
    std::uint64_t e = 1;
    while (e * e < r.q) ++e;
    out << "record,n_points,m,inflexions,count,detail\n";
    out << "total,,,," << r.totals.curves << ",curves\n";
    out << "total,,,," << r.totals.singular_rejected << ",singular_rejected\n";
    out << "total,,,," << r.violations.size() << ",violations\n";
    for (const auto& [key, count] : r.histogram) {
        out << "histogram," << key.first << ',' << (key.first - 1) / e << ',' << key.second << ',' << count << ",\n";
    }
    for (const auto& v : r.violations) {
        out << "violation,,,," << v.index << ",\"" << v.check << ": " << v.matrix << ": " << v.detail << "\"\n";
    }
    return out.str();
}

}  // namespace hermrel
