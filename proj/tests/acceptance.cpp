// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Library results are cross-checked against table-free reference arithmetic.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "hermrel/census.hpp"
#include "hermrel/classify.hpp"
#include "hermrel/curve.hpp"
#include "hermrel/field.hpp"
#include "hermrel/projective.hpp"
#include "oracle.hpp"

using namespace hermrel;

namespace {

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Addition and multiplication tables filled from the schoolbook field.
class Ref {
public:
    explicit Ref(const FieldCtx& f) : q_(f.q()), e_(f.sqrt_q()), add_(q_ * q_), mul_(q_ * q_), neg_(q_) {
        const oracle::NaiveField nf = oracle::naive(f);
        for (std::uint32_t a = 0; a < q_; ++a) {
            neg_[a] = nf.neg(a);
            for (std::uint32_t b = 0; b < q_; ++b) {
                add_[a * q_ + b] = nf.add(a, b);
                mul_[a * q_ + b] = nf.mul(a, b);
            }
        }
    }

    std::uint32_t q() const { return q_; }
    std::uint32_t e() const { return e_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg_[b]); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
    std::uint32_t pow(std::uint32_t a, std::uint64_t k) const {
        std::uint32_t r = 1;
        for (; k; k >>= 1, a = mul(a, a))
            if (k & 1) r = mul(r, a);
        return r;
    }
    std::uint32_t frob(std::uint32_t a) const { return pow(a, e_); }
    std::uint32_t inv(std::uint32_t a) const { return pow(a, q_ - 2); }
    std::uint32_t norm(std::uint32_t a) const { return pow(a, e_ + 1); }
    std::uint32_t trace(std::uint32_t a) const { return add(a, frob(a)); }

    using Vec = std::array<std::uint32_t, 3>;
    using Mat = std::array<std::uint32_t, 9>;

    std::uint32_t det(const Mat& m) const {
        auto t = [&](int a, int b, int c) { return mul(m[a], mul(m[b], m[c])); };
        std::uint32_t pos = add(add(t(0, 4, 8), t(1, 5, 6)), t(2, 3, 7));
        std::uint32_t negs = add(add(t(2, 4, 6), t(0, 5, 7)), t(1, 3, 8));
        return sub(pos, negs);
    }

    // (x^e, y^e, z^e) A (x, y, z)^t
    std::uint32_t eval(const Mat& a, const Vec& v) const {
        std::uint32_t s = 0;
        for (int i = 0; i < 3; ++i) {
            const std::uint32_t fi = frob(v[i]);
            for (int j = 0; j < 3; ++j) s = add(s, mul(fi, mul(a[3 * i + j], v[j])));
        }
        return s;
    }

    // Tangent line coefficients u_j = sum_i P_i^e a_ij.
    Vec tangent(const Mat& a, const Vec& v) const {
        Vec u{0, 0, 0};
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) u[j] = add(u[j], mul(frob(v[i]), a[3 * i + j]));
        return u;
    }

    std::vector<Vec> plane() const {
        std::vector<Vec> pts;
        for (std::uint32_t y = 0; y < q_; ++y)
            for (std::uint32_t z = 0; z < q_; ++z) pts.push_back({1, y, z});
        for (std::uint32_t z = 0; z < q_; ++z) pts.push_back({0, 1, z});
        pts.push_back({0, 0, 1});
        return pts;
    }

    std::vector<Vec> points(const Mat& a) const {
        std::vector<Vec> out;
        for (const auto& v : plane())
            if (eval(a, v) == 0) out.push_back(v);
        return out;
    }

    std::uint64_t count(const Mat& a) const {
        std::uint64_t n = 0;
        for (const auto& v : plane_) n += eval(a, v) == 0;
        return n;
    }

    Mat star(const Mat& a) const {
        Mat s;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s[3 * i + j] = frob(a[3 * j + i]);
        return s;
    }

    Mat matmul(const Mat& x, const Mat& y) const {
        Mat r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r[3 * i + j] = add(r[3 * i + j], mul(x[3 * i + k], y[3 * k + j]));
        return r;
    }

    bool proportional(const Mat& x, const Mat& y) const {
        for (std::uint32_t s = 1; s < q_; ++s) {
            bool all = true;
            for (int i = 0; i < 9 && all; ++i) all = mul(s, x[i]) == y[i];
            if (all) return true;
        }
        return false;
    }

    void cache_plane() { plane_ = plane(); }

private:
    std::uint32_t q_, e_;
    std::vector<std::uint32_t> add_, mul_, neg_;
    std::vector<Vec> plane_;
};

Ref::Mat codes(const Mat3& m) {
    Ref::Mat r;
    for (int i = 0; i < 9; ++i) r[i] = m.a[i].code;
    return r;
}

Ref::Vec codes(const ProjPoint& p) { return {p.c[0].code, p.c[1].code, p.c[2].code}; }

FieldPtr field(std::uint32_t p, std::uint32_t m) { return FieldCtx::build(p, m); }

std::string fmt_m(const std::map<std::uint64_t, std::uint64_t>& h) {
    std::string s;
    for (const auto& [m, c] : h) s += " " + std::to_string(m) + ":" + std::to_string(c);
    return s;
}

std::string first_violation(const SweepReport& r) {
    if (r.violations.empty()) return "";
    const auto& v = r.violations.front();
    return "; first violation #" + std::to_string(v.index) + " " + v.check + " [" + v.matrix + "] " + v.detail;
}

SweepPlan plan(FieldPtr f, std::uint64_t samples) {
    SweepPlan p;
    p.field = f->spec();
    p.samples = samples;
    p.workers = workers();
    return p;
}

// 1. q = 4, all 4^9 tuples.
bool criterion_exhaustive(std::string& detail) {
    const FieldPtr f = field(2, 1);
    SweepPlan p = plan(f, 0);
    p.exhaustive = true;
    const SweepReport rep = sweep_congruence(p);

    Ref ref(*f);
    ref.cache_plane();
    std::map<std::uint64_t, std::uint64_t> by_n;
    std::uint64_t invertible = 0, bad = 0;
    Ref::Mat a;
    for (std::uint32_t t = 0; t < (1u << 18); ++t) {
        for (int i = 0; i < 9; ++i) a[i] = (t >> (2 * i)) & 3;
        if (ref.det(a) == 0) continue;
        ++invertible;
        const std::uint64_t n = ref.count(a);
        bad += n % 2 != 1;
        ++by_n[n];
    }
    std::map<std::uint64_t, std::uint64_t> lib_by_n;
    for (const auto& [key, c] : rep.histogram) lib_by_n[key.first] += c;
    bool agree = invertible == 3 * rep.totals.curves;
    for (const auto& [n, c] : by_n) agree = agree && lib_by_n[n] * 3 == c;

    detail = std::to_string(invertible) + " invertible tuples (reference), " + std::to_string(rep.totals.curves) +
             " curves up to scalar (library), " + std::to_string(bad + rep.violations.size()) +
             " violations, N distributions " + (agree ? "agree" : "differ") + first_violation(rep);
    return rep.ok() && bad == 0 && agree && invertible == 181440;
}

// 2. Sampled congruence and m bounds.
bool criterion_sampled(std::string& detail) {
    bool ok = true;
    for (auto [p, m, samples] : {std::tuple{3u, 1u, 1000000ull}, {2u, 2u, 100000ull}, {5u, 1u, 100000ull}}) {
        const FieldPtr f = field(p, m);
        const SweepReport rep = sweep_corollary_bounds(plan(f, samples));
        const std::uint64_t q = f->q(), e = f->sqrt_q();

        // Reference recount of the first draws of the same stream.
        Ref ref(*f);
        ref.cache_plane();
        std::uint64_t bad = 0;
        for (std::uint64_t i = 0; i < 500; ++i) {
            const std::uint64_t n = ref.count(codes(sample_matrix(*f, rep.seed, i)));
            const std::uint64_t mm = (n - 1) / e;
            bad += n % e != 1 || !(mm == q || mm <= e + 2);
        }
        for (const auto& [mm, c] : rep.m_histogram()) bad += !(mm == q || mm <= e + 2);
        ok = ok && rep.ok() && bad == 0 && rep.totals.curves == samples;
        detail += "q=" + std::to_string(q) + ": " + std::to_string(rep.totals.curves) + " curves, " +
                  std::to_string(rep.violations.size() + bad) + " violations, m" + fmt_m(rep.m_histogram()) +
                  first_violation(rep) + "; ";
    }
    return ok;
}

// 3. Class census.
bool criterion_table(std::string& detail) {
    bool ok = true;
    for (auto [p, m] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
        const FieldPtr f = field(p, m);
        const Table1Report rep = class_census(f, workers());
        const std::uint64_t e = f->sqrt_q(), q = f->q();
        const std::array<std::uint64_t, 3> classes{1, e, (e + 1) * (e - 2) / 2};
        const std::array<std::uint64_t, 3> pts{e * e * e + 1, e + 1, q + 1};
        const std::array<std::uint64_t, 3> infl{e * e * e + 1, e + 1, 2};

        // Reference: type by norm of omega, N by direct count.
        Ref ref(*f);
        std::array<std::set<std::uint64_t>, 3> ref_counts;
        for (std::uint32_t w = 1; w < q; ++w) {
            const Ref::Mat a{0, 1, 0, w, 0, 0, 0, 0, 1};
            const int type = w == 1 ? 0 : ref.norm(w) == 1 ? 1 : 2;
            ref_counts[type].insert(ref.points(a).size());
        }
        for (int t = 0; t < 3; ++t) {
            const auto& row = rep.rows[t];
            ok = ok && row.classes == classes[t] && row.uniform;
            if (classes[t] > 0) {
                ok = ok && row.n_points == pts[t] && row.n_inflexions == infl[t];
                ok = ok && ref_counts[t] == std::set<std::uint64_t>{pts[t]};
            }
        }
        ok = ok && rep.violations.empty();
        detail += "q=" + std::to_string(q) + " (";
        for (const auto& row : rep.rows) {
            detail += row.type + ":" + std::to_string(row.classes);
            if (row.n_points) detail += "/" + std::to_string(*row.n_points) + "/" + std::to_string(*row.n_inflexions);
            detail += row.type == "C" ? "" : " ";
        }
        detail += ") ";
    }
    return ok;
}

// 4. Hermitian counts.
bool criterion_hermitian(std::string& detail) {
    const FieldPtr f4 = field(2, 1), f9 = field(3, 1);
    const Ref r4(*f4), r9(*f9);
    const Ref::Mat id{1, 0, 0, 0, 1, 0, 0, 0, 1};
    const std::uint64_t n4 = Curve(f4, Mat3::identity()).point_count();
    const std::uint64_t n9 = Curve(f9, Mat3::identity()).point_count();
    const Elem w = f4->generator();
    const std::uint64_t nw = Curve(f4, Mat3::diag(f4->one(), w, f4->mul(w, w))).point_count();
    const Ref::Mat dw{1, 0, 0, 0, w.code, 0, 0, 0, r4.mul(w.code, w.code)};
    const bool ok = n4 == 9 && n9 == 28 && nw == 9 && r4.points(id).size() == 9 && r9.points(id).size() == 28 &&
                    r4.points(dw).size() == 9;
    detail = "N_4(I)=" + std::to_string(n4) + " N_9(I)=" + std::to_string(n9) + " N_4(diag[1,w,w^2])=" +
             std::to_string(nw) + " (reference " + std::to_string(r4.points(id).size()) + "/" +
             std::to_string(r9.points(id).size()) + "/" + std::to_string(r4.points(dw).size()) + ")";
    return ok;
}

// 5. Solvers against full scans.
bool criterion_solvers(std::string& detail) {
    bool ok = true;
    std::uint64_t equations = 0, bad = 0;
    for (auto [p, m] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
        const FieldPtr fp = field(p, m);
        const FieldCtx& f = *fp;
        const Ref ref(f);
        const std::uint32_t q = ref.q(), e = ref.e();
        auto same = [](const std::vector<Elem>& got, const std::vector<Elem>& want) { return got == want; };
        for (std::uint32_t b = 0; b < q; ++b) {
            const auto as = oracle::scan_roots(q, [&](std::uint32_t x) { return ref.sub(ref.sub(ref.frob(x), x), b); });
            bad += !same(solve_artin_schreier(f, Elem{b}), as) || as.size() != (ref.trace(b) == 0 ? e : 0u);
            ++equations;
            if (b != 0) {
                const auto ku = oracle::scan_roots(q, [&](std::uint32_t x) { return x == 0 ? 1 : ref.sub(ref.pow(x, e - 1), b); });
                bad += !same(solve_kummer(f, Elem{b}), ku) || ku.size() != (ref.norm(b) == 1 ? e - 1 : 0u);
                ++equations;
            }
        }
        for (std::uint32_t a = 1; a < q; ++a) {
            std::uint64_t solvable = 0;
            for (std::uint32_t b = 0; b < q; ++b) {
                const auto sl = oracle::scan_roots(
                    q, [&](std::uint32_t x) { return ref.add(ref.add(ref.frob(x), ref.mul(a, x)), b); });
                bad += !same(solve_semilinear(f, Elem{a}, Elem{b}), sl);
                if (ref.norm(a) != 1) bad += sl.size() != 1;
                else bad += sl.size() != 0 && sl.size() != e;
                solvable += !sl.empty();
                ++equations;
            }
            // Nm alpha = 1: the image of X^e + alpha X is a line over F_sqrt(q).
            bad += solvable != (ref.norm(a) == 1 ? e : q);
        }
    }
    ok = bad == 0;
    detail = std::to_string(equations) + " equations over q=4,9,16,25, " + std::to_string(bad) + " mismatches";
    return ok;
}

// 6. Theorem equivalence against PGL(3, 4) search.
bool criterion_equivalence(std::string& detail) {
    const FieldPtr f = field(2, 1);
    const Ref ref(*f);
    std::vector<Curve> curves;
    for (std::uint32_t w = 1; w < 4; ++w) curves.push_back(omega_curve(f, Elem{w}));
    for (std::uint32_t h = 2; h < 4; ++h) curves.emplace_back(f, Mat3::diag(f->one(), f->one(), Elem{h}));

    auto witness_ok = [&](const Curve& a, const Curve& b, const PglElem& t) {
        const Ref::Mat tm = codes(t.mat());
        const Ref::Mat lhs = ref.matmul(ref.matmul(ref.star(tm), codes(a.matrix().mat())), tm);
        return ref.det(tm) != 0 && ref.proportional(lhs, codes(b.matrix().mat()));
    };
    std::uint64_t pairs = 0, eq = 0, bad = 0;
    for (const auto& a : curves) {
        for (const auto& b : curves) {
            const auto th = equivalent(a, b, EquivMethod::theorem);
            const auto bf = equivalent(a, b, EquivMethod::bruteforce, pgl_order(4));
            ++pairs;
            eq += th.equivalent;
            bad += th.equivalent != bf.equivalent;
            if (th.equivalent) bad += !th.witness || !witness_ok(a, b, *th.witness);
            if (bf.equivalent) bad += !bf.witness || !witness_ok(a, b, *bf.witness);
        }
    }
    detail = std::to_string(pairs) + " pairs, " + std::to_string(eq) + " equivalent, " + std::to_string(pgl_order(4)) +
             " transforms searched per pair, " + std::to_string(bad) + " disagreements";
    return bad == 0 && pairs == 25;
}

// 7. Mirror, dual and multiplicity properties.
bool criterion_properties(std::string& detail) {
    const FieldPtr f = field(3, 1);
    SweepPlan p = plan(f, 10000);
    p.extension_samples = 100;
    const SweepReport rep = sweep_properties(p);

    const Ref ref(*f);
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < 300; ++i) {
        const Ref::Mat a = codes(sample_matrix(*f, rep.seed, i));
        const auto pts = ref.points(a);
        bad += pts != ref.points(ref.star(a));
        // Along P + tQ on the tangent, f = t^e (c2 + c3 t) with c2 = Q^e A P, c3 = f(Q).
        const Curve c(f, sample_matrix(*f, rep.seed, i));
        for (const auto& pt : pts) {
            const auto u = ref.tangent(a, pt);
            Ref::Vec qv{};
            for (const auto& cand : ref.plane()) {
                const std::uint32_t d =
                    ref.add(ref.add(ref.mul(u[0], cand[0]), ref.mul(u[1], cand[1])), ref.mul(u[2], cand[2]));
                if (d == 0 && cand != pt) {
                    qv = cand;
                    break;
                }
            }
            std::uint32_t c2 = 0;
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j) c2 = ref.add(c2, ref.mul(ref.frob(qv[k]), ref.mul(a[3 * k + j], pt[j])));
            const std::uint32_t want = c2 != 0 ? ref.e() : ref.e() + 1;
            const ProjPoint P = make_point(*f, Elem{pt[0]}, Elem{pt[1]}, Elem{pt[2]});
            bad += c2 == 0 && ref.eval(a, qv) == 0;
            bad += c.tangent_divisor(P).multiplicity != want;
            bad += c.is_inflexion(P) != (want == ref.e() + 1);
        }
    }
    detail = std::to_string(rep.totals.curves) + " curves over F_9 (" + std::to_string(rep.totals.extension_curves) +
             " also over F_81), " + std::to_string(rep.totals.points) + " points, " +
             std::to_string(rep.violations.size() + bad) + " violations" + first_violation(rep);
    return rep.ok() && bad == 0 && rep.totals.curves == 10000 && rep.totals.extension_curves == 100;
}

// 8. Residual point on type C curves.
bool criterion_residual(std::string& detail) {
    bool ok = true;
    for (auto p : {3u, 5u}) {
        const FieldPtr f = field(p, 1);
        const Ref ref(*f);
        std::uint64_t curves = 0, points = 0, bad = 0;
        for (std::uint32_t w = 1; w < ref.q(); ++w) {
            if (ref.norm(w) == 1) continue;
            ++curves;
            const Curve c = omega_curve(f, Elem{w});
            const Ref::Mat a{0, 1, 0, w, 0, 0, 0, 0, 1};
            for (const auto& pt : ref.points(a)) {
                if (pt[2] == 0) continue;
                ++points;
                const ProjPoint P = make_point(*f, Elem{pt[0]}, Elem{pt[1]}, Elem{pt[2]});
                const Ref::Vec r = codes(c.tangent_divisor(P).residual);
                const auto u = ref.tangent(a, pt);
                const std::uint32_t on_line =
                    ref.add(ref.add(ref.mul(u[0], r[0]), ref.mul(u[1], r[1])), ref.mul(u[2], r[2]));
                const std::uint32_t x0 = ref.mul(pt[0], ref.inv(pt[2]));
                const bool good = r[2] != 0 && ref.eval(a, r) == 0 && on_line == 0 &&
                                  ref.mul(r[0], ref.inv(r[2])) == ref.mul(x0, ref.inv(w));
                bad += !good;
            }
        }
        ok = ok && bad == 0 && curves > 0;
        detail += "q=" + std::to_string(ref.q()) + ": " + std::to_string(curves) + " curves, " + std::to_string(points) +
                  " affine points, " + std::to_string(bad) + " failures; ";
    }
    return ok;
}

// 9. Byte-identical reports across runs and worker counts.
bool criterion_determinism(std::string& detail) {
    bool ok = true;
    std::uint64_t runs = 0;
    using Sweep = std::function<SweepReport(const SweepPlan&)>;
    const std::vector<std::pair<std::string, Sweep>> sweeps{
        {"congruence", sweep_congruence}, {"bounds", sweep_corollary_bounds}, {"props", sweep_properties}};
    for (const auto& [name, fn] : sweeps) {
        SweepPlan p = plan(field(3, 1), 3000);
        p.extension_samples = 10;
        std::string json_ref, csv_ref;
        for (int rep = 0; rep < 2; ++rep) {
            for (unsigned w : {1u, 4u, 8u}) {
                p.workers = w;
                const SweepReport r = fn(p);
                const std::string json = to_json(r), csv = to_csv(r);
                if (json_ref.empty()) {
                    json_ref = json;
                    csv_ref = csv;
                }
                ok = ok && json == json_ref && csv == csv_ref;
                ++runs;
            }
        }
    }
    SweepPlan ex = plan(field(2, 1), 0);
    ex.exhaustive = true;
    std::string ex_ref;
    for (unsigned w : {1u, 4u, 8u}) {
        ex.workers = w;
        const std::string json = to_json(sweep_congruence(ex));
        if (ex_ref.empty()) ex_ref = json;
        ok = ok && json == ex_ref;
        ++runs;
    }
    detail = std::to_string(runs) + " runs (3 sampled sweeps at q=9 twice with 1/4/8 workers, exhaustive q=4 with 1/4/8)";
    return ok;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, bool (*)(std::string&)>> criteria{
        {"1 congruence, exhaustive q=4", criterion_exhaustive},
        {"2 congruence and m bounds, sampled q=9,16,25", criterion_sampled},
        {"3 class census q=4,9,16,25", criterion_table},
        {"4 Hermitian point counts", criterion_hermitian},
        {"5 equation solvers vs full scan", criterion_solvers},
        {"6 equivalence vs PGL(3,4) search", criterion_equivalence},
        {"7 mirror/dual/multiplicity properties", criterion_properties},
        {"8 residual point on type C curves", criterion_residual},
        {"9 determinism across workers", criterion_determinism},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail += std::string("exception: ") + e.what();
        }
        while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !ok;
        char t[32];
        std::snprintf(t, sizeof t, "%.1fs", secs);
        std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << " [" << t << "]" << std::endl;
    }
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << criteria.size() - failures << "/" << criteria.size()
              << std::endl;
    return failures ? 1 : 0;
}
