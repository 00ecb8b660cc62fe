#include "hermrel/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

namespace hermrel {

std::string type_label(const CurveClass& cls) {
    struct {
        std::string operator()(const TypeA&) const { return "A"; }
        std::string operator()(const TypeB&) const { return "B"; }
        std::string operator()(const TypeC&) const { return "C"; }
        std::string operator()(const OutOfTheoremScope&) const { return "out_of_scope"; }
    } visitor;
    return std::visit(visitor, cls);
}

Mat3 omega_matrix(Elem omega) {
    Mat3 m;
    m(0, 1) = Elem{1};
    m(1, 0) = omega;
    m(2, 2) = Elem{1};
    return m;
}

Curve omega_curve(FieldPtr field, Elem omega) {
    if (omega.code == 0) throw Error(Errc::InvalidArgument, "omega must be nonzero");
    return Curve(std::move(field), omega_matrix(omega));
}

std::vector<ProjPoint> rational_inflexions(const Curve& c) {
    const HermitianForm form = c.form();
    std::vector<ProjPoint> out;
    for (const auto& pt : form.points()) {
        if (form.is_inflexion(pt)) out.push_back(pt);
    }
    return out;
}

NormalForm normalize_two_inflexions(const Curve& c, std::optional<std::pair<ProjPoint, ProjPoint>> pair) {
    const FieldCtx& f = c.field();
    const HermitianForm form = c.form();
    if (!pair) {
        const auto infl = rational_inflexions(c);
        if (infl.size() < 2) {
            throw Error(Errc::TooFewInflexions, std::to_string(infl.size()) + " rational inflexion(s)");
        }
        pair = std::make_pair(infl[0], infl[1]);
    }
    const auto [p, q] = *pair;
    if (p == q || !form.contains(p) || !form.contains(q) || !form.is_inflexion(p) || !form.is_inflexion(q)) {
        throw Error(Errc::TooFewInflexions, "the chosen pair is not two distinct rational inflexions");
    }

    const PglElem frame = frame_to_triangle(f, form.tangent_line(p), form.tangent_line(q), line_through(f, p, q));
    const PglElem b = congruence_transform(f, c.matrix(), frame);

    // Only a12, a21, a33 may survive.
    static constexpr std::array<int, 6> kZero{0, 2, 4, 5, 6, 7};
    for (int idx : kZero) {
        if (b.mat().a[static_cast<std::size_t>(idx)].code != 0) {
            throw Error(Errc::ShapeAssertionFailed, "transformed matrix " + format_matrix(b.mat()));
        }
    }
    const Elem a33 = b(2, 2);
    if (b(0, 1).code == 0 || b(1, 0).code == 0 || a33.code == 0) {
        throw Error(Errc::ShapeAssertionFailed, "degenerate transformed matrix " + format_matrix(b.mat()));
    }
    const Elem a12 = f.div(b(0, 1), a33);
    const Elem a21 = f.div(b(1, 0), a33);
    const Elem omega = f.mul(a21, f.inv(f.frob(a12)));

    // New y = a12 y.
    const Mat3 total = mat_mul(f, frame.mat(), Mat3::diag(Elem{1}, f.inv(a12), Elem{1}));
    NormalForm nf{omega, PglElem::make(f, total), p, q};
    if (congruence_transform(f, c.matrix(), nf.transform) != PglElem::make(f, omega_matrix(omega))) {
        throw Error(Errc::ShapeAssertionFailed, "composite transform does not reach the omega form");
    }
    return nf;
}

Elem eta_coset_representative(const FieldCtx& f, Elem eta) {
    Elem best{f.q()};
    for (Elem z : f.subfield_elements()) {
        if (z.code == 0) continue;
        best = std::min(best, f.mul(eta, z));
    }
    return best;
}

Elem omega_pair_representative(const FieldCtx& f, Elem omega) {
    return std::min(omega, f.inv(f.frob(omega)));
}

Diagonalization type_b_diagonalize(const FieldCtx& f, Elem omega) {
    if (omega.code == 0 || omega == f.one() || f.norm(omega) != f.one()) {
        throw Error(Errc::NotTypeB, "omega = " + std::to_string(omega.code) + " is not of type B");
    }
    const Elem beta = solve_rho(f, omega);
    const Elem eta = f.frob(beta);
    const PglElem rescale = PglElem::make(f, Mat3::diag(f.inv(beta), Elem{1}, Elem{1}));

    Mat3 symmetric;
    symmetric(0, 1) = Elem{1};
    symmetric(1, 0) = Elem{1};
    symmetric(2, 2) = eta;
    const PglElem a_omega = PglElem::make(f, omega_matrix(omega));
    if (congruence_transform(f, a_omega, rescale) != PglElem::make(f, symmetric)) {
        throw Error(Errc::ShapeAssertionFailed, "rescaling did not symmetrize C_omega");
    }

    const auto [u, alpha] = special_elements(f);
    Mat3 t0;
    t0(0, 0) = u;
    t0(0, 1) = f.mul(alpha, f.frob(u));
    t0(1, 0) = Elem{1};
    t0(1, 1) = f.neg(alpha);
    t0(2, 2) = Elem{1};
    const PglElem to_diag = PglElem::make(f, t0);
    const PglElem composite = pgl_mul(f, rescale, to_diag);

    const PglElem target = PglElem::make(f, Mat3::diag(Elem{1}, Elem{1}, eta));
    if (congruence_transform(f, a_omega, composite) != target) {
        throw Error(Errc::ShapeAssertionFailed, "diagonalization did not reach diag[1, 1, eta]");
    }
    return {beta, eta, rescale, to_diag, composite};
}

CurveClass class_of_omega(const FieldCtx& f, Elem omega) {
    if (omega.code == 0) throw Error(Errc::InvalidArgument, "omega must be nonzero");
    if (omega == f.one()) return TypeA{};
    if (f.norm(omega) == f.one()) return TypeB{eta_coset_representative(f, type_b_diagonalize(f, omega).eta)};
    return TypeC{omega_pair_representative(f, omega)};
}

Classification classify(const Curve& c) {
    const HermitianForm form = c.form();
    Classification out;
    std::vector<ProjPoint> infl;
    for (const auto& pt : form.points()) {
        ++out.n_points;
        if (form.is_inflexion(pt)) infl.push_back(pt);
    }
    out.n_inflexions = infl.size();
    if (infl.size() < 2) {
        out.cls = OutOfTheoremScope{infl.size()};
        return out;
    }
    out.normal = normalize_two_inflexions(c, std::make_pair(infl[0], infl[1]));
    out.cls = class_of_omega(c.field(), out.normal->omega);
    if (std::holds_alternative<TypeA>(out.cls) && !c.is_hermitian()) {
        throw Error(Errc::ShapeAssertionFailed, "type A curve is not Hermitian");
    }
    return out;
}

Elem canonical_invariant(const CurveClass& cls) {
    if (const auto* b = std::get_if<TypeB>(&cls)) return b->eta;
    if (const auto* c = std::get_if<TypeC>(&cls)) return c->omega;
    throw Error(Errc::NotApplicable, "type " + type_label(cls) + " has no invariant");
}

namespace {

// S with S* A_omega1 S = A_omega2 in PGL for two omegas of the same class.
PglElem link_omega_forms(const FieldCtx& f, Elem omega1, Elem omega2) {
    if (omega1 == omega2) return PglElem::identity();
    if (f.norm(omega1) == f.one()) {
        // Type B: through diag[1, 1, eta1] ~ diag[1, 1, eta2] with eta2 / eta1 = Nm(a).
        const auto d1 = type_b_diagonalize(f, omega1);
        const auto d2 = type_b_diagonalize(f, omega2);
        const Elem lambda = f.div(d2.eta, d1.eta);
        std::optional<Elem> a;
        for (std::uint32_t k = 1; k < f.q() && !a; ++k) {
            if (f.norm(Elem{k}) == lambda) a = Elem{k};
        }
        if (!a) throw Error(Errc::ShapeAssertionFailed, "eta cosets differ");
        const PglElem scale_z = PglElem::make(f, Mat3::diag(Elem{1}, Elem{1}, *a));
        return pgl_mul(f, pgl_mul(f, d1.composite, scale_z), pgl_inverse(f, d2.composite));
    }
    // Type C with omega2 = omega1^(-sqrt q): swap x and y.
    Mat3 s;
    s(0, 1) = f.inv(omega1);
    s(1, 0) = Elem{1};
    s(2, 2) = Elem{1};
    return PglElem::make(f, s);
}

}  // namespace

Equivalence equivalent(const Curve& c1, const Curve& c2, EquivMethod method, std::uint64_t budget) {
    const FieldCtx& f = c1.field();
    if (&c2.field() != &f) throw Error(Errc::InvalidArgument, "curves live over different field contexts");
    Equivalence out;

    if (method == EquivMethod::bruteforce) {
        const std::uint64_t order = pgl_order(f.q());
        if (order > budget) {
            throw Error(Errc::BudgetExceeded,
                        "|PGL(3, " + std::to_string(f.q()) + ")| = " + std::to_string(order) + " exceeds budget " + std::to_string(budget));
        }
        for_each_pgl_element(f, [&](const PglElem& t) {
            if (congruence_transform(f, c1.matrix(), t) == c2.matrix()) {
                out.equivalent = true;
                out.witness = t;
                return false;
            }
            return true;
        });
        return out;
    }

    const Classification k1 = classify(c1);
    const Classification k2 = classify(c2);
    if (!k1.normal || !k2.normal) {
        throw Error(Errc::MethodUnavailable, "theorem method needs two rational inflexions on both curves");
    }
    if (k1.cls != k2.cls) return out;

    const PglElem link = link_omega_forms(f, k1.normal->omega, k2.normal->omega);
    const PglElem w = pgl_mul(f, pgl_mul(f, k1.normal->transform, link), pgl_inverse(f, k2.normal->transform));
    if (congruence_transform(f, c1.matrix(), w) != c2.matrix()) {
        throw Error(Errc::ShapeAssertionFailed, "composed witness failed verification");
    }
    out.equivalent = true;
    out.witness = w;
    return out;
}

std::unordered_set<PglElem, PglHash> pgl_orbit(const FieldCtx& f, const PglElem& a, std::uint64_t budget) {
    const std::uint64_t order = pgl_order(f.q());
    if (order > budget) throw Error(Errc::BudgetExceeded, "PGL(3, " + std::to_string(f.q()) + ") too large");
    std::unordered_set<PglElem, PglHash> orbit;
    for_each_pgl_element(f, [&](const PglElem& t) {
        orbit.insert(congruence_transform(f, a, t));
        return true;
    });
    return orbit;
}

Table1Report class_census(FieldPtr field, unsigned workers) {
    const FieldCtx& f = *field;
    const std::uint32_t n = f.q() - 1;
    std::vector<Classification> found(n);
    std::vector<CurveClass> direct(n);

    auto run = [&](std::uint32_t lo, std::uint32_t hi) {
        for (std::uint32_t i = lo; i < hi; ++i) {
            const Elem omega{i + 1};
            found[i] = classify(omega_curve(field, omega));
            direct[i] = class_of_omega(f, omega);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, n));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(run, n * w / workers, n * (w + 1) / workers);
    }
    for (auto& t : pool) t.join();

    Table1Report rep;
    rep.q = f.q();
    const std::array<std::string, 3> labels{"A", "B", "C"};
    std::array<std::set<std::uint32_t>, 3> invariants;
    std::array<std::set<std::pair<std::uint64_t, std::size_t>>, 3> shapes;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto& k = found[i];
        if (k.cls != direct[i]) {
            rep.violations.push_back("omega " + std::to_string(i + 1) + ": normalized class " + type_label(k.cls) +
                                     " differs from omega class " + type_label(direct[i]));
        }
        const std::string label = type_label(k.cls);
        const auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            rep.violations.push_back("omega " + std::to_string(i + 1) + " has fewer than two rational inflexions");
            continue;
        }
        const auto t = static_cast<std::size_t>(it - labels.begin());
        invariants[t].insert(t == 0 ? 0 : canonical_invariant(k.cls).code);
        shapes[t].insert({k.n_points, k.n_inflexions});
    }
    for (std::size_t t = 0; t < 3; ++t) {
        Table1Row& row = rep.rows[t];
        row.type = labels[t];
        row.classes = invariants[t].size();
        row.uniform = shapes[t].size() <= 1;
        if (shapes[t].size() == 1) {
            row.n_points = shapes[t].begin()->first;
            row.n_inflexions = shapes[t].begin()->second;
        }
        if (!row.uniform) rep.violations.push_back("type " + labels[t] + " mixes point/inflexion counts");
    }
    if (rep.rows[2].classes == 0) {
        rep.notes.push_back("type C is empty: (sqrt q + 1)(sqrt q - 2)/2 = 0 at q = " + std::to_string(f.q()));
    }
    return rep;
}

}  // namespace hermrel
