#include "hermrel/curve.hpp"

namespace hermrel {

FieldExtension FieldExtension::build(FieldPtr base, std::uint32_t degree) {
    if (degree != 2) {
        throw Error(Errc::EmbeddingUnavailable, "only quadratic extensions are supported");
    }
    if (base->q() > kMaxBaseQ) {
        throw Error(Errc::EmbeddingUnavailable, "extension evaluation is limited to base q <= " + std::to_string(kMaxBaseQ));
    }
    FieldExtension ext;
    ext.base_ = base;
    ext.degree_ = degree;
    ext.big_ = FieldCtx::build(base->p(), base->m() * degree);
    const FieldCtx& big = *ext.big_;

    // Smallest-code root of the base modulus in the big field.
    const PolyFp& modulus = base->modulus();
    bool found = false;
    for (std::uint32_t c = 0; c < big.q() && !found; ++c) {
        Elem acc{0};
        for (auto it = modulus.rbegin(); it != modulus.rend(); ++it) {
            acc = big.add(big.mul(acc, Elem{c}), big.from_int(*it));
        }
        if (acc.code == 0) {
            ext.root_ = Elem{c};
            found = true;
        }
    }
    if (!found) throw Error(Errc::EmbeddingUnavailable, "base modulus has no root in the extension");

    auto embed = std::make_shared<std::vector<Elem>>(base->q());
    for (std::uint32_t c = 0; c < base->q(); ++c) {
        const auto d = base->digits(Elem{c});
        Elem acc{0};
        for (auto it = d.rbegin(); it != d.rend(); ++it) acc = big.add(big.mul(acc, ext.root_), big.from_int(*it));
        (*embed)[c] = acc;
    }
    ext.embed_ = std::move(embed);

    auto pow = std::make_shared<std::vector<Elem>>(big.q());
    for (std::uint32_t c = 0; c < big.q(); ++c) (*pow)[c] = big.pow(Elem{c}, base->sqrt_q());
    ext.pow_ = std::move(pow);
    return ext;
}

Mat3 FieldExtension::embed(const Mat3& x) const {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = embed(x.a[i]);
    return r;
}

ProjPoint FieldExtension::embed(const ProjPoint& pt) const {
    return ProjPoint{{embed(pt.c[0]), embed(pt.c[1]), embed(pt.c[2])}};
}

HermitianForm::HermitianForm(FieldPtr field, const Mat3& coeffs, std::span<const Elem> power_table,
                             std::uint32_t exponent, std::shared_ptr<const void> keepalive)
    : field_(std::move(field)), a_(coeffs), pow_(power_table), exponent_(exponent), keepalive_(std::move(keepalive)) {}

Elem HermitianForm::bilinear(const ProjPoint& left, const ProjPoint& right) const noexcept {
    const FieldCtx& f = *field_;
    Elem total{0};
    for (int i = 0; i < 3; ++i) {
        const Elem li = pow_[left.c[i].code];
        if (li.code == 0) continue;
        Elem row{0};
        for (int j = 0; j < 3; ++j) row = f.add(row, f.mul(a_(i, j), right.c[j]));
        total = f.add(total, f.mul(li, row));
    }
    return total;
}

ProjLine HermitianForm::tangent_line(const ProjPoint& pt) const {
    if (!contains(pt)) throw Error(Errc::PointNotOnCurve, format_point(pt));
    const FieldCtx& f = *field_;
    ProjLine line;
    for (int j = 0; j < 3; ++j) {
        Elem s{0};
        for (int i = 0; i < 3; ++i) s = f.add(s, f.mul(pow_[pt.c[i].code], a_(i, j)));
        line.c[j] = s;
    }
    return normalize(f, line);
}

TangentDivisor HermitianForm::tangent_divisor(const ProjPoint& pt, std::optional<ProjPoint> second) const {
    const FieldCtx& f = *field_;
    const ProjLine line = tangent_line(pt);
    ProjPoint q0;
    if (second) {
        q0 = normalize(f, *second);
        if (q0 == pt || !incident(f, q0, line)) {
            throw Error(Errc::InvalidArgument, "second point must be another point of the tangent line");
        }
    } else {
        q0 = first_line_point_except(f, line, pt);
    }

    TangentDivisor d;
    d.base = pt;
    d.second = q0;
    d.coeffs = {bilinear(pt, pt), bilinear(pt, q0), bilinear(q0, pt), bilinear(q0, q0)};
    const Elem c2 = d.coeffs[2], c3 = d.coeffs[3];
    if (c2.code == 0) {
        if (c3.code == 0) throw Error(Errc::InvalidArgument, "tangent line is a component of the curve");
        d.multiplicity = exponent_ + 1;
        d.residual = pt;
    } else {
        // Residual zero of c2 s + c3 t, i.e. (s, t) = (c3, -c2).
        ProjPoint r;
        for (int i = 0; i < 3; ++i) r.c[i] = f.sub(f.mul(c3, pt.c[i]), f.mul(c2, q0.c[i]));
        d.multiplicity = exponent_;
        d.residual = normalize(f, r);
    }
    return d;
}

bool HermitianForm::is_inflexion(const ProjPoint& pt) const {
    return tangent_divisor(pt).multiplicity == exponent_ + 1;
}

std::vector<ProjPoint> HermitianForm::points() const {
    std::vector<ProjPoint> pts;
    for_each_plane_point(*field_, [&](const ProjPoint& pt) {
        if (contains(pt)) pts.push_back(pt);
    });
    return pts;
}

std::uint64_t HermitianForm::count_points() const {
    const FieldCtx& f = *field_;
    const std::uint32_t q = f.q();
    std::uint64_t n = 0;
    // (1, y, z): f = a11 + a12 y + a13 z + y^e (a21 + a22 y + a23 z) + z^e (a31 + a32 y + a33 z).
    for (std::uint32_t y = 0; y < q; ++y) {
        const Elem ye = pow_[y];
        const Elem r0 = f.add(a_(0, 0), f.mul(a_(0, 1), Elem{y}));
        const Elem r1 = f.add(a_(1, 0), f.mul(a_(1, 1), Elem{y}));
        const Elem r2 = f.add(a_(2, 0), f.mul(a_(2, 1), Elem{y}));
        const Elem base = f.add(r0, f.mul(ye, r1));
        const Elem lin = f.add(a_(0, 2), f.mul(ye, a_(1, 2)));
        for (std::uint32_t z = 0; z < q; ++z) {
            const Elem ze = pow_[z];
            Elem v = f.add(base, f.mul(lin, Elem{z}));
            v = f.add(v, f.mul(ze, f.add(r2, f.mul(a_(2, 2), Elem{z}))));
            n += v.code == 0;
        }
    }
    for (std::uint32_t z = 0; z < q; ++z) n += contains(ProjPoint{{Elem{0}, Elem{1}, Elem{z}}});
    n += contains(ProjPoint{{Elem{0}, Elem{0}, Elem{1}}});
    return n;
}

Curve::Curve(FieldPtr field, const Mat3& a) : field_(std::move(field)), a_(PglElem::make(*field_, a)) {}

Curve::Curve(FieldPtr field, const PglElem& a) : field_(std::move(field)), a_(a) {}

HermitianForm Curve::form() const {
    return HermitianForm(field_, a_.mat(), field_->frobenius_table(), field_->sqrt_q());
}

HermitianForm Curve::form_over(const FieldExtension& ext) const {
    if (&ext.base() != field_.get()) {
        throw Error(Errc::EmbeddingUnavailable, "extension was built over a different base field");
    }
    auto keep = std::make_shared<FieldExtension>(ext);
    const auto table = keep->base_frobenius();
    return HermitianForm(ext.big_ptr(), ext.embed(a_.mat()), table, field_->sqrt_q(), keep);
}

Curve Curve::mirror() const { return Curve(field_, star(*field_, a_.mat())); }

Curve Curve::dual() const { return Curve(field_, transpose(inverse(*field_, a_.mat()))); }

Curve Curve::transform(const PglElem& t) const { return Curve(field_, congruence_transform(*field_, a_, t)); }

bool Curve::is_hermitian() const { return PglElem::make(*field_, star(*field_, a_.mat())) == a_; }

Mat3 Curve::hermitian_lift() const {
    const FieldCtx& f = *field_;
    const Mat3& a = a_.mat();
    const Mat3 s = star(f, a);
    // A* = lambda A in GL; read lambda off the first nonzero entry of A.
    std::size_t k = 0;
    while (a.a[k].code == 0) ++k;
    const Elem lambda = f.div(s.a[k], a.a[k]);
    if (lambda.code == 0 || scale(f, a, lambda) != s) {
        throw Error(Errc::NotHermitian, "A* is not a scalar multiple of A");
    }
    const Elem rho = solve_rho(f, lambda);
    const Mat3 lifted = scale(f, a, rho);
    if (star(f, lifted) != lifted) throw Error(Errc::NotHermitian, "lift failed");
    return lifted;
}

std::int64_t Curve::m_invariant() const {
    return static_cast<std::int64_t>((point_count() - 1) / field_->sqrt_q());
}

}  // namespace hermrel
