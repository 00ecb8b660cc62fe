#pragma once

// Hermitian-relative curves C_A : (x^e, y^e, z^e) A (x, y, z)^t = 0 with
// e = sqrt(q) and det A != 0.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hermrel/field.hpp"
#include "hermrel/projective.hpp"

namespace hermrel {

// F_{q^s} together with an embedding of F_q. The image of the polynomial
// basis indeterminate t of F_q is the smallest-code root of the base modulus
// in the big field. Only s = 2 over base fields with q <= 49 is supported.
class FieldExtension {
public:
    static constexpr std::uint32_t kMaxBaseQ = 49;

    // Throws EmbeddingUnavailable.
    static FieldExtension build(FieldPtr base, std::uint32_t degree = 2);

    const FieldCtx& base() const noexcept { return *base_; }
    const FieldCtx& big() const noexcept { return *big_; }
    const FieldPtr& big_ptr() const noexcept { return big_; }
    std::uint32_t degree() const noexcept { return degree_; }
    Elem root() const noexcept { return root_; }

    Elem embed(Elem a) const { return (*embed_)[a.code]; }
    Mat3 embed(const Mat3& x) const;
    ProjPoint embed(const ProjPoint& pt) const;
    // x -> x^sqrt(q_base) on the big field.
    std::span<const Elem> base_frobenius() const noexcept { return *pow_; }

private:
    FieldPtr base_;
    FieldPtr big_;
    std::uint32_t degree_ = 0;
    Elem root_;
    std::shared_ptr<const std::vector<Elem>> embed_;
    std::shared_ptr<const std::vector<Elem>> pow_;
};

// Intersection of a curve with its tangent at P: multiplicity * P + residual.
struct TangentDivisor {
    ProjPoint base;
    std::uint32_t multiplicity = 0;  // e or e + 1
    ProjPoint residual;              // equals base exactly when multiplicity is e + 1
    ProjPoint second;                // the point Q0 spanning the tangent with base
    // Restriction of the form to s*P + t*Q0:
    // c0 s^(e+1) + c1 s^e t + c2 s t^e + c3 t^(e+1).
    std::array<Elem, 4> coeffs{};
};

// The defining form evaluated over some field containing its coefficients.
// The exponent stays the curve's sqrt(q) when evaluated over an extension.
class HermitianForm {
public:
    HermitianForm(FieldPtr field, const Mat3& coeffs, std::span<const Elem> power_table, std::uint32_t exponent,
                  std::shared_ptr<const void> keepalive = {});

    const FieldCtx& field() const noexcept { return *field_; }
    const Mat3& coeffs() const noexcept { return a_; }
    std::uint32_t exponent() const noexcept { return exponent_; }
    Elem power(Elem x) const noexcept { return pow_[x.code]; }

    Elem evaluate(const ProjPoint& pt) const noexcept { return bilinear(pt, pt); }
    // left^(e) A right^t.
    Elem bilinear(const ProjPoint& left, const ProjPoint& right) const noexcept;
    bool contains(const ProjPoint& pt) const noexcept { return evaluate(pt).code == 0; }

    // Dual coordinates (x0^e, y0^e, z0^e) A. Throws PointNotOnCurve.
    ProjLine tangent_line(const ProjPoint& pt) const;
    // Throws PointNotOnCurve; `second` must be another point of the tangent.
    TangentDivisor tangent_divisor(const ProjPoint& pt, std::optional<ProjPoint> second = std::nullopt) const;
    bool is_inflexion(const ProjPoint& pt) const;

    std::vector<ProjPoint> points() const;
    std::uint64_t count_points() const;

private:
    FieldPtr field_;
    Mat3 a_;
    std::span<const Elem> pow_;
    std::uint32_t exponent_;
    std::shared_ptr<const void> keepalive_;
};

class Curve {
public:
    // Throws SingularMatrix.
    Curve(FieldPtr field, const Mat3& a);
    Curve(FieldPtr field, const PglElem& a);

    const FieldCtx& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    const PglElem& matrix() const noexcept { return a_; }
    std::uint32_t sqrt_q() const noexcept { return field_->sqrt_q(); }

    HermitianForm form() const;
    HermitianForm form_over(const FieldExtension& ext) const;

    Elem evaluate(const ProjPoint& pt) const { return form().evaluate(pt); }
    bool contains(const ProjPoint& pt) const { return form().contains(pt); }
    std::vector<ProjPoint> rational_points() const { return form().points(); }
    std::uint64_t point_count() const { return form().count_points(); }
    ProjLine tangent_line(const ProjPoint& pt) const { return form().tangent_line(pt); }
    TangentDivisor tangent_divisor(const ProjPoint& pt, std::optional<ProjPoint> second = std::nullopt) const {
        return form().tangent_divisor(pt, second);
    }
    bool is_inflexion(const ProjPoint& pt) const { return form().is_inflexion(pt); }

    // C_{A*}.
    Curve mirror() const;
    // C_{tA^-1}, living in the dual plane.
    Curve dual() const;
    // Curve with matrix T* A T; its points are T^-1 applied to ours.
    Curve transform(const PglElem& t) const;
    bool is_hermitian() const;
    // rho A with (rho A)* = rho A exactly. Throws NotHermitian.
    Mat3 hermitian_lift() const;
    // m with N_q = m sqrt(q) + 1 (integer division; congruence is checked by callers).
    std::int64_t m_invariant() const;

    friend bool operator==(const Curve& x, const Curve& y) { return x.a_ == y.a_; }

private:
    FieldPtr field_;
    PglElem a_;
};

}  // namespace hermrel
