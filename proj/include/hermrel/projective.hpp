#pragma once

// Points and lines of P^2(F_q), 3x3 matrices, and PGL(3, F_q) representatives.
//
// Triples are scalar-normalized so the first nonzero coordinate is 1, and
// matrices so the first nonzero entry in row-major order is 1; equality of
// projective objects is then plain equality of codes.

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hermrel/field.hpp"

namespace hermrel {

template <class Tag>
struct Proj3 {
    std::array<Elem, 3> c{};

    // Canonical enumeration order: (1,*,*), then (0,1,*), then (0,0,1), each
    // block ascending by codes. Only meaningful on normalized triples.
    friend constexpr std::strong_ordering operator<=>(const Proj3& a, const Proj3& b) {
        const auto rank = [](const Proj3& v) { return v.c[0].code != 0 ? 0 : v.c[1].code != 0 ? 1 : 2; };
        if (auto r = rank(a) <=> rank(b); r != 0) return r;
        if (auto r = a.c[1] <=> b.c[1]; r != 0) return r;
        return a.c[2] <=> b.c[2];
    }
    friend constexpr bool operator==(const Proj3& a, const Proj3& b) = default;
};

struct PointTag {};
struct LineTag {};
using ProjPoint = Proj3<PointTag>;
using ProjLine = Proj3<LineTag>;  // dual coordinates (u, v, w): ux + vy + wz = 0

struct Mat3 {
    std::array<Elem, 9> a{};

    Elem operator()(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }
    Elem& operator()(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }

    static Mat3 identity();
    static Mat3 diag(Elem x, Elem y, Elem z);

    friend bool operator==(const Mat3&, const Mat3&) = default;
};

template <class Tag>
Proj3<Tag> normalize(const FieldCtx& f, Proj3<Tag> v) {
    for (int i = 0; i < 3; ++i) {
        if (v.c[i].code != 0) {
            const Elem s = f.inv(v.c[i]);
            for (auto& x : v.c) x = f.mul(x, s);
            return v;
        }
    }
    throw Error(Errc::InvalidArgument, "zero vector has no projective class");
}

ProjPoint make_point(const FieldCtx& f, Elem x, Elem y, Elem z);
ProjLine make_line(const FieldCtx& f, Elem u, Elem v, Elem w);

Elem dot(const FieldCtx& f, const std::array<Elem, 3>& u, const std::array<Elem, 3>& v);
bool incident(const FieldCtx& f, const ProjPoint& pt, const ProjLine& line);

Mat3 mat_mul(const FieldCtx& f, const Mat3& x, const Mat3& y);
Mat3 transpose(const Mat3& x);
Mat3 scale(const FieldCtx& f, const Mat3& x, Elem s);
Elem det(const FieldCtx& f, const Mat3& x);
// Throws SingularMatrix.
Mat3 inverse(const FieldCtx& f, const Mat3& x);
// Entry-wise sqrt(q)-th power.
Mat3 frobenius(const FieldCtx& f, const Mat3& x);
// A* = transpose of the entry-wise sqrt(q)-th power.
Mat3 star(const FieldCtx& f, const Mat3& x);
// First nonzero entry (row-major) scaled to 1; the zero matrix is returned unchanged.
Mat3 normalize(const FieldCtx& f, const Mat3& x);
// M * (x, y, z)^t as a point.
ProjPoint apply(const FieldCtx& f, const Mat3& x, const ProjPoint& pt);
// Row vector times matrix, (u, v, w) M, as a line.
ProjLine apply_dual(const FieldCtx& f, const ProjLine& line, const Mat3& x);

// Canonical representative of an element of PGL(3, F_q).
class PglElem {
public:
    // Throws SingularMatrix when det = 0.
    static PglElem make(const FieldCtx& f, const Mat3& x);
    static PglElem identity() { return PglElem(Mat3::identity()); }

    const Mat3& mat() const noexcept { return m_; }
    Elem operator()(int r, int c) const { return m_(r, c); }

    friend bool operator==(const PglElem&, const PglElem&) = default;
    friend auto operator<=>(const PglElem& x, const PglElem& y) { return x.m_.a <=> y.m_.a; }

private:
    explicit PglElem(const Mat3& x) : m_(x) {}
    Mat3 m_;
};

struct PglHash {
    std::size_t operator()(const PglElem& x) const noexcept;
};

PglElem pgl_mul(const FieldCtx& f, const PglElem& x, const PglElem& y);
PglElem pgl_inverse(const FieldCtx& f, const PglElem& x);

// Canonical representative of T* A T. Throws SingularT for singular T.
PglElem congruence_transform(const FieldCtx& f, const PglElem& a, const Mat3& t);
PglElem congruence_transform(const FieldCtx& f, const PglElem& a, const PglElem& t);

std::uint64_t plane_point_count(const FieldCtx& f);
std::vector<ProjPoint> enumerate_plane_points(const FieldCtx& f);

// Calls fn on every point of P^2(F_q) in canonical order.
template <class Fn>
void for_each_plane_point(const FieldCtx& f, Fn&& fn) {
    const std::uint32_t q = f.q();
    for (std::uint32_t y = 0; y < q; ++y)
        for (std::uint32_t z = 0; z < q; ++z) fn(ProjPoint{{Elem{1}, Elem{y}, Elem{z}}});
    for (std::uint32_t z = 0; z < q; ++z) fn(ProjPoint{{Elem{0}, Elem{1}, Elem{z}}});
    fn(ProjPoint{{Elem{0}, Elem{0}, Elem{1}}});
}

// Points of a line in canonical order (q + 1 of them).
std::vector<ProjPoint> line_points(const FieldCtx& f, const ProjLine& line);
// First point of the line in canonical order that differs from `avoid`.
ProjPoint first_line_point_except(const FieldCtx& f, const ProjLine& line, const ProjPoint& avoid);

// Throws EqualPoints.
ProjLine line_through(const FieldCtx& f, const ProjPoint& p, const ProjPoint& q);
ProjPoint intersection(const FieldCtx& f, const ProjLine& l1, const ProjLine& l2);

// T with L1 -> {y=0}, L2 -> {x=0}, L3 -> {z=0}: in the coordinates
// x' = T^-1 x the three lines become the coordinate triangle. Throws
// ConcurrentLines when the lines do not form a triangle.
PglElem frame_to_triangle(const FieldCtx& f, const ProjLine& l1, const ProjLine& l2, const ProjLine& l3);

// |PGL(3, F_q)| = (q^3 - 1)(q^3 - q)(q^3 - q^2) / (q - 1).
std::uint64_t pgl_order(std::uint64_t q);

// Visits every element of PGL(3, F_q) once, in a fixed order.
// The visitor returns false to stop early.
void for_each_pgl_element(const FieldCtx& f, const std::function<bool(const PglElem&)>& fn);

// Text forms: 9 (resp. 3) decimal codes, whitespace separated.
Mat3 parse_matrix(const FieldCtx& f, std::string_view text);
ProjPoint parse_point(const FieldCtx& f, std::string_view text);
std::string format_matrix(const Mat3& x);
std::string format_point(const ProjPoint& pt);
std::string format_line(const ProjLine& line);

}  // namespace hermrel
