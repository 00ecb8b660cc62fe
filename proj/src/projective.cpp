#include "hermrel/projective.hpp"

#include <charconv>
#include <sstream>

namespace hermrel {

Mat3 Mat3::identity() { return diag(Elem{1}, Elem{1}, Elem{1}); }

Mat3 Mat3::diag(Elem x, Elem y, Elem z) {
    Mat3 m;
    m(0, 0) = x;
    m(1, 1) = y;
    m(2, 2) = z;
    return m;
}

ProjPoint make_point(const FieldCtx& f, Elem x, Elem y, Elem z) {
    return normalize(f, ProjPoint{{x, y, z}});
}

ProjLine make_line(const FieldCtx& f, Elem u, Elem v, Elem w) {
    return normalize(f, ProjLine{{u, v, w}});
}

Elem dot(const FieldCtx& f, const std::array<Elem, 3>& u, const std::array<Elem, 3>& v) {
    return f.add(f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1])), f.mul(u[2], v[2]));
}

bool incident(const FieldCtx& f, const ProjPoint& pt, const ProjLine& line) {
    return dot(f, pt.c, line.c).code == 0;
}

Mat3 mat_mul(const FieldCtx& f, const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Elem s{0};
            for (int k = 0; k < 3; ++k) s = f.add(s, f.mul(x(i, k), y(k, j)));
            r(i, j) = s;
        }
    }
    return r;
}

Mat3 transpose(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x(j, i);
    return r;
}

Mat3 scale(const FieldCtx& f, const Mat3& x, Elem s) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = f.mul(x.a[i], s);
    return r;
}

Elem det(const FieldCtx& f, const Mat3& x) {
    auto minor = [&](int r1, int c1, int r2, int c2) {
        return f.sub(f.mul(x(r1, c1), x(r2, c2)), f.mul(x(r1, c2), x(r2, c1)));
    };
    Elem d = f.mul(x(0, 0), minor(1, 1, 2, 2));
    d = f.sub(d, f.mul(x(0, 1), minor(1, 0, 2, 2)));
    return f.add(d, f.mul(x(0, 2), minor(1, 0, 2, 1)));
}

Mat3 inverse(const FieldCtx& f, const Mat3& x) {
    const Elem d = det(f, x);
    if (d.code == 0) throw Error(Errc::SingularMatrix, "matrix is not invertible: " + format_matrix(x));
    const Elem di = f.inv(d);
    Mat3 adj;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            // Cofactor of (j, i).
            const int r1 = (j + 1) % 3, r2 = (j + 2) % 3;
            const int c1 = (i + 1) % 3, c2 = (i + 2) % 3;
            adj(i, j) = f.sub(f.mul(x(r1, c1), x(r2, c2)), f.mul(x(r1, c2), x(r2, c1)));
        }
    }
    return scale(f, adj, di);
}

Mat3 frobenius(const FieldCtx& f, const Mat3& x) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = f.frob(x.a[i]);
    return r;
}

Mat3 star(const FieldCtx& f, const Mat3& x) { return transpose(frobenius(f, x)); }

Mat3 normalize(const FieldCtx& f, const Mat3& x) {
    for (const Elem e : x.a) {
        if (e.code != 0) return e.code == 1 ? x : scale(f, x, f.inv(e));
    }
    return x;
}

ProjPoint apply(const FieldCtx& f, const Mat3& x, const ProjPoint& pt) {
    ProjPoint r;
    for (int i = 0; i < 3; ++i) r.c[i] = dot(f, {x(i, 0), x(i, 1), x(i, 2)}, pt.c);
    return normalize(f, r);
}

ProjLine apply_dual(const FieldCtx& f, const ProjLine& line, const Mat3& x) {
    ProjLine r;
    for (int j = 0; j < 3; ++j) r.c[j] = dot(f, line.c, {x(0, j), x(1, j), x(2, j)});
    return normalize(f, r);
}

PglElem PglElem::make(const FieldCtx& f, const Mat3& x) {
    if (det(f, x).code == 0) throw Error(Errc::SingularMatrix, "det = 0 for " + format_matrix(x));
    return PglElem(normalize(f, x));
}

std::size_t PglHash::operator()(const PglElem& x) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const Elem e : x.mat().a) {
        h ^= e.code;
        h *= 0x100000001b3ull;
    }
    return h;
}

PglElem pgl_mul(const FieldCtx& f, const PglElem& x, const PglElem& y) {
    return PglElem::make(f, mat_mul(f, x.mat(), y.mat()));
}

PglElem pgl_inverse(const FieldCtx& f, const PglElem& x) { return PglElem::make(f, inverse(f, x.mat())); }

PglElem congruence_transform(const FieldCtx& f, const PglElem& a, const Mat3& t) {
    if (det(f, t).code == 0) throw Error(Errc::SingularT, "transform is singular: " + format_matrix(t));
    return PglElem::make(f, mat_mul(f, mat_mul(f, star(f, t), a.mat()), t));
}

PglElem congruence_transform(const FieldCtx& f, const PglElem& a, const PglElem& t) {
    return congruence_transform(f, a, t.mat());
}

std::uint64_t plane_point_count(const FieldCtx& f) {
    const std::uint64_t q = f.q();
    return q * q + q + 1;
}

std::vector<ProjPoint> enumerate_plane_points(const FieldCtx& f) {
    std::vector<ProjPoint> pts;
    pts.reserve(plane_point_count(f));
    for_each_plane_point(f, [&](const ProjPoint& pt) { pts.push_back(pt); });
    return pts;
}

namespace {

// Canonical-order walk over the points of a line; fn returns false to stop.
template <class Fn>
void walk_line(const FieldCtx& f, const ProjLine& line, Fn&& fn) {
    const Elem u = line.c[0], v = line.c[1], w = line.c[2];
    const std::uint32_t q = f.q();
    // Block (1, y, z): u + v y + w z = 0.
    if (w.code != 0) {
        const Elem wn = f.neg(f.inv(w));
        for (std::uint32_t y = 0; y < q; ++y) {
            const Elem z = f.mul(f.add(u, f.mul(v, Elem{y})), wn);
            if (!fn(ProjPoint{{Elem{1}, Elem{y}, z}})) return;
        }
    } else if (v.code != 0) {
        const Elem y = f.neg(f.div(u, v));
        for (std::uint32_t z = 0; z < q; ++z) {
            if (!fn(ProjPoint{{Elem{1}, y, Elem{z}}})) return;
        }
    }
    // Block (0, 1, z): v + w z = 0.
    if (w.code != 0) {
        if (!fn(ProjPoint{{Elem{0}, Elem{1}, f.neg(f.div(v, w))}})) return;
    } else if (v.code == 0) {
        for (std::uint32_t z = 0; z < q; ++z) {
            if (!fn(ProjPoint{{Elem{0}, Elem{1}, Elem{z}}})) return;
        }
    }
    if (w.code == 0) fn(ProjPoint{{Elem{0}, Elem{0}, Elem{1}}});
}

}  // namespace

std::vector<ProjPoint> line_points(const FieldCtx& f, const ProjLine& line) {
    std::vector<ProjPoint> pts;
    pts.reserve(f.q() + 1);
    walk_line(f, line, [&](const ProjPoint& pt) {
        pts.push_back(pt);
        return true;
    });
    return pts;
}

ProjPoint first_line_point_except(const FieldCtx& f, const ProjLine& line, const ProjPoint& avoid) {
    ProjPoint found;
    bool ok = false;
    walk_line(f, line, [&](const ProjPoint& pt) {
        if (pt == avoid) return true;
        found = pt;
        ok = true;
        return false;
    });
    if (!ok) throw Error(Errc::InvalidArgument, "line has no second point");
    return found;
}

namespace {

std::array<Elem, 3> cross(const FieldCtx& f, const std::array<Elem, 3>& a, const std::array<Elem, 3>& b) {
    return {f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
            f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
            f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))};
}

bool is_zero(const std::array<Elem, 3>& v) { return v[0].code == 0 && v[1].code == 0 && v[2].code == 0; }

}  // namespace

ProjLine line_through(const FieldCtx& f, const ProjPoint& p, const ProjPoint& q) {
    const auto c = cross(f, p.c, q.c);
    if (is_zero(c)) throw Error(Errc::EqualPoints, format_point(p) + " = " + format_point(q));
    return normalize(f, ProjLine{c});
}

ProjPoint intersection(const FieldCtx& f, const ProjLine& l1, const ProjLine& l2) {
    const auto c = cross(f, l1.c, l2.c);
    if (is_zero(c)) throw Error(Errc::InvalidArgument, "lines coincide: " + format_line(l1));
    return normalize(f, ProjPoint{c});
}

PglElem frame_to_triangle(const FieldCtx& f, const ProjLine& l1, const ProjLine& l2, const ProjLine& l3) {
    Mat3 rows;
    for (int j = 0; j < 3; ++j) {
        rows(0, j) = l2.c[j];
        rows(1, j) = l1.c[j];
        rows(2, j) = l3.c[j];
    }
    if (det(f, rows).code == 0) {
        throw Error(Errc::ConcurrentLines,
                    format_line(l1) + ", " + format_line(l2) + ", " + format_line(l3) + " do not form a triangle");
    }
    return PglElem::make(f, inverse(f, rows));
}

std::uint64_t pgl_order(std::uint64_t q) {
    const std::uint64_t q3 = q * q * q;
    return (q3 - 1) * (q3 - q) / (q - 1) * (q3 - q * q);
}

void for_each_pgl_element(const FieldCtx& f, const std::function<bool(const PglElem&)>& fn) {
    const std::uint32_t q = f.q();
    // The leading 1 sits in the first row, otherwise the matrix is singular.
    for (int lead = 0; lead < 3; ++lead) {
        const int free = 8 - lead;
        Mat3 x;
        x.a[static_cast<std::size_t>(lead)] = Elem{1};
        std::vector<std::uint32_t> digit(static_cast<std::size_t>(free), 0);
        while (true) {
            for (int i = 0; i < free; ++i) x.a[static_cast<std::size_t>(lead + 1 + i)] = Elem{digit[static_cast<std::size_t>(i)]};
            if (det(f, x).code != 0) {
                if (!fn(PglElem::make(f, x))) return;
            }
            int i = free - 1;
            while (i >= 0 && ++digit[static_cast<std::size_t>(i)] == q) digit[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
        }
    }
}

namespace {

std::vector<Elem> parse_codes(const FieldCtx& f, std::string_view text, std::size_t count, const char* what) {
    std::vector<Elem> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == ',' || text[i] == '\r')) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, v);
        if (j == i || ec != std::errc{} || ptr != text.data() + j) {
            throw Error(Errc::ParseError, std::string("bad ") + what + " '" + std::string(text) + "'");
        }
        if (v >= f.q()) {
            throw Error(Errc::ParseError, "element code " + std::to_string(v) + " out of range for q = " + std::to_string(f.q()));
        }
        out.push_back(Elem{static_cast<std::uint32_t>(v)});
        i = j;
    }
    if (out.size() != count) {
        throw Error(Errc::ParseError, std::string(what) + " needs " + std::to_string(count) + " codes, got " + std::to_string(out.size()));
    }
    return out;
}

}  // namespace

Mat3 parse_matrix(const FieldCtx& f, std::string_view text) {
    const auto codes = parse_codes(f, text, 9, "matrix");
    Mat3 x;
    std::copy(codes.begin(), codes.end(), x.a.begin());
    return x;
}

ProjPoint parse_point(const FieldCtx& f, std::string_view text) {
    const auto codes = parse_codes(f, text, 3, "point");
    return make_point(f, codes[0], codes[1], codes[2]);
}

std::string format_matrix(const Mat3& x) {
    std::ostringstream os;
    for (std::size_t i = 0; i < 9; ++i) os << (i ? " " : "") << x.a[i].code;
    return os.str();
}

std::string format_point(const ProjPoint& pt) {
    return std::to_string(pt.c[0].code) + " " + std::to_string(pt.c[1].code) + " " + std::to_string(pt.c[2].code);
}

std::string format_line(const ProjLine& line) {
    return std::to_string(line.c[0].code) + " " + std::to_string(line.c[1].code) + " " + std::to_string(line.c[2].code);
}

}  // namespace hermrel
