#include "lfi/vcbm/geometry.hpp"

#include <algorithm>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "lfi/core/error.hpp"

namespace lfi::vcbm {
namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

template <class T>
int sign(const T& v) {
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Fixed-width integers wide enough for the in-circle determinant of
// coordinates whose binary exponents span at most kMaxSpan bits.
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<
    1024, 1024, boost::multiprecision::signed_magnitude, boost::multiprecision::unchecked, void>>;
constexpr int kMaxSpan = 190;

// Writes v[i] * 2^-E as integers for a shared E; false if the spread of
// exponents is too large for Wide.
template <std::size_t N>
bool to_integers(const std::array<double, N>& v, std::array<Wide, N>& out) {
    int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
    std::array<int, N> exps{};
    for (std::size_t i = 0; i < N; ++i) {
        if (v[i] == 0.0) continue;
        int e = 0;
        std::frexp(v[i], &e);
        exps[i] = e - 53;  // v = m 2^(e-53), |m| < 2^53
        lo = std::min(lo, exps[i]);
        hi = std::max(hi, e);
    }
    if (lo == std::numeric_limits<int>::max()) lo = hi = 0;
    if (hi - lo > kMaxSpan) return false;
    for (std::size_t i = 0; i < N; ++i) {
        if (v[i] == 0.0) {
            out[i] = 0;
            continue;
        }
        const auto m = static_cast<std::int64_t>(std::ldexp(v[i], -exps[i]));
        out[i] = Wide(m) << static_cast<unsigned>(exps[i] - lo);
    }
    return true;
}

int orientation_exact(Vec2 a, Vec2 b, Vec2 c) {
    std::array<Wide, 6> w;
    if (to_integers(std::array<double, 6>{a.x, a.y, b.x, b.y, c.x, c.y}, w)) {
        const Wide det = (w[0] - w[4]) * (w[3] - w[5]) - (w[1] - w[5]) * (w[2] - w[4]);
        return det.sign();
    }
    const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    const Rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    return sign(det);
}

template <class T>
int in_circle_sign(const T& ax, const T& ay, const T& bx, const T& by, const T& cx, const T& cy, const T& dx,
                   const T& dy) {
    const T adx = ax - dx, ady = ay - dy;
    const T bdx = bx - dx, bdy = by - dy;
    const T cdx = cx - dx, cdy = cy - dy;
    const T alift = adx * adx + ady * ady;
    const T blift = bdx * bdx + bdy * bdy;
    const T clift = cdx * cdx + cdy * cdy;
    const T det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
    return sign(det);
}

int in_circle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    std::array<Wide, 8> w;
    if (to_integers(std::array<double, 8>{a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y}, w))
        return in_circle_sign(w[0], w[1], w[2], w[3], w[4], w[5], w[6], w[7]);
    return in_circle_sign(Rational(a.x), Rational(a.y), Rational(b.x), Rational(b.y), Rational(c.x), Rational(c.y),
                          Rational(d.x), Rational(d.y));
}

// Position on a 2^16 x 2^16 Hilbert curve.
std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
    constexpr std::uint32_t n = 1u << 16;
    std::uint64_t d = 0;
    for (std::uint32_t s = n / 2; s > 0; s /= 2) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

}  // namespace

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    const double bound = kOrientBound * (std::abs(left) + std::abs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orientation_exact(a, b, c);
}

int in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = kInCircleBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return in_circle_exact(a, b, c, d);
}

int in_circle_perturbed(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int s = in_circle(a, b, c, d);
    if (s != 0) return s;
    // Leading terms of the perturbed determinant, largest point first.
    const Vec2* pts[4] = {&a, &b, &c, &d};
    std::sort(pts, pts + 4, [](const Vec2* p, const Vec2* q) { return p->x < q->x || (p->x == q->x && p->y < q->y); });
    for (int i = 3; i > 0; --i) {
        if (pts[i] == &d) return -1;
        int o = 0;
        if (pts[i] == &c) o = orientation(a, b, d);
        if (pts[i] == &b) o = orientation(a, d, c);
        if (pts[i] == &a) o = orientation(d, b, c);
        if (o != 0) return o;
    }
    return -1;
}

Adjacency Adjacency::from_edges(std::size_t n_vertices, std::vector<std::pair<int, int>> edges) {
    std::vector<std::uint32_t> count(n_vertices + 1, 0);
    for (auto [i, j] : edges) {
        if (i == j || i < 0 || j < 0 || static_cast<std::size_t>(i) >= n_vertices ||
            static_cast<std::size_t>(j) >= n_vertices)
            throw GeometryError("invalid edge in adjacency");
        ++count[static_cast<std::size_t>(i) + 1];
        ++count[static_cast<std::size_t>(j) + 1];
    }
    for (std::size_t i = 0; i < n_vertices; ++i) count[i + 1] += count[i];
    std::vector<int> slots(count.back());
    std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
    for (auto [i, j] : edges) {
        slots[fill[static_cast<std::size_t>(i)]++] = j;
        slots[fill[static_cast<std::size_t>(j)]++] = i;
    }

    Adjacency adj;
    adj.offsets_.assign(n_vertices + 1, 0);
    adj.targets_.reserve(slots.size());
    for (std::size_t i = 0; i < n_vertices; ++i) {
        const auto first = slots.begin() + count[i];
        const auto last = slots.begin() + count[i + 1];
        std::sort(first, last);
        const auto end = std::unique(first, last);
        adj.targets_.insert(adj.targets_.end(), first, end);
        adj.offsets_[i + 1] = static_cast<std::uint32_t>(adj.targets_.size());
    }
    return adj;
}

bool Adjacency::adjacent(int i, int j) const {
    const auto nb = neighbours(static_cast<std::size_t>(i));
    return std::binary_search(nb.begin(), nb.end(), j);
}

bool Adjacency::symmetric() const {
    for (std::size_t i = 0; i < size(); ++i)
        for (int j : neighbours(i))
            if (!adjacent(j, static_cast<int>(i))) return false;
    return true;
}

bool DelaunayTriangulator::in_conflict(const Tri& t, Vec2 p) const {
    const auto& v = t.v;
    int inf = -1;
    for (int k = 0; k < 3; ++k)
        if (v[k] < 0) inf = k;
    if (inf < 0) return in_circle_perturbed(pts_[v[0]], pts_[v[1]], pts_[v[2]], p) > 0;

    // Ghost (x, y, inf): its "circle" is the open half-plane beyond hull edge
    // x -> y plus the open segment xy itself.
    const Vec2 x = pts_[v[(inf + 1) % 3]];
    const Vec2 y = pts_[v[(inf + 2) % 3]];
    const int o = orientation(x, y, p);
    if (o != 0) return o > 0;
    return dot(p - x, y - x) > 0.0 && dot(p - y, x - y) > 0.0;
}

int DelaunayTriangulator::locate(Vec2 p, int hint) const {
    int t = hint;
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t guard = 0; guard < limit; ++guard) {
        const Tri& tri = tris_[static_cast<std::size_t>(t)];
        int next = -1;
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = pts_[tri.v[(k + 1) % 3]];
            const Vec2 b = pts_[tri.v[(k + 2) % 3]];
            if (orientation(a, b, p) < 0) {
                next = tri.n[k];
                break;
            }
        }
        if (next < 0) return t;
        const Tri& nt = tris_[static_cast<std::size_t>(next)];
        if (nt.v[0] < 0 || nt.v[1] < 0 || nt.v[2] < 0) return next;
        t = next;
    }
    // Walk did not terminate; scan.
    for (std::size_t i = 0; i < tris_.size(); ++i) {
        const Tri& tri = tris_[i];
        if (tri.v[0] == -2) continue;
        if (in_conflict(tri, p)) return static_cast<int>(i);
    }
    throw GeometryError("point location failed");
}

int DelaunayTriangulator::new_tri(const std::array<int, 3>& v) {
    int idx;
    if (!free_.empty()) {
        idx = free_.back();
        free_.pop_back();
    } else {
        idx = static_cast<int>(tris_.size());
        tris_.emplace_back();
        stamp_.push_back(0);
    }
    tris_[static_cast<std::size_t>(idx)] = Tri{v, {-1, -1, -1}};
    return idx;
}

int DelaunayTriangulator::insert(int point, int hint) {
    const Vec2 p = pts_[static_cast<std::size_t>(point)];
    const int start = locate(p, hint);
    {
        const Tri& t = tris_[static_cast<std::size_t>(start)];
        for (int v : t.v)
            if (v >= 0 && pts_[static_cast<std::size_t>(v)] == p)
                throw GeometryError("coincident points " + std::to_string(v) + " and " + std::to_string(point));
    }

    if (epoch_ > std::numeric_limits<std::uint32_t>::max() - 4) {
        std::fill(stamp_.begin(), stamp_.end(), 0u);
        epoch_ = 0;
    }
    const std::uint32_t in_cavity = ++epoch_;
    const std::uint32_t rejected = ++epoch_;
    cavity_.clear();
    boundary_.clear();
    cavity_.push_back(start);
    stamp_[static_cast<std::size_t>(start)] = in_cavity;
    for (std::size_t i = 0; i < cavity_.size(); ++i) {
        const int t = cavity_[i];
        for (int k = 0; k < 3; ++k) {
            const int nb = tris_[static_cast<std::size_t>(t)].n[k];
            auto& st = stamp_[static_cast<std::size_t>(nb)];
            if (st == in_cavity) continue;
            if (st != rejected) {
                if (in_conflict(tris_[static_cast<std::size_t>(nb)], p)) {
                    st = in_cavity;
                    cavity_.push_back(nb);
                    continue;
                }
                st = rejected;
            }
            boundary_.emplace_back(t, k);
        }
    }

    created_.clear();
    for (auto [t, k] : boundary_) {
        const Tri old = tris_[static_cast<std::size_t>(t)];
        const int u = old.v[(k + 1) % 3];
        const int w = old.v[(k + 2) % 3];
        const int outside = old.n[k];
        const int c = new_tri({u, w, point});
        tris_[static_cast<std::size_t>(c)].n[2] = outside;
        auto& on = tris_[static_cast<std::size_t>(outside)].n;
        for (int j = 0; j < 3; ++j)
            if (on[j] == t) on[j] = c;
        created_.push_back(c);
    }
    for (int c : created_) {
        Tri& tc = tris_[static_cast<std::size_t>(c)];
        const int u = tc.v[0];
        const int w = tc.v[1];
        for (int o : created_) {
            const Tri& to = tris_[static_cast<std::size_t>(o)];
            if (to.v[0] == w) tc.n[0] = o;
            if (to.v[1] == u) tc.n[1] = o;
        }
    }
    for (int t : cavity_) {
        tris_[static_cast<std::size_t>(t)].v[0] = -2;
        free_.push_back(t);
    }

    for (int c : created_) {
        const auto& v = tris_[static_cast<std::size_t>(c)].v;
        if (v[0] >= 0 && v[1] >= 0) return c;
    }
    return hint;
}

void DelaunayTriangulator::build(std::span<const Vec2> points, Triangulation& out) {
    const std::size_t n = points.size();
    if (n < 3) throw GeometryError("triangulation needs at least 3 points, got " + std::to_string(n));
    pts_ = points;

    double min_x = points[0].x, max_x = points[0].x, min_y = points[0].y, max_y = points[0].y;
    for (const Vec2& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("non-finite point coordinate");
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-300});
    const double scale = 65535.0 / span;
    keys_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        const auto hx = static_cast<std::uint32_t>((points[i].x - min_x) * scale);
        const auto hy = static_cast<std::uint32_t>((points[i].y - min_y) * scale);
        keys_.emplace_back(hilbert_index(hx, hy), static_cast<int>(i));
    }
    std::sort(keys_.begin(), keys_.end());
    order_.clear();
    for (const auto& k : keys_) order_.push_back(k.second);

    // Seed triangle: first point, next distinct point, first point off their line.
    const int a0 = order_[0];
    std::size_t i1 = 1;
    if (points[static_cast<std::size_t>(order_[i1])] == points[static_cast<std::size_t>(a0)])
        throw GeometryError("coincident points " + std::to_string(a0) + " and " + std::to_string(order_[i1]));
    int a1 = order_[i1];
    std::size_t i2 = i1 + 1;
    while (i2 < n && orientation(points[static_cast<std::size_t>(a0)], points[static_cast<std::size_t>(a1)],
                                 points[static_cast<std::size_t>(order_[i2])]) == 0)
        ++i2;
    if (i2 == n) throw GeometryError("all points are collinear");
    int a2 = order_[i2];
    if (orientation(points[static_cast<std::size_t>(a0)], points[static_cast<std::size_t>(a1)],
                    points[static_cast<std::size_t>(a2)]) < 0)
        std::swap(a1, a2);

    tris_.clear();
    free_.clear();
    stamp_.clear();
    epoch_ = 0;
    const int t0 = new_tri({a0, a1, a2});
    const int g0 = new_tri({a2, a1, -1});
    const int g1 = new_tri({a0, a2, -1});
    const int g2 = new_tri({a1, a0, -1});
    tris_[static_cast<std::size_t>(t0)].n = {g0, g1, g2};
    tris_[static_cast<std::size_t>(g0)].n = {g2, g1, t0};
    tris_[static_cast<std::size_t>(g1)].n = {g0, g2, t0};
    tris_[static_cast<std::size_t>(g2)].n = {g1, g0, t0};

    int hint = t0;
    for (std::size_t k = 1; k < n; ++k) {
        const int idx = order_[k];
        if (idx == a1 || idx == a2) continue;
        hint = insert(idx, hint);
    }

    n_vertices_ = n;
    emit(n, out);
}

void DelaunayTriangulator::emit(std::size_t n, Triangulation& out) {
    out.triangles.clear();
    edges_.clear();
    for (std::size_t i = 0; i < tris_.size(); ++i) {
        const Tri& t = tris_[i];
        if (t.v[0] < 0 || t.v[1] < 0 || t.v[2] < 0) continue;
        out.triangles.push_back({t.v[0], t.v[1], t.v[2]});
        for (int k = 0; k < 3; ++k) {
            // Each interior edge is seen from both sides; keep one.
            const int nb = t.n[(k + 2) % 3];
            const Tri& o = tris_[static_cast<std::size_t>(nb)];
            const bool ghost = o.v[0] < 0 || o.v[1] < 0 || o.v[2] < 0;
            if (ghost || static_cast<std::size_t>(nb) > i) edges_.emplace_back(t.v[k], t.v[(k + 1) % 3]);
        }
    }
    out.adjacency = Adjacency::from_edges(n, edges_);
    pts_ = {};
}

bool DelaunayTriangulator::mesh_valid() const {
    for (const Tri& t : tris_) {
        const auto& v = t.v;
        if (v[0] == -2) continue;
        int inf = -1;
        for (int k = 0; k < 3; ++k)
            if (v[k] < 0) inf = k;
        if (inf < 0) {
            if (orientation(pts_[v[0]], pts_[v[1]], pts_[v[2]]) <= 0) return false;
            continue;
        }
        // Ghost (x, y, inf) runs clockwise along the hull; the next ghost
        // (y, z, inf) is across the edge opposite x. The hull must turn right.
        const int x = v[(inf + 1) % 3];
        const int y = v[(inf + 2) % 3];
        const Tri& g = tris_[static_cast<std::size_t>(t.n[(inf + 1) % 3])];
        int z = -1;
        for (int k = 0; k < 3; ++k)
            if (g.v[k] >= 0 && g.v[k] != y) z = g.v[k];
        if (z < 0 || z == x) return false;
        if (orientation(pts_[x], pts_[y], pts_[z]) >= 0) return false;
    }
    return true;
}

void DelaunayTriangulator::flip_to_delaunay() {
    auto real = [&](int t) {
        const auto& v = tris_[static_cast<std::size_t>(t)].v;
        return v[0] >= 0 && v[1] >= 0 && v[2] >= 0;
    };
    // Flips edge k of triangle ti if illegal; returns whether it flipped.
    auto try_flip = [&](int ti, int k) {
        Tri& t = tris_[static_cast<std::size_t>(ti)];
        const int ui = t.n[k];
        if (!real(ti) || !real(ui)) return false;
        Tri& u = tris_[static_cast<std::size_t>(ui)];
        int ku = 0;
        while (u.n[ku] != ti) ++ku;
        const int a = t.v[k], b = t.v[(k + 1) % 3], c = t.v[(k + 2) % 3];
        const int d = u.v[ku];
        if (in_circle_perturbed(pts_[a], pts_[b], pts_[c], pts_[d]) <= 0) return false;

        const int n_ca = t.n[(k + 1) % 3], n_ab = t.n[(k + 2) % 3];
        const int n_bd = u.n[(ku + 1) % 3], n_dc = u.n[(ku + 2) % 3];
        t = Tri{{a, b, d}, {n_bd, ui, n_ab}};
        u = Tri{{a, d, c}, {n_dc, n_ca, ti}};
        for (int& m : tris_[static_cast<std::size_t>(n_bd)].n)
            if (m == ui) m = ti;
        for (int& m : tris_[static_cast<std::size_t>(n_ca)].n)
            if (m == ti) m = ui;
        flips_.emplace_back(ti, 0);
        flips_.emplace_back(ti, 2);
        flips_.emplace_back(ui, 0);
        flips_.emplace_back(ui, 1);
        return true;
    };

    flips_.clear();
    for (std::size_t i = 0; i < tris_.size(); ++i) {
        if (!real(static_cast<int>(i))) continue;
        for (int k = 0; k < 3; ++k) {
            if (static_cast<std::size_t>(tris_[i].n[k]) < i) continue;
            if (try_flip(static_cast<int>(i), k)) break;  // triangle i changed
        }
        while (!flips_.empty()) {
            const auto [ti, k] = flips_.back();
            flips_.pop_back();
            try_flip(ti, k);
        }
    }
}

bool DelaunayTriangulator::update(std::span<const Vec2> points, std::size_t n_moved, Triangulation& out) {
    const std::size_t n = points.size();
    if (n_vertices_ == 0 || n_moved != n_vertices_ || n_moved > n) {
        build(points, out);
        return false;
    }
    pts_ = points;
    for (std::size_t i = n_moved; i < n; ++i)
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) throw GeometryError("non-finite point coordinate");
    for (std::size_t i = 0; i < n_moved; ++i)
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) throw GeometryError("non-finite point coordinate");
    if (!mesh_valid()) {
        build(points, out);
        return false;
    }
    flip_to_delaunay();
    int hint = -1;
    for (std::size_t i = 0; i < tris_.size() && hint < 0; ++i)
        if (tris_[i].v[0] >= 0 && tris_[i].v[1] >= 0 && tris_[i].v[2] >= 0) hint = static_cast<int>(i);
    for (std::size_t i = n_moved; i < n; ++i) hint = insert(static_cast<int>(i), hint);
    n_vertices_ = n;
    emit(n, out);
    return true;
}

Triangulation DelaunayTriangulator::build(std::span<const Vec2> points) {
    Triangulation out;
    build(points, out);
    return out;
}

Triangulation triangulate(std::span<const Vec2> points) {
    DelaunayTriangulator t;
    return t.build(points);
}

std::vector<std::size_t> convex_hull(std::span<const Vec2> points) {
    const std::size_t n = points.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return points[a].x < points[b].x || (points[a].x == points[b].x && points[a].y < points[b].y);
    });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return points[a] == points[b]; }),
              idx.end());
    if (idx.size() < 3) return idx;

    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i : idx) {  // lower chain
        while (k >= 2 && orientation(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0) --k;
        hull[k++] = i;
    }
    for (std::size_t j = idx.size() - 1, lower = k + 1; j-- > 0;) {  // upper chain
        const std::size_t i = idx[j];
        while (k >= lower && orientation(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);
    return hull;
}

CaliperExtents caliper_extents(std::span<const Vec2> points) {
    CaliperExtents out;
    if (points.size() < 2) return out;
    const auto hull = convex_hull(points);
    if (hull.size() < 2) return out;

    std::size_t best_i = hull[0], best_j = hull[1];
    double best = -1.0;
    for (std::size_t a = 0; a < hull.size(); ++a)
        for (std::size_t b = a + 1; b < hull.size(); ++b) {
            const Vec2 d = points[hull[b]] - points[hull[a]];
            const double d2 = dot(d, d);
            if (d2 > best) {
                best = d2;
                best_i = hull[a];
                best_j = hull[b];
            }
        }
    out.length = std::sqrt(best);
    const Vec2 diff = points[best_j] - points[best_i];
    out.axis = (1.0 / out.length) * diff;
    const Vec2 normal{-out.axis.y, out.axis.x};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t h : hull) {
        const double s = dot(points[h], normal);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    out.width = hi - lo;
    return out;
}

}  // namespace lfi::vcbm
