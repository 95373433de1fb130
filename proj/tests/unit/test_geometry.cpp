#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "lfi/core/error.hpp"
#include "lfi/core/rng.hpp"
#include "lfi/vcbm/geometry.hpp"
#include "oracles.hpp"

using namespace lfi;
using namespace lfi::vcbm;

namespace {

std::vector<Vec2> random_points(std::size_t n, Stream& rng, double scale = 1.0) {
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {scale * rng.uniform(), scale * rng.uniform()};
    return pts;
}

std::set<std::pair<int, int>> edge_set(const Adjacency& adj) {
    std::set<std::pair<int, int>> out;
    for (std::size_t i = 0; i < adj.size(); ++i)
        for (int j : adj.neighbours(i))
            if (static_cast<int>(i) < j) out.insert({static_cast<int>(i), j});
    return out;
}

// No point strictly inside any triangle's circumcircle (exact predicate).
bool empty_circumcircles(std::span<const Vec2> pts, const Triangulation& t) {
    for (const auto& tri : t.triangles) {
        if (orientation(pts[tri[0]], pts[tri[1]], pts[tri[2]]) <= 0) return false;
        for (std::size_t m = 0; m < pts.size(); ++m) {
            const int mi = static_cast<int>(m);
            if (mi == tri[0] || mi == tri[1] || mi == tri[2]) continue;
            if (in_circle(pts[tri[0]], pts[tri[1]], pts[tri[2]], pts[m]) > 0) return false;
        }
    }
    return true;
}

std::vector<Vec2> hex_lattice(int rings) {
    std::vector<Vec2> pts;
    for (int q = -rings; q <= rings; ++q)
        for (int r = -rings; r <= rings; ++r) {
            if (std::abs(q + r) > rings) continue;
            pts.push_back({q + 0.5 * r, r * std::sqrt(3.0) / 2.0});
        }
    return pts;
}

}  // namespace

TEST_CASE("orientation is exact near degeneracy") {
    CHECK(orientation({0, 0}, {1, 0}, {0, 1}) == 1);
    CHECK(orientation({0, 0}, {0, 1}, {1, 0}) == -1);
    CHECK(orientation({0, 0}, {1, 1}, {2, 2}) == 0);
    // Points on y = x within one ulp of the line.
    const double x = 0.5;
    CHECK(orientation({12, 12}, {24, 24}, {x, x}) == 0);
    CHECK(orientation({12, 12}, {24, 24}, {x, std::nextafter(x, 1.0)}) == 1);
    CHECK(orientation({12, 12}, {24, 24}, {x, std::nextafter(x, 0.0)}) == -1);
    // Large coordinates where the naive determinant cancels.
    const double big = 1e17;
    CHECK(orientation({big, big}, {big + 16, big + 16}, {big + 32, big + 32}) == 0);
}

TEST_CASE("in_circle is exact and the perturbation breaks every tie") {
    const Vec2 a{0, 0}, b{1, 0}, c{1, 1}, d{0, 1};
    CHECK(in_circle(a, b, c, {0.5, 0.5}) == 1);
    CHECK(in_circle(a, b, c, {3, 3}) == -1);
    CHECK(in_circle(a, b, c, d) == 0);
    const int s = in_circle_perturbed(a, b, c, d);
    CHECK(s != 0);
    // The perturbed answer is a function of the point set: rotating the
    // triangle's vertices does not change it.
    CHECK(in_circle_perturbed(b, c, a, d) == s);
    CHECK(in_circle_perturbed(c, a, b, d) == s);

    // Unit circle points that are exactly representable.
    const Vec2 p{0.6, 0.8}, q{-0.8, 0.6}, r{-0.6, -0.8}, t{0.8, -0.6};
    CHECK(in_circle(p, q, r, t) == 0);
    CHECK(in_circle(p, q, r, {0.8, std::nextafter(-0.6, 0.0)}) == 1);
    CHECK(in_circle_perturbed(p, q, r, t) != 0);
}

TEST_CASE("three points make one triangle") {
    const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}};
    const auto t = triangulate(pts);
    REQUIRE(t.triangles.size() == 1);
    CHECK(orientation(pts[t.triangles[0][0]], pts[t.triangles[0][1]], pts[t.triangles[0][2]]) == 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(t.adjacency.adjacent(i, j));
}

TEST_CASE("degenerate inputs raise geometry errors") {
    CHECK_THROWS_AS(triangulate(std::vector<Vec2>{{0, 0}, {1, 1}}), GeometryError);
    CHECK_THROWS_AS(triangulate(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}), GeometryError);
    CHECK_THROWS_AS(triangulate(std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}, {1, 0}}), GeometryError);
    CHECK_THROWS_AS(triangulate(std::vector<Vec2>{{0, 0}, {1, 0}, {0, NAN}}), GeometryError);
    CHECK_THROWS_AS(Adjacency::from_edges(3, {{0, 0}}), GeometryError);
    CHECK_THROWS_AS(Adjacency::from_edges(3, {{0, 5}}), GeometryError);
}

TEST_CASE("random 12-point sets match the brute-force triangulation") {
    Stream rng = derive_stream(12, {});
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_points(12, rng);
        const auto t = triangulate(pts);
        CHECK(edge_set(t.adjacency) == testing::brute_force_delaunay_edges(pts));
        CHECK(t.adjacency.symmetric());
    }
}

TEST_CASE("larger random sets satisfy the empty-circumcircle property") {
    Stream rng = derive_stream(13, {});
    for (std::size_t n : {3u, 4u, 5u, 10u, 50u, 200u, 1000u}) {
        const auto pts = random_points(n, rng, 100.0);
        const auto t = triangulate(pts);
        CHECK(empty_circumcircles(pts, t));
        const auto hull = convex_hull(pts);
        CHECK(t.triangles.size() == 2 * n - hull.size() - 2);
        if (n <= 50) CHECK(edge_set(t.adjacency) == testing::brute_force_delaunay_edges(pts));
    }
}

TEST_CASE("cocircular lattices triangulate uniquely regardless of input order") {
    std::vector<Vec2> grid;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) grid.push_back({double(i), double(j)});
    for (const auto& pts : {grid, hex_lattice(5)}) {
        const auto t = triangulate(pts);
        CHECK(empty_circumcircles(pts, t));
        const auto base = edge_set(t.adjacency);

        Stream rng = derive_stream(14, {});
        std::vector<int> perm(pts.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        for (int trial = 0; trial < 10; ++trial) {
            for (std::size_t i = perm.size() - 1; i > 0; --i)
                std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
            std::vector<Vec2> shuffled(pts.size());
            for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = pts[static_cast<std::size_t>(perm[i])];
            const auto ts = triangulate(shuffled);
            std::set<std::pair<int, int>> mapped;
            for (auto [i, j] : edge_set(ts.adjacency)) {
                const int a = perm[static_cast<std::size_t>(i)], b = perm[static_cast<std::size_t>(j)];
                mapped.insert({std::min(a, b), std::max(a, b)});
            }
            CHECK(mapped == base);
        }
    }
}

TEST_CASE("incremental update equals a rebuild") {
    Stream rng = derive_stream(15, {});
    for (int trial = 0; trial < 50; ++trial) {
        auto pts = random_points(150, rng, 20.0);
        DelaunayTriangulator tri;
        Triangulation out;
        tri.build(pts, out);
        int repaired = 0;
        for (int step = 0; step < 20; ++step) {
            const std::size_t n_moved = pts.size();
            // small jitter most steps, a large shake now and then
            const double amp = step % 7 == 6 ? 5.0 : 0.05;
            for (auto& p : pts) p += Vec2{amp * (rng.uniform() - 0.5), amp * (rng.uniform() - 0.5)};
            for (int k = 0; k < 3; ++k) pts.push_back({20.0 * rng.uniform(), 20.0 * rng.uniform()});
            repaired += tri.update(pts, n_moved, out);
            CHECK(tri.vertex_count() == pts.size());
            const auto fresh = triangulate(pts);
            CHECK(out.adjacency == fresh.adjacency);
            CHECK(out.triangles.size() == fresh.triangles.size());
        }
        CHECK(repaired > 0);
    }
}

TEST_CASE("update repairs lattice meshes with cocircular ties") {
    auto pts = hex_lattice(6);
    DelaunayTriangulator tri;
    Triangulation out;
    tri.build(pts, out);
    Stream rng = derive_stream(16, {});
    for (int step = 0; step < 30; ++step) {
        const std::size_t n = pts.size();
        // move a handful of points to other lattice-like positions
        for (int k = 0; k < 5; ++k) {
            auto& p = pts[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))];
            p += Vec2{0.25 * std::round(4 * (rng.uniform() - 0.5)), 0.0};
        }
        // drop duplicates created by the moves
        bool dup = false;
        for (std::size_t i = 0; i < n && !dup; ++i)
            for (std::size_t j = i + 1; j < n && !dup; ++j) dup = pts[i] == pts[j];
        if (dup) {
            CHECK_THROWS_AS(tri.update(pts, n, out), GeometryError);
            break;
        }
        tri.update(pts, n, out);
        CHECK(out.adjacency == triangulate(pts).adjacency);
    }
}

TEST_CASE("adjacency from edges") {
    const auto adj = Adjacency::from_edges(4, {{0, 1}, {1, 0}, {2, 1}, {3, 0}, {0, 1}});
    CHECK(adj.size() == 4);
    CHECK(adj.edge_count() == 3);
    CHECK(adj.symmetric());
    CHECK(adj.adjacent(0, 1));
    CHECK(adj.adjacent(1, 2));
    CHECK_FALSE(adj.adjacent(2, 3));
    const auto n0 = adj.neighbours(0);
    CHECK(std::vector<int>(n0.begin(), n0.end()) == std::vector<int>{1, 3});
}

TEST_CASE("convex hull") {
    const std::vector<Vec2> pts{{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}, {0, 1}};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    std::set<std::size_t> s(hull.begin(), hull.end());
    CHECK(s == std::set<std::size_t>{0, 1, 3, 4});
    for (std::size_t i = 0; i < hull.size(); ++i)
        CHECK(orientation(pts[hull[i]], pts[hull[(i + 1) % 4]], pts[hull[(i + 2) % 4]]) == 1);

    CHECK(convex_hull(std::vector<Vec2>{{1, 1}}).size() == 1);
    CHECK(convex_hull(std::vector<Vec2>{{1, 1}, {2, 2}, {3, 3}}).size() == 2);
}

TEST_CASE("caliper extents match the O(n^2) scan") {
    Stream rng = derive_stream(17, {});
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec2> pts(50);
        // anisotropic, rotated clouds so length and width differ
        const double angle = 2 * std::numbers::pi * rng.uniform();
        for (auto& p : pts) {
            const double u = 10 * (rng.uniform() - 0.5), v = 3 * (rng.uniform() - 0.5);
            p = {u * std::cos(angle) - v * std::sin(angle) + 5, u * std::sin(angle) + v * std::cos(angle) - 2};
        }
        const auto ext = caliper_extents(pts);
        const auto scan = testing::caliper_scan(pts);
        CHECK(std::abs(ext.length - scan.length) < 1e-9);
        CHECK(std::abs(ext.width - scan.width) < 1e-9);
    }
    const auto one = caliper_extents(std::vector<Vec2>{{3, 4}});
    CHECK(one.length == 0.0);
    CHECK(one.width == 0.0);
    const auto two = caliper_extents(std::vector<Vec2>{{0, 0}, {3, 4}});
    CHECK(two.length == doctest::Approx(5.0));
    CHECK(two.width == doctest::Approx(0.0));
}
