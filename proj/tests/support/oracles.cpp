#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

namespace lfi::testing {

std::set<std::pair<int, int>> brute_force_delaunay_edges(std::span<const Vec2> points) {
    const int n = static_cast<int>(points.size());
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const long double ax = points[i].x, ay = points[i].y;
                const long double bx = points[j].x, by = points[j].y;
                const long double cx = points[k].x, cy = points[k].y;
                const long double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                if (std::abs(d) < 1e-18L) continue;
                const long double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
                const long double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
                const long double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
                const long double r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
                bool empty = true;
                for (int m = 0; m < n && empty; ++m) {
                    if (m == i || m == j || m == k) continue;
                    const long double dx = points[m].x - ux, dy = points[m].y - uy;
                    if (dx * dx + dy * dy < r2) empty = false;
                }
                if (!empty) continue;
                edges.insert({i, j});
                edges.insert({i, k});
                edges.insert({j, k});
            }
    return edges;
}

double nearest_scan(std::span<const Vec2> points, std::span<const bool> healthy, std::size_t cell) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (!healthy[j]) continue;
        const double dx = points[j].x - points[cell].x, dy = points[j].y - points[cell].y;
        best = std::min(best, std::hypot(dx, dy));
    }
    return best;
}

ScanExtents caliper_scan(std::span<const Vec2> points) {
    ScanExtents out;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = std::hypot(points[j].x - points[i].x, points[j].y - points[i].y);
            if (d > out.length) {
                out.length = d;
                bi = i;
                bj = j;
            }
        }
    if (out.length == 0.0) return out;
    const double nx = -(points[bj].y - points[bi].y) / out.length;
    const double ny = (points[bj].x - points[bi].x) / out.length;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec2& p : points) {
        const double t = p.x * nx + p.y * ny;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    out.width = hi - lo;
    return out;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    // Q_KS(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)
    double q = 0.0, sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = sign * 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        q += term;
        if (std::abs(term) < 1e-12) break;
        sign = -sign;
    }
    if (lambda < 0.2) q = 1.0;
    return {d, std::clamp(q, 0.0, 1.0)};
}

double simpson(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
    if (n % 2) ++n;
    const double h = (hi - lo) / static_cast<double>(n);
    double sum = f(lo) + f(hi);
    for (std::size_t k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(k));
    return sum * h / 3.0;
}

double beta_density(double x, double a, double b) {
    if (x < 0.0 || x > 1.0) return 0.0;
    const double log_b = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0) * std::exp(-log_b);
}

double chi_square_sf(double statistic, double dof) { return boost::math::gamma_q(dof / 2.0, statistic / 2.0); }

}  // namespace lfi::testing
