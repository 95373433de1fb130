#pragma once

// Slow, obviously-correct reference implementations that the tests compare
// the library against. Nothing here is used by the library itself.

#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "lfi/vcbm/geometry.hpp"

namespace lfi::testing {

using vcbm::Vec2;

/// Delaunay edges found by checking every triple (i, j, k) for an empty
/// circumcircle against all other points. O(n^4); general position assumed.
std::set<std::pair<int, int>> brute_force_delaunay_edges(std::span<const Vec2> points);

/// Smallest distance from points[cell] to any point flagged healthy.
double nearest_scan(std::span<const Vec2> points, std::span<const bool> healthy, std::size_t cell);

/// Caliper extents by brute force: L is the largest pairwise distance, W the
/// spread of the projections onto the normal of that pair's direction.
struct ScanExtents {
    double length = 0.0;
    double width = 0.0;
};
ScanExtents caliper_scan(std::span<const Vec2> points);

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Composite Simpson rule on [lo, hi] with n (even) panels.
double simpson(const std::function<double(double)>& f, double lo, double hi, std::size_t n);

/// Beta(a, b) density evaluated directly from the gamma function.
double beta_density(double x, double a, double b);

/// Pearson chi-square statistic's upper tail probability.
double chi_square_sf(double statistic, double dof);

}  // namespace lfi::testing
