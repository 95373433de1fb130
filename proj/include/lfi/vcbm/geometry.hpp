#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lfi::vcbm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(Vec2 o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

/// Sign of the signed area of (a, b, c): +1 counter-clockwise, -1 clockwise,
/// 0 collinear. Exact for all finite double inputs.
int orientation(Vec2 a, Vec2 b, Vec2 c);

/// +1 if d lies strictly inside the circumcircle of counter-clockwise
/// (a, b, c), -1 if strictly outside, 0 if cocircular. Exact.
int in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// in_circle with cocircular ties broken by a symbolic perturbation of the
/// lifted points (lexicographic order), so it never returns 0 for distinct
/// points and non-degenerate counter-clockwise (a, b, c).
int in_circle_perturbed(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Symmetric neighbour lists in compressed-row form, sorted per vertex.
class Adjacency {
  public:
    Adjacency() = default;
    /// Builds from undirected edges (i, j), i != j; duplicates are merged.
    static Adjacency from_edges(std::size_t n_vertices, std::vector<std::pair<int, int>> edges);

    std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    std::span<const int> neighbours(std::size_t i) const {
        return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
    }
    bool adjacent(int i, int j) const;
    bool symmetric() const;

    friend bool operator==(const Adjacency&, const Adjacency&) = default;

  private:
    std::vector<std::uint32_t> offsets_;
    std::vector<int> targets_;
};

using TriangleIndices = std::array<int, 3>;

struct Triangulation {
    std::vector<TriangleIndices> triangles;  // counter-clockwise
    Adjacency adjacency;
};

/// Incremental Delaunay triangulation (Bowyer-Watson with a symbolic vertex
/// at infinity, points inserted in Hilbert order). Cocircular ties use
/// in_circle_perturbed, so the output is a function of the point set alone.
///
/// Throws GeometryError for fewer than 3 points, all-collinear input or
/// coincident points.
class DelaunayTriangulator {
  public:
    void build(std::span<const Vec2> points, Triangulation& out);
    Triangulation build(std::span<const Vec2> points);

    /// Re-triangulates after the first `n_moved` points (the vertices of the
    /// previous build or update, same order) have moved and the rest were
    /// appended. Repairs the kept mesh by edge flips when it is still a valid
    /// triangulation, otherwise rebuilds. Returns true when repaired.
    bool update(std::span<const Vec2> points, std::size_t n_moved, Triangulation& out);

    /// Vertex count of the kept mesh (0 before the first build).
    std::size_t vertex_count() const noexcept { return n_vertices_; }

  private:
    struct Tri {
        std::array<int, 3> v;  // -1 is the vertex at infinity
        std::array<int, 3> n;  // n[k] is across the edge opposite v[k]
    };

    bool in_conflict(const Tri& t, Vec2 p) const;
    int locate(Vec2 p, int hint) const;
    int new_tri(const std::array<int, 3>& v);
    int insert(int point, int hint);
    bool mesh_valid() const;
    void flip_to_delaunay();
    void emit(std::size_t n, Triangulation& out);

    std::span<const Vec2> pts_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<int> cavity_;
    std::vector<std::pair<int, int>> boundary_;  // (cavity tri, edge index)
    std::vector<int> created_;
    std::vector<int> order_;
    std::vector<std::pair<std::uint64_t, int>> keys_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::pair<int, int>> flips_;
    std::size_t n_vertices_ = 0;
};

/// Convenience wrapper around a temporary DelaunayTriangulator.
Triangulation triangulate(std::span<const Vec2> points);

/// Indices of the convex hull in counter-clockwise order, collinear points
/// dropped. One or two indices for degenerate inputs.
std::vector<std::size_t> convex_hull(std::span<const Vec2> points);

/// Longest extent (diameter) of a point set and the extent perpendicular to
/// that axis; both zero for a single point.
struct CaliperExtents {
    double length = 0.0;
    double width = 0.0;
    Vec2 axis{1.0, 0.0};
};

CaliperExtents caliper_extents(std::span<const Vec2> points);

}  // namespace lfi::vcbm
