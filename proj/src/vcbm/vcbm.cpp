#include "lfi/vcbm/vcbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"

namespace lfi::vcbm {
namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

double nearest_distance(Vec2 p, std::span<const Vec2> candidates) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : candidates) {
        const double dx = q.x - p.x, dy = q.y - p.y;
        best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
}

double max_radius(const TissueState& state, bool cancer_only) {
    double r = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (!cancer_only || state.kinds[i] == CellKind::cancer) r = std::max(r, norm(state.positions[i]));
    return r;
}

// Adds rings of healthy cells outside the tissue until every cancer cell is
// at least `margin` rest lengths inside the outermost cell.
void repad(TissueState& state, const VcbmConfig& config) {
    const double s = config.rest_length;
    const double tumour_r = max_radius(state, true);
    double outer = max_radius(state, false);
    while (tumour_r > outer - config.repad_margin * s) {
        const double r = outer + s;
        const auto count = std::max<std::size_t>(6, static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi * r / s)));
        for (std::size_t k = 0; k < count; ++k) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
            state.positions.push_back({r * std::cos(a), r * std::sin(a)});
            state.kinds.push_back(CellKind::healthy);
            state.ages.push_back(0.0);
        }
        outer = r;
    }
}

// True when a common neighbour k sees edge ij at an obtuse angle, i.e. lies
// inside the circle on diameter ij. Cell k then separates i from j; on the
// tissue rim this removes the long hull edges of sliver triangles.
bool blocked(const Adjacency& adj, std::span<const Vec2> pos, std::size_t i, std::size_t j) {
    const auto a = adj.neighbours(i);
    const auto b = adj.neighbours(j);
    auto p = a.begin();
    auto q = b.begin();
    while (p != a.end() && q != b.end()) {
        if (*p < *q) {
            ++p;
        } else if (*q < *p) {
            ++q;
        } else {
            const Vec2 k = pos[static_cast<std::size_t>(*p)];
            if (dot(pos[i] - k, pos[j] - k) < 0.0) return true;
            ++p;
            ++q;
        }
    }
    return false;
}

void check_domain(const TissueState& state, const VcbmConfig& config) {
    if (state.size() > static_cast<std::size_t>(config.max_cells))
        throw ModelFailure("tissue exceeded max_cells (" + std::to_string(config.max_cells) + ")");
    for (const Vec2& p : state.positions)
        if (std::abs(p.x) > config.domain_half_width || std::abs(p.y) > config.domain_half_width)
            throw ModelFailure("tissue exceeded the simulation domain (half width " +
                               format_double(config.domain_half_width) + ")");
}

}  // namespace

void VcbmParams::validate() const {
    if (!in_unit_interval(p0)) throw ValidationError("p0 must lie in [0, 1]");
    if (!in_unit_interval(p_psc)) throw ValidationError("p_psc must lie in [0, 1]");
    if (!(d_max > 0.0) || !std::isfinite(d_max)) throw ValidationError("d_max must be > 0");
    if (!(g_age > 0.0) || !std::isfinite(g_age)) throw ValidationError("g_age must be > 0");
}

VcbmParams VcbmParams::from(const ParamVector& theta) {
    VcbmParams p{theta.at("p0"), theta.at("p_psc"), theta.at("d_max"), theta.at("g_age")};
    p.validate();
    return p;
}

std::vector<std::string> VcbmConfig::problems() const {
    std::vector<std::string> out;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be > 0");
    };
    positive(spring_constant, "spring_constant");
    positive(rest_length, "rest_length");
    positive(dt, "dt");
    positive(domain_half_width, "domain_half_width");
    positive(max_spring_length, "max_spring_length");
    positive(mm_per_cell_diameter, "mm_per_cell_diameter");
    if (steps_per_day < 1) out.emplace_back("steps_per_day must be >= 1");
    if (std::abs(dt * steps_per_day - 1.0) > 1e-12)
        out.push_back("dt: dt * steps_per_day must equal one day (dt = " + format_double(dt) +
                      ", steps_per_day = " + std::to_string(steps_per_day) + ")");
    if (spring_constant * dt > 0.1 + 1e-12)
        out.emplace_back("spring_constant: spring_constant * dt must be <= 0.1 for a stable overdamped update");
    if (initial_tumour_cells < 1) out.emplace_back("initial_tumour_cells must be >= 1");
    if (max_cells < 1) out.emplace_back("max_cells must be >= 1");
    if (!(healthy_annulus_width >= 1.0)) out.emplace_back("healthy_annulus_width must be >= 1");
    if (!(cell_cycle_jitter >= 0.0) || !std::isfinite(cell_cycle_jitter))
        out.emplace_back("cell_cycle_jitter must be >= 0");
    if (!(repad_margin >= 0.0)) out.emplace_back("repad_margin must be >= 0");
    return out;
}

void VcbmConfig::validate() const {
    const auto found = problems();
    if (found.empty()) return;
    std::string msg = found.front();
    for (std::size_t i = 1; i < found.size(); ++i) msg += "; " + found[i];
    throw ValidationError(msg);
}

std::size_t TissueState::cancer_count() const {
    return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), CellKind::cancer));
}

TissueState seed_tissue(const VcbmConfig& config, const VcbmParams& params, Stream& rng) {
    Workspace ws;
    return seed_tissue(config, params, rng, ws);
}

TissueState seed_tissue(const VcbmConfig& config, const VcbmParams& params, Stream& rng, Workspace& ws) {
    config.validate();
    const double s = config.rest_length;
    const double h = s * std::sqrt(3.0) / 2.0;
    // Hex lattice area per cell is h * s.
    const double tumour_r = std::sqrt(config.initial_tumour_cells * h * s / std::numbers::pi);
    const double reach = tumour_r + config.healthy_annulus_width * s + 2.0 * s;
    const int span = static_cast<int>(std::ceil(reach / h)) + 1;

    struct Site {
        double r2, angle;
        Vec2 p;
    };
    std::vector<Site> sites;
    for (int j = -span; j <= span; ++j)
        for (int i = -2 * span; i <= 2 * span; ++i) {
            const Vec2 p{s * (i + 0.5 * j), h * j};
            const double r2 = dot(p, p);
            if (r2 <= reach * reach) sites.push_back({r2, std::atan2(p.y, p.x), p});
        }
    std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
        return a.r2 < b.r2 || (a.r2 == b.r2 && a.angle < b.angle);
    });
    const auto n_cancer = static_cast<std::size_t>(config.initial_tumour_cells);
    if (sites.size() <= n_cancer) throw ValidationError("seed lattice too small");
    const double cancer_edge = std::sqrt(sites[n_cancer - 1].r2);
    const double outer = cancer_edge + config.healthy_annulus_width * s;

    TissueState state;
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const bool cancer = k < n_cancer;
        if (!cancer && std::sqrt(sites[k].r2) > outer + 1e-9) break;
        state.positions.push_back(sites[k].p);
        state.kinds.push_back(cancer ? CellKind::cancer : CellKind::healthy);
        state.ages.push_back(cancer ? params.g_age * rng.uniform() : 0.0);
    }
    if (state.size() > static_cast<std::size_t>(config.max_cells))
        throw ValidationError("model.max_cells: " + std::to_string(config.max_cells) + " is below the seed tissue size (" +
                              std::to_string(state.size()) + " cells)");
    check_domain(state, config);
    retriangulate(state, ws);
    return state;
}

void retriangulate(TissueState& state, Workspace& ws) {
    ws.triangulator.build(state.positions, ws.triangulation);
    state.neighbourhood = std::move(ws.triangulation.adjacency);
    ws.mesh_steps = state.steps;
}

double boundary_distance(std::size_t cell, const TissueState& state) {
    if (cell >= state.size()) throw ValidationError("cell index out of range");
    if (state.kinds[cell] != CellKind::cancer) throw ValidationError("boundary_distance needs a cancer cell");
    double best = std::numeric_limits<double>::infinity();
    const Vec2 p = state.positions[cell];
    for (std::size_t j = 0; j < state.size(); ++j) {
        if (state.kinds[j] != CellKind::healthy) continue;
        const Vec2 d = state.positions[j] - p;
        best = std::min(best, dot(d, d));
    }
    if (!std::isfinite(best)) throw ValidationError("tumour boundary undefined: no healthy cells");
    return std::sqrt(best);
}

double proliferation_probability(double d, double p0, double d_max) {
    return std::max(0.0, p0 * (1.0 - d / d_max));
}

namespace {

template <class Blocked>
void accumulate_springs(const TissueState& state, const VcbmConfig& config, Blocked&& is_blocked,
                        std::vector<Vec2>& out) {
    const std::size_t n = state.size();
    if (state.neighbourhood.size() != n) throw GeometryError("neighbourhood does not match the cell count");
    const double s = config.rest_length;
    const double cap = config.max_spring_length * s;
    const double scale = config.dt * config.spring_constant;
    out.assign(n, Vec2{});
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 xi = state.positions[i];
        for (int j : state.neighbourhood.neighbours(i)) {
            if (static_cast<std::size_t>(j) < i) continue;
            const Vec2 d = state.positions[static_cast<std::size_t>(j)] - xi;
            const double len = norm(d);
            if (len == 0.0) throw GeometryError("coincident neighbouring cells");
            if (len > cap || is_blocked(i, static_cast<std::size_t>(j))) continue;
            const Vec2 f = ((len - s) / len) * d;
            out[i] += f;
            out[static_cast<std::size_t>(j)] -= f;
        }
    }
    for (auto& v : out) v = scale * v;
}

}  // namespace

void spring_displacements(const TissueState& state, const VcbmConfig& config, std::vector<Vec2>& out) {
    accumulate_springs(
        state, config,
        [&](std::size_t i, std::size_t j) { return blocked(state.neighbourhood, state.positions, i, j); }, out);
}

void spring_displacements(const TissueState& state, const VcbmConfig& config,
                          std::span<const TriangleIndices> triangles, std::vector<Vec2>& out,
                          std::vector<std::uint8_t>& scratch) {
    // Each triangle has at most one obtuse corner; the opposite edge is
    // blocked. Flags are indexed by neighbour-list slot.
    const Adjacency& adj = state.neighbourhood;
    if (adj.size() != state.size()) throw GeometryError("neighbourhood does not match the cell count");
    scratch.assign(2 * adj.edge_count(), 0);
    const int* base = adj.size() > 0 ? adj.neighbours(0).data() : nullptr;
    const auto& pos = state.positions;
    for (const auto& t : triangles) {
        for (int k = 0; k < 3; ++k) {
            const int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            const Vec2 c = pos[static_cast<std::size_t>(t[k])];
            if (dot(pos[static_cast<std::size_t>(a)] - c, pos[static_cast<std::size_t>(b)] - c) < 0.0) {
                const auto nb = adj.neighbours(static_cast<std::size_t>(std::min(a, b)));
                const auto it = std::lower_bound(nb.begin(), nb.end(), std::max(a, b));
                if (it != nb.end() && *it == std::max(a, b)) scratch[static_cast<std::size_t>(&*it - base)] = 1;
                break;
            }
        }
    }
    accumulate_springs(
        state, config,
        [&](std::size_t i, std::size_t j) {
            const auto nb = adj.neighbours(i);
            const auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<int>(j));
            return scratch[static_cast<std::size_t>(&*it - base)] != 0;
        },
        out);
}

std::vector<Vec2> spring_displacements(const TissueState& state, const VcbmConfig& config) {
    std::vector<Vec2> out;
    spring_displacements(state, config, out);
    return out;
}

void step(TissueState& state, const VcbmParams& params, const VcbmConfig& config, Stream& rng, Workspace& ws) {
    const double s = config.rest_length;
    const std::size_t n_start = state.size();
    const bool have_mesh = ws.mesh_steps == state.steps && ws.triangulator.vertex_count() == n_start;

    if (have_mesh)
        spring_displacements(state, config, ws.triangulation.triangles, ws.displacement, ws.blocked);
    else
        spring_displacements(state, config, ws.displacement);
    for (std::size_t i = 0; i < state.size(); ++i) state.positions[i] += ws.displacement[i];

    ws.healthy.clear();
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.kinds[i] == CellKind::healthy) ws.healthy.push_back(state.positions[i]);
    if (ws.healthy.empty()) throw ModelFailure("tumour boundary undefined: no healthy cells");

    const std::size_t n_before = state.size();
    for (std::size_t i = 0; i < n_before; ++i) {
        if (state.kinds[i] != CellKind::cancer || state.ages[i] < params.g_age) continue;
        const double d = nearest_distance(state.positions[i], ws.healthy);
        if (!(rng.uniform() < proliferation_probability(d, params.p0, params.d_max))) continue;
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        const Vec2 daughter = state.positions[i] + Vec2{0.5 * s * std::cos(angle), 0.5 * s * std::sin(angle)};
        state.ages[i] = config.cell_cycle_jitter * rng.uniform();
        state.positions.push_back(daughter);
        state.kinds.push_back(CellKind::cancer);
        state.ages.push_back(config.cell_cycle_jitter * rng.uniform());
    }

    if (params.p_psc > 0.0) {
        Vec2 centroid{};
        std::size_t n_cancer = 0;
        for (std::size_t i = 0; i < state.size(); ++i)
            if (state.kinds[i] == CellKind::cancer) {
                centroid += state.positions[i];
                ++n_cancer;
            }
        if (n_cancer > 0) centroid = (1.0 / static_cast<double>(n_cancer)) * centroid;
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (state.kinds[i] != CellKind::cancer || !(rng.uniform() < params.p_psc)) continue;
            Vec2 dir = state.positions[i] - centroid;
            const double len = norm(dir);
            if (len > 0.0) {
                dir = (1.0 / len) * dir;
            } else {
                const double angle = 2.0 * std::numbers::pi * rng.uniform();
                dir = {std::cos(angle), std::sin(angle)};
            }
            state.positions[i] += s * dir;
        }
    }

    for (double& age : state.ages) age += 1.0;
    ++state.steps;

    repad(state, config);
    check_domain(state, config);
    try {
        if (have_mesh) {
            ws.triangulator.update(state.positions, n_start, ws.triangulation);
            state.neighbourhood = std::move(ws.triangulation.adjacency);
            ws.mesh_steps = state.steps;
        } else {
            retriangulate(state, ws);
        }
    } catch (const GeometryError& e) {
        // Two cells landing on the same point (e.g. an invasive move onto a
        // lattice neighbour) ends the simulation.
        ws.mesh_steps = static_cast<std::size_t>(-1);
        throw ModelFailure(std::string("cell collision: ") + e.what());
    }
}

double tumour_volume(const TissueState& state, const VcbmConfig& config) {
    std::vector<Vec2> cancer;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.kinds[i] == CellKind::cancer) cancer.push_back(state.positions[i]);
    if (cancer.empty()) return 0.0;
    const CaliperExtents ext = caliper_extents(cancer);
    const double length = (ext.length + config.rest_length) * config.mm_per_cell_diameter;
    const double width = (ext.width + config.rest_length) * config.mm_per_cell_diameter;
    switch (config.volume_formula) {
        case VolumeFormula::caliper: return 0.5 * length * width * width;
        case VolumeFormula::ellipsoid: return std::numbers::pi / 6.0 * length * width * width;
    }
    return 0.0;
}

TumourTrajectory simulate(const VcbmParams& params, const VcbmConfig& config, double days,
                          std::span<const double> measurement_days, Stream& rng, const DayObserver& observer) {
    params.validate();
    config.validate();
    if (!(days >= 0.0) || !std::isfinite(days)) throw ValidationError("days must be >= 0");
    if (measurement_days.empty()) throw ValidationError("at least one measurement day is required");
    for (std::size_t k = 0; k < measurement_days.size(); ++k) {
        const double t = measurement_days[k];
        if (!(t >= 0.0 && t <= days)) throw ValidationError("measurement day " + format_double(t) + " outside [0, days]");
        if (k > 0 && !(t > measurement_days[k - 1]))
            throw ValidationError("measurement days must be strictly increasing");
    }

    const double spd = config.steps_per_day;
    const auto total_steps = static_cast<std::size_t>(std::ceil(days * spd - 1e-9));
    std::set<std::size_t> wanted;
    for (double t : measurement_days) {
        wanted.insert(static_cast<std::size_t>(std::floor(t * spd + 1e-9)));
        wanted.insert(std::min(total_steps, static_cast<std::size_t>(std::ceil(t * spd - 1e-9))));
    }

    Workspace ws;
    TissueState state = seed_tissue(config, params, rng, ws);
    std::vector<std::pair<std::size_t, double>> volumes;
    auto record = [&] {
        if (wanted.count(state.steps)) volumes.emplace_back(state.steps, tumour_volume(state, config));
        if (observer && state.steps % static_cast<std::size_t>(config.steps_per_day) == 0)
            observer(static_cast<double>(state.steps) / spd, state);
    };
    record();
    while (state.steps < total_steps) {
        step(state, params, config, rng, ws);
        record();
    }

    auto volume_at = [&](std::size_t k) {
        for (const auto& [step_idx, v] : volumes)
            if (step_idx == k) return v;
        throw Error("internal: missing volume record");
    };
    std::vector<Observation> rows;
    for (double t : measurement_days) {
        const double pos = t * spd;
        const auto lo = static_cast<std::size_t>(std::floor(pos + 1e-9));
        const std::size_t hi = std::min(total_steps, static_cast<std::size_t>(std::ceil(pos - 1e-9)));
        double v = volume_at(lo);
        if (hi != lo) v += (pos - static_cast<double>(lo)) * (volume_at(hi) - v);
        rows.push_back({t, v});
    }
    return TumourTrajectory(std::move(rows));
}

VcbmModel::VcbmModel(VcbmConfig config, std::vector<double> measurement_days)
    : config_(config), days_(std::move(measurement_days)) {
    config_.validate();
    if (days_.empty()) throw ValidationError("vcbm model needs at least one measurement day");
}

std::vector<double> VcbmModel::simulate(const ParamVector& theta, Stream& rng) const {
    const VcbmParams params = VcbmParams::from(theta);
    return vcbm::simulate(params, config_, days_.back(), days_, rng).volumes();
}

}  // namespace lfi::vcbm
