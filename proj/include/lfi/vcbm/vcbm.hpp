#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfi/core/model.hpp"
#include "lfi/core/param_vector.hpp"
#include "lfi/core/rng.hpp"
#include "lfi/core/timeseries.hpp"
#include "lfi/vcbm/geometry.hpp"

namespace lfi::vcbm {

/// Calibrated parameters. Distances are in cell diameters, g_age in timesteps.
struct VcbmParams {
    double p0 = 0.2;       // proliferation probability at the tumour boundary
    double p_psc = 1e-5;   // per-step invasion probability
    double d_max = 31.0;   // depth beyond which cells stop dividing
    double g_age = 114.0;  // timesteps before a cell may divide

    void validate() const;
    /// Reads components named p0, p_psc, d_max, g_age.
    static VcbmParams from(const ParamVector& theta);
};

enum class VolumeFormula { caliper, ellipsoid };

/// Mechanical and geometric constants, all in cell-diameter / day units.
struct VcbmConfig {
    double spring_constant = 2.0;  // per day
    double rest_length = 1.0;      // one cell diameter
    double dt = 1.0 / 24.0;        // days
    int steps_per_day = 24;
    int initial_tumour_cells = 61;
    double healthy_annulus_width = 4.0;   // rest lengths of healthy tissue around the seed tumour
    double domain_half_width = 30.0;      // any cell beyond this box fails the simulation
    int max_cells = 5000;                 // more cells than this fails the simulation
    double cell_cycle_jitter = 2.0;       // new ages are uniform in [0, jitter)
    double max_spring_length = 3.0;       // rest lengths; longer Delaunay edges exert no force
    double repad_margin = 2.0;            // rest lengths
    double mm_per_cell_diameter = 0.02;
    VolumeFormula volume_formula = VolumeFormula::caliper;

    std::vector<std::string> problems() const;
    void validate() const;
};

enum class CellKind : std::uint8_t { cancer, healthy };

struct TissueState {
    std::vector<Vec2> positions;
    std::vector<CellKind> kinds;
    std::vector<double> ages;  // timesteps since birth or last division
    Adjacency neighbourhood;
    std::size_t steps = 0;

    std::size_t size() const noexcept { return positions.size(); }
    std::size_t cancer_count() const;
};

/// Per-simulation scratch space. The triangulator keeps the mesh of the
/// state last triangulated so step() can repair it instead of rebuilding.
struct Workspace {
    DelaunayTriangulator triangulator;
    std::size_t mesh_steps = static_cast<std::size_t>(-1);  // state.steps of the kept mesh
    Triangulation triangulation;
    std::vector<Vec2> displacement;
    std::vector<Vec2> healthy;
    std::vector<std::uint8_t> blocked;
};

/// Hexagonal seed tumour of config.initial_tumour_cells cancer cells with an
/// annulus of healthy cells, all at rest length. Cancer ages are uniform in
/// [0, g_age).
TissueState seed_tissue(const VcbmConfig& config, const VcbmParams& params, Stream& rng);
TissueState seed_tissue(const VcbmConfig& config, const VcbmParams& params, Stream& rng, Workspace& ws);

/// Recomputes the Delaunay neighbourhood of the current positions.
void retriangulate(TissueState& state, Workspace& ws);

/// Distance from cancer cell `cell` to the nearest healthy cell centre.
double boundary_distance(std::size_t cell, const TissueState& state);

/// p0 (1 - d / d_max), clamped below at 0.
double proliferation_probability(double d, double p0, double d_max);

/// Overdamped Hooke's-law displacement of every cell for one timestep.
/// Springs act along Delaunay edges no longer than max_spring_length, except
/// edges that a common neighbour sees at an obtuse angle.
std::vector<Vec2> spring_displacements(const TissueState& state, const VcbmConfig& config);
void spring_displacements(const TissueState& state, const VcbmConfig& config, std::vector<Vec2>& out);
/// Same result using the Delaunay triangles of state.positions to find the
/// obtuse corners (faster than the neighbour-list search).
void spring_displacements(const TissueState& state, const VcbmConfig& config,
                          std::span<const TriangleIndices> triangles, std::vector<Vec2>& out,
                          std::vector<std::uint8_t>& scratch);

/// One timestep: mechanics, division, invasion, ageing, re-padding of the
/// healthy annulus, retriangulation.
void step(TissueState& state, const VcbmParams& params, const VcbmConfig& config, Stream& rng, Workspace& ws);

/// Caliper volume (L W^2 / 2, or pi/6 L W^2) of the cancer cells in mm^3.
double tumour_volume(const TissueState& state, const VcbmConfig& config);

using DayObserver = std::function<void(double day, const TissueState& state)>;

/// Runs steps_per_day * days steps from a fresh seed tissue and records the
/// volume at each measurement day (linear interpolation between steps for
/// non-integral step positions). The observer, if set, sees the state at
/// every whole day.
TumourTrajectory simulate(const VcbmParams& params, const VcbmConfig& config, double days,
                          std::span<const double> measurement_days, Stream& rng, const DayObserver& observer = {});

/// Model adapter: summary = volumes at the measurement days.
class VcbmModel final : public Model {
  public:
    VcbmModel(VcbmConfig config, std::vector<double> measurement_days);

    std::string_view name() const override { return "vcbm"; }
    std::vector<double> simulate(const ParamVector& theta, Stream& rng) const override;

    const VcbmConfig& config() const noexcept { return config_; }
    const std::vector<double>& measurement_days() const noexcept { return days_; }

  private:
    VcbmConfig config_;
    std::vector<double> days_;
};

}  // namespace lfi::vcbm
