#pragma once

#include "crossimpact/execution.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace crossimpact {

/// Uniform (kappa_i, kappa_j) lattice with kappa_steps nodes per axis,
/// endpoints included. Going from n to 2n-1 nodes keeps every old node.
struct GridSpec {
    int kappa_steps = 50;
    double kappa_min = 0.02;
    double kappa_max = 0.98;
    std::vector<double> zeta_T_values{0.5, 1.0, 2.0};

    void validate() const;
    double kappa_at(int k) const noexcept;
};

struct CostCell {
    double kappa_i = 0.0;
    double kappa_j = 0.0;
    bool feasible = false;
    Region region = Region::I;
    bool on_boundary = false;
    double omega_ij = 0.0;
    double omega_ji = 0.0;
    double omega_c = 0.0;

    double omega_c_scaled() const noexcept { return omega_c * 1e6; }
};

/// Costs over the grid for one zeta_T. Cells are stored kappa_i-major.
struct CostSurface {
    double zeta_T = 1.0;
    int steps = 0;
    std::vector<CostCell> cells;

    const CostCell& at(int a, int b) const { return cells.at(static_cast<std::size_t>(a) * steps + b); }
};

/// Cells are evaluated in parallel; the result does not depend on the
/// evaluation order or thread count.
CostSurface build_surface(const Presets& presets, const PairModel& model, double zeta_T, const GridSpec& grid,
                          const CostOptions& opts = {});

/// Single-threaded reference for build_surface.
CostSurface build_surface_serial(const Presets& presets, const PairModel& model, double zeta_T,
                                 const GridSpec& grid, const CostOptions& opts = {});

std::vector<CostSurface> build_surfaces(const Presets& presets, const PairModel& model, const GridSpec& grid,
                                        const CostOptions& opts = {});

struct OptimalStrategy {
    StrategyParams params;
    double omega_c = 0.0;
    Region region = Region::I;
};

/// Global minimum over the feasible cells of all surfaces, optionally
/// restricted to one region. Ties go to the smaller zeta_T, then kappa_i,
/// then kappa_j. Throws EmptyDomainError when nothing qualifies.
OptimalStrategy find_min(std::span<const CostSurface> surfaces, std::optional<Region> only = std::nullopt);

struct RefineOptions {
    double tol = 1e-15;  // stop once the simplex cost spread drops below this
    int max_evals = 500;
    double kappa_min = 0.02;
    double kappa_max = 0.98;
    double zeta_min = 1e-3;
    double zeta_max = 1e3;
    bool lock_region = false;  // stay inside the seed's region
};

/// Nelder-Mead descent over (kappa_i, kappa_j, zeta_T) started at seed.
/// Never returns a cost above the seed's.
OptimalStrategy refine_min(const Presets& presets, const PairModel& model, const OptimalStrategy& seed,
                           const RefineOptions& opts = {}, const CostOptions& cost_opts = {});

/// CSV with header zeta_T,kappa_i,kappa_j,region,feasible,omega_c,omega_c_x1e6.
void write_surface_csv(const CostSurface& surface, std::ostream& os);

}  // namespace crossimpact
