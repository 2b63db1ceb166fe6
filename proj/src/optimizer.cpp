#include "crossimpact/optimizer.hpp"

#include "crossimpact/error.hpp"
#include "crossimpact/format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace crossimpact {

namespace {

CostCell evaluate_cell(const Presets& presets, const PairModel& model, double kappa_i, double kappa_j,
                       double zeta_T, const CostOptions& opts) {
    CostCell cell;
    cell.kappa_i = kappa_i;
    cell.kappa_j = kappa_j;
    const StrategyParams params{kappa_i, kappa_j, zeta_T};
    RegionInfo info;
    try {
        info = classify_region(params);
    } catch (const EmptyDomainError&) {
        return cell;
    }
    const auto sched = resolve_schedule(presets, params);
    cell.feasible = true;
    cell.region = info.region;
    cell.on_boundary = info.on_boundary;
    cell.omega_ij = cross_cost_ij(sched, info.region, model.G_ij, model.g_i, opts);
    cell.omega_ji = cross_cost_ji(sched, info.region, model.G_ji, model.g_j, opts);
    cell.omega_c = cell.omega_ij + cell.omega_ji;
    return cell;
}

CostSurface empty_surface(const Presets& presets, const PairModel& model, double zeta_T, const GridSpec& grid) {
    grid.validate();
    presets.validate();
    model.validate();
    if (!(zeta_T > 0.0)) throw ParameterError("zeta_T must be positive");
    CostSurface s;
    s.zeta_T = zeta_T;
    s.steps = grid.kappa_steps;
    s.cells.resize(static_cast<std::size_t>(grid.kappa_steps) * grid.kappa_steps);
    return s;
}

}  // namespace

void GridSpec::validate() const {
    if (kappa_steps < 2) throw ParameterError("grid needs at least 2 kappa steps");
    if (!(kappa_min > 0.0 && kappa_min < kappa_max && kappa_max < 1.0)) {
        throw ParameterError("grid kappa bounds must satisfy 0 < kappa_min < kappa_max < 1");
    }
    for (double z : zeta_T_values) {
        if (!(z > 0.0) || !std::isfinite(z)) throw ParameterError("grid zeta_T values must be positive");
    }
}

double GridSpec::kappa_at(int k) const noexcept {
    if (k == kappa_steps - 1) return kappa_max;
    return kappa_min + k * ((kappa_max - kappa_min) / (kappa_steps - 1));
}

CostSurface build_surface(const Presets& presets, const PairModel& model, double zeta_T, const GridSpec& grid,
                          const CostOptions& opts) {
    auto s = empty_surface(presets, model, zeta_T, grid);
    const long n = grid.kappa_steps;
#pragma omp parallel for schedule(dynamic, 16)
    for (long idx = 0; idx < n * n; ++idx) {
        const int a = static_cast<int>(idx / n);
        const int b = static_cast<int>(idx % n);
        s.cells[idx] = evaluate_cell(presets, model, grid.kappa_at(a), grid.kappa_at(b), zeta_T, opts);
    }
    return s;
}

CostSurface build_surface_serial(const Presets& presets, const PairModel& model, double zeta_T,
                                 const GridSpec& grid, const CostOptions& opts) {
    auto s = empty_surface(presets, model, zeta_T, grid);
    const int n = grid.kappa_steps;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            s.cells[static_cast<std::size_t>(a) * n + b] =
                evaluate_cell(presets, model, grid.kappa_at(a), grid.kappa_at(b), zeta_T, opts);
        }
    }
    return s;
}

std::vector<CostSurface> build_surfaces(const Presets& presets, const PairModel& model, const GridSpec& grid,
                                        const CostOptions& opts) {
    std::vector<CostSurface> out;
    out.reserve(grid.zeta_T_values.size());
    for (double z : grid.zeta_T_values) out.push_back(build_surface(presets, model, z, grid, opts));
    return out;
}

OptimalStrategy find_min(std::span<const CostSurface> surfaces, std::optional<Region> only) {
    std::vector<std::size_t> order(surfaces.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return surfaces[x].zeta_T < surfaces[y].zeta_T; });

    std::optional<OptimalStrategy> best;
    for (std::size_t si : order) {
        const auto& surface = surfaces[si];
        // cells are kappa_i-major, kappa_j-minor: the tie-break order
        for (const auto& cell : surface.cells) {
            if (!cell.feasible) continue;
            if (only && cell.region != *only) continue;
            if (!best || cell.omega_c < best->omega_c) {
                best = OptimalStrategy{{cell.kappa_i, cell.kappa_j, surface.zeta_T}, cell.omega_c, cell.region};
            }
        }
    }
    if (!best) throw EmptyDomainError("no feasible cell to minimize over");
    return *best;
}

OptimalStrategy refine_min(const Presets& presets, const PairModel& model, const OptimalStrategy& seed,
                           const RefineOptions& opts, const CostOptions& cost_opts) {
    using Point = std::array<double, 3>;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    model.validate();
    seed.params.validate();

    int evals = 0;
    auto cost = [&](const Point& p) {
        ++evals;
        const StrategyParams sp{p[0], p[1], p[2]};
        if (p[0] < opts.kappa_min || p[0] > opts.kappa_max || p[1] < opts.kappa_min || p[1] > opts.kappa_max) return kInf;
        if (p[2] < opts.zeta_min || p[2] > opts.zeta_max) return kInf;
        if (opts.lock_region && !region_admits(sp, seed.region)) return kInf;
        return cross_cost_total(presets, sp, model, cost_opts).omega_c;
    };

    const Point start{seed.params.kappa_i, seed.params.kappa_j, seed.params.zeta_T};
    std::array<Point, 4> simplex{start, start, start, start};
    const std::array<double, 3> step{0.05, 0.05, 0.1 * seed.params.zeta_T};
    for (int d = 0; d < 3; ++d) {
        Point& p = simplex[d + 1];
        p[d] += step[d];
        // step inward when the seed sits on an upper bound
        if ((d < 2 && p[d] > opts.kappa_max) || (d == 2 && p[d] > opts.zeta_max)) p[d] = start[d] - step[d];
    }
    std::array<double, 4> values{};
    values[0] = seed.omega_c;
    for (int v = 1; v < 4; ++v) values[v] = cost(simplex[v]);

    auto centroid_without = [&](int worst) {
        Point c{0.0, 0.0, 0.0};
        for (int v = 0; v < 4; ++v) {
            if (v == worst) continue;
            for (int d = 0; d < 3; ++d) c[d] += simplex[v][d] / 3.0;
        }
        return c;
    };
    auto along = [](const Point& c, const Point& w, double t) {
        Point p;
        for (int d = 0; d < 3; ++d) p[d] = c[d] + t * (w[d] - c[d]);
        return p;
    };

    while (evals < opts.max_evals) {
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int x, int y) { return values[x] < values[y]; });
        const int best = idx[0], second_worst = idx[2], worst = idx[3];
        if (std::isfinite(values[worst]) && values[worst] - values[best] < opts.tol) break;

        const Point c = centroid_without(worst);
        const Point reflected = along(c, simplex[worst], -1.0);
        const double fr = cost(reflected);
        if (fr < values[best]) {
            const Point expanded = along(c, simplex[worst], -2.0);
            const double fe = cost(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        const Point contracted = along(c, simplex[worst], fr < values[worst] ? -0.5 : 0.5);
        const double fc = cost(contracted);
        if (fc < std::min(fr, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        for (int v = 0; v < 4; ++v) {
            if (v == best) continue;
            simplex[v] = along(simplex[best], simplex[v], 0.5);
            values[v] = cost(simplex[v]);
        }
    }

    const auto it = std::min_element(values.begin(), values.end());
    const auto& p = simplex[static_cast<std::size_t>(it - values.begin())];
    if (!(*it < seed.omega_c)) return seed;
    const StrategyParams sp{p[0], p[1], p[2]};
    return {sp, *it, classify_region(sp).region};
}

void write_surface_csv(const CostSurface& surface, std::ostream& os) {
    os << "zeta_T,kappa_i,kappa_j,region,feasible,omega_c,omega_c_x1e6\n";
    for (const auto& cell : surface.cells) {
        os << format_double(surface.zeta_T) << ',' << format_double(cell.kappa_i) << ','
           << format_double(cell.kappa_j) << ',';
        if (cell.feasible) {
            os << region_name(cell.region) << ",1," << format_double(cell.omega_c) << ','
               << format_double(cell.omega_c_scaled()) << '\n';
        } else {
            os << ",0,,\n";
        }
    }
}

}  // namespace crossimpact
