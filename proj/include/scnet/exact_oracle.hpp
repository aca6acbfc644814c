#pragma once

// Ground-truth solvers for tiny instances: exhaustive lattice search, the
// closed form of the single chain, and a capacity-free cheapest-path bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "scnet/errors.hpp"
#include "scnet/network_model.hpp"
#include "scnet/nsga2.hpp"

namespace scnet {

inline constexpr double kMaxLatticePoints = 1e8;

class SearchSpaceTooLarge : public Error {
public:
    explicit SearchSpaceTooLarge(double points)
        : Error("lattice has " + std::to_string(points) + " points, limit is 1e8"), points_(points) {}
    [[nodiscard]] double points() const noexcept { return points_; }

private:
    double points_;
};

class NoFeasibleLatticePoint : public Error {
public:
    explicit NoFeasibleLatticePoint(double min_violation)
        : Error("no feasible lattice point; smallest violation found " + std::to_string(min_violation)),
          min_violation_(min_violation) {}
    [[nodiscard]] double min_violation() const noexcept { return min_violation_; }

private:
    double min_violation_;
};

class TopologyError : public Error {
public:
    using Error::Error;
};

class InfeasibleCapacities : public Error {
public:
    using Error::Error;
};

struct OracleResult {
    FlowPlan plan;
    double cost = 0.0;
};

namespace detail {

    // Levels 0, step, 2 step, ... with the last one clamped to the bound.
    inline std::vector<double> lattice_levels(double bound, double step)
    {
        auto const count = 1 + static_cast<std::size_t>(std::ceil(bound / step - 1e-12));
        std::vector<double> levels(count);
        for (std::size_t l = 0; l < count; ++l) {
            levels[l] = std::min(static_cast<double>(l) * step, bound);
        }
        return levels;
    }

    // Odometer over a block of variables; the first variable is the most
    // significant digit so visiting order is lexicographic.
    template <typename Visit>
    void enumerate_block(std::vector<std::vector<double>> const& levels, Visit&& visit)
    {
        std::vector<std::size_t> digit(levels.size(), 0);
        std::vector<double> value(levels.size());
        for (std::size_t v = 0; v < levels.size(); ++v) { value[v] = levels[v][0]; }
        while (true) {
            visit(value);
            std::size_t v = levels.size();
            while (v > 0) {
                --v;
                if (++digit[v] < levels[v].size()) {
                    value[v] = levels[v][digit[v]];
                    break;
                }
                digit[v] = 0;
                value[v] = levels[v][0];
                if (v == 0) { return; }
            }
            if (levels.empty()) { return; }
        }
    }

    struct RawPoint {
        std::vector<double> flow;
        std::vector<double> per_plant;
        double cost = 0.0;
        double violation = 0.0;
    };

    struct ProductionPoint {
        std::vector<double> flow;
        std::vector<double> per_plant;
        std::vector<double> per_dc;
        double total = 0.0;
        double cost = 0.0;
        double violation = 0.0;
    };

    struct ShipmentPoint {
        std::vector<double> flow;
        std::vector<double> per_dc;
        double total = 0.0;
        double cost = 0.0;
    };

    inline double breach(double residual, double tolerance, double rhs)
    {
        return residual < -slack(tolerance, rhs) ? -residual : 0.0;
    }

} // namespace detail

// Number of lattice points brute_force_optimum would visit.
inline double lattice_size(NetworkInstance const& in, double grid_step)
{
    if (!(grid_step > 0.0)) { throw Error("grid_step must be positive"); }
    double points = 1.0;
    auto times = [&](double bound, std::size_t copies) {
        double const levels = 1.0 + std::ceil(bound / grid_step - 1e-12);
        points *= std::pow(levels, static_cast<double>(copies));
    };
    for (std::size_t s = 0; s < in.num_suppliers; ++s) { times(raw_flow_bound(in, s), in.num_plants); }
    for (std::size_t k = 0; k < in.num_plants; ++k) { times(plant_dc_flow_bound(in, k), in.num_dcs); }
    for (std::size_t i = 0; i < in.num_retailers; ++i) { times(in.demand[i], in.num_dcs); }
    return points;
}

// Exhaustive search of the flow lattice inside the decode bounds. Demand
// equality holds within grid_step / 2; every other constraint uses the
// default relative tolerance. Shipment points that miss demand are skipped
// up front, so the violation reported on failure is the smallest among
// lattice points that meet demand. Ties go to the lexicographically smallest
// plan in (raw, plant-dc, dc-retailer) row-major order.
inline OracleResult brute_force_optimum(NetworkInstance const& in, double grid_step = 1.0)
{
    if (auto const report = validate_instance(in); !report.ok()) {
        throw Error("invalid instance: " + report.issues.front().field + " " + report.issues.front().message);
    }
    if (double const points = lattice_size(in, grid_step); points > kMaxLatticePoints) {
        throw SearchSpaceTooLarge(points);
    }
    auto const S = in.num_suppliers;
    auto const K = in.num_plants;
    auto const J = in.num_dcs;
    auto const I = in.num_retailers;
    double const u = in.utilization;
    double const tol = kDefaultTolerance;

    std::vector<std::vector<double>> levels;

    // Shipments, filtered to those meeting demand.
    levels.clear();
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < I; ++i) { levels.push_back(detail::lattice_levels(in.demand[i], grid_step)); }
    }
    std::vector<detail::ShipmentPoint> shipments;
    detail::enumerate_block(levels, [&](std::vector<double> const& t) {
        for (std::size_t i = 0; i < I; ++i) {
            double delivered = 0.0;
            for (std::size_t j = 0; j < J; ++j) { delivered += t[j * I + i]; }
            if (std::abs(delivered - in.demand[i]) > 0.5 * grid_step) { return; }
        }
        detail::ShipmentPoint pt{t, std::vector<double>(J, 0.0)};
        for (std::size_t j = 0; j < J; ++j) {
            for (std::size_t i = 0; i < I; ++i) {
                pt.per_dc[j] += t[j * I + i];
                pt.cost += in.dc_retailer_unit_cost(j, i) * t[j * I + i];
            }
            pt.total += pt.per_dc[j];
        }
        shipments.push_back(std::move(pt));
    });

    levels.clear();
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < J; ++j) { levels.push_back(detail::lattice_levels(plant_dc_flow_bound(in, k), grid_step)); }
    }
    std::vector<detail::ProductionPoint> productions;
    detail::enumerate_block(levels, [&](std::vector<double> const& p) {
        detail::ProductionPoint pt{p, std::vector<double>(K, 0.0), std::vector<double>(J, 0.0)};
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t j = 0; j < J; ++j) {
                double const q = p[k * J + j];
                pt.per_plant[k] += q;
                pt.per_dc[j] += q;
                pt.cost += (in.plant_dc_unit_cost(k, j) + in.holding_unit_cost[j]) * q;
            }
            pt.total += pt.per_plant[k];
            pt.violation += detail::breach(in.plant_capacity[k] - u * pt.per_plant[k], tol, in.plant_capacity[k]);
        }
        productions.push_back(std::move(pt));
    });

    levels.clear();
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t k = 0; k < K; ++k) { levels.push_back(detail::lattice_levels(raw_flow_bound(in, s), grid_step)); }
    }

    double const storage_gap = detail::sum(in.dc_capacity) - detail::sum(in.demand);
    double const base_violation = detail::breach(storage_gap, tol, detail::sum(in.dc_capacity));

    double best_cost = std::numeric_limits<double>::infinity();
    double min_violation = std::numeric_limits<double>::infinity();
    detail::RawPoint const* best_raw = nullptr;
    detail::ProductionPoint const* best_prod = nullptr;
    detail::ShipmentPoint const* best_ship = nullptr;
    detail::RawPoint raw, best_raw_copy;

    detail::enumerate_block(levels, [&](std::vector<double> const& r) {
        raw.flow = r;
        raw.per_plant.assign(K, 0.0);
        raw.cost = 0.0;
        raw.violation = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            double shipped = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                shipped += r[s * K + k];
                raw.per_plant[k] += r[s * K + k];
                raw.cost += in.raw_unit_cost[s] * r[s * K + k];
            }
            raw.violation += detail::breach(in.supplier_capacity[s] - shipped, tol, in.supplier_capacity[s]);
        }
        for (auto const& prod : productions) {
            double v_rp = base_violation + raw.violation + prod.violation;
            for (std::size_t k = 0; k < K; ++k) {
                v_rp += detail::breach(raw.per_plant[k] - u * prod.per_plant[k], tol, raw.per_plant[k]);
            }
            double const cost_rp = raw.cost + prod.cost;
            for (auto const& ship : shipments) {
                double v = v_rp + detail::breach(prod.total - ship.total, tol, ship.total);
                if (in.strict_per_dc) {
                    for (std::size_t j = 0; j < J; ++j) {
                        v += detail::breach(in.dc_capacity[j] - prod.per_dc[j], tol, in.dc_capacity[j]);
                        v += detail::breach(prod.per_dc[j] - ship.per_dc[j], tol, ship.per_dc[j]);
                    }
                }
                min_violation = std::min(min_violation, v);
                if (v != 0.0) { continue; }
                double const cost = cost_rp + ship.cost;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_raw_copy = raw;
                    best_raw = &best_raw_copy;
                    best_prod = &prod;
                    best_ship = &ship;
                }
            }
        }
    });

    if (!best_raw) {
        throw NoFeasibleLatticePoint(min_violation);
    }
    OracleResult result{FlowPlan::zeros(in), 0.0};
    result.plan.raw_flow.values() = best_raw->flow;
    result.plan.plant_dc_flow.values() = best_prod->flow;
    result.plan.dc_retailer_flow.values() = best_ship->flow;
    result.cost = evaluate_cost(in, result.plan).total;
    return result;
}

// Closed-form optimum of the 1x1x1x1 chain: every flow binds at demand.
inline double single_chain_optimum(NetworkInstance const& in)
{
    if (in.num_suppliers != 1 || in.num_plants != 1 || in.num_dcs != 1 || in.num_retailers != 1) {
        throw TopologyError("single_chain_optimum needs exactly one entity per echelon");
    }
    double const d = in.demand[0];
    double const u = in.utilization;
    if (d > in.dc_capacity[0] || u * d > in.plant_capacity[0] || u * d > in.supplier_capacity[0]) {
        throw InfeasibleCapacities("capacities cannot carry the demand");
    }
    return d * (u * in.raw_unit_cost[0] + in.plant_dc_unit_cost(0, 0) + in.holding_unit_cost[0]
                + in.dc_retailer_unit_cost(0, 0));
}

// Capacity-free relaxation. With per-DC balance every case follows one
// supplier-plant-DC-retailer path. Without it only total production has to
// cover total shipments, so the inbound and outbound legs may use different
// DCs and are minimized separately.
inline double lower_bound(NetworkInstance const& in)
{
    double const cheapest_raw = *std::min_element(in.raw_unit_cost.begin(), in.raw_unit_cost.end());
    auto inbound = [&](std::size_t j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < in.num_plants; ++k) {
            best = std::min(best, in.utilization * cheapest_raw + in.plant_dc_unit_cost(k, j) + in.holding_unit_cost[j]);
        }
        return best;
    };
    double any_inbound = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < in.num_dcs; ++j) { any_inbound = std::min(any_inbound, inbound(j)); }

    double bound = 0.0;
    for (std::size_t i = 0; i < in.num_retailers; ++i) {
        double cheapest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < in.num_dcs; ++j) {
            double const upstream = in.strict_per_dc ? inbound(j) : any_inbound;
            cheapest = std::min(cheapest, upstream + in.dc_retailer_unit_cost(j, i));
        }
        bound += in.demand[i] * cheapest;
    }
    return bound;
}

} // namespace scnet
