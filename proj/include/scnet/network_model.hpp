#pragma once

// Four-echelon production-distribution network: suppliers (s) ship raw
// material to plants (k), plants ship cases to distribution centers (j),
// distribution centers ship cases to retailers (i).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "scnet/errors.hpp"
#include "scnet/matrix.hpp"

namespace scnet {

inline constexpr double kDefaultTolerance = 1e-9;

struct NetworkInstance {
    std::size_t num_suppliers = 0;
    std::size_t num_plants = 0;
    std::size_t num_dcs = 0;
    std::size_t num_retailers = 0;

    std::vector<double> supplier_capacity;  // C_s
    std::vector<double> plant_capacity;     // D_k
    std::vector<double> dc_capacity;        // H_j
    std::vector<double> demand;             // d_i
    std::vector<double> raw_unit_cost;      // c_s
    std::vector<double> holding_unit_cost;  // h_j
    Matrix plant_dc_unit_cost;              // c_kj, plants x dcs
    Matrix dc_retailer_unit_cost;           // r_ji, dcs x retailers

    // Raw-material units consumed per case produced.
    double utilization = 1.0;

    // Check DC storage and DC flow balance per DC instead of network-wide.
    bool strict_per_dc = false;

    friend bool operator==(NetworkInstance const&, NetworkInstance const&) = default;
};

struct FlowPlan {
    Matrix raw_flow;          // r_sk, suppliers x plants
    Matrix plant_dc_flow;     // p_kj, plants x dcs
    Matrix dc_retailer_flow;  // t_ji, dcs x retailers

    static FlowPlan zeros(NetworkInstance const& instance)
    {
        return FlowPlan{
            Matrix(instance.num_suppliers, instance.num_plants),
            Matrix(instance.num_plants, instance.num_dcs),
            Matrix(instance.num_dcs, instance.num_retailers),
        };
    }

    FlowPlan& operator*=(double alpha) noexcept
    {
        raw_flow *= alpha;
        plant_dc_flow *= alpha;
        dc_retailer_flow *= alpha;
        return *this;
    }
    FlowPlan& operator+=(FlowPlan const& other)
    {
        raw_flow += other.raw_flow;
        plant_dc_flow += other.plant_dc_flow;
        dc_retailer_flow += other.dc_retailer_flow;
        return *this;
    }
    friend FlowPlan operator*(double alpha, FlowPlan p) noexcept { return p *= alpha; }
    friend FlowPlan operator+(FlowPlan a, FlowPlan const& b) { return a += b; }

    friend bool operator==(FlowPlan const&, FlowPlan const&) = default;
};

struct CostBreakdown {
    double raw_cost = 0.0;
    double plant_to_dc_cost = 0.0;
    double holding_cost = 0.0;
    double dc_to_retailer_cost = 0.0;
    double total = 0.0;

    friend bool operator==(CostBreakdown const&, CostBreakdown const&) = default;
};

// Residuals are oriented so that a negative value is a breach, except
// demand_mismatch which must be zero.
struct ConstraintReport {
    double residual_dc_storage = 0.0;               // sum H_j - sum d_i
    double residual_production_vs_shipment = 0.0;   // sum p_kj - sum t_ji
    std::vector<double> demand_mismatch;            // sum_j t_ji - d_i
    std::vector<double> residual_raw_per_plant;     // sum_s r_sk - u * sum_j p_kj
    std::vector<double> residual_plant_capacity;    // D_k - u * sum_j p_kj
    std::vector<double> residual_supplier_capacity; // C_s - sum_k r_sk

    // Only filled when the instance asks for strict_per_dc.
    std::vector<double> residual_dc_inbound;        // H_j - sum_k p_kj
    std::vector<double> residual_dc_balance;        // sum_k p_kj - sum_i t_ji

    double total_violation = 0.0;

    friend bool operator==(ConstraintReport const&, ConstraintReport const&) = default;
};

struct ValidationIssue {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    [[nodiscard]] bool ok() const noexcept { return issues.empty(); }
};

namespace detail {

    inline double sum(std::vector<double> const& v)
    {
        return std::accumulate(v.begin(), v.end(), 0.0);
    }

    inline bool shape_consistent(NetworkInstance const& in)
    {
        return in.supplier_capacity.size() == in.num_suppliers
            && in.raw_unit_cost.size() == in.num_suppliers
            && in.plant_capacity.size() == in.num_plants
            && in.dc_capacity.size() == in.num_dcs
            && in.holding_unit_cost.size() == in.num_dcs
            && in.demand.size() == in.num_retailers
            && in.plant_dc_unit_cost.has_shape(in.num_plants, in.num_dcs)
            && in.dc_retailer_unit_cost.has_shape(in.num_dcs, in.num_retailers);
    }

    inline void require_shapes(NetworkInstance const& in, FlowPlan const& plan)
    {
        if (!shape_consistent(in)) {
            throw DimensionError("instance arrays disagree with its counts");
        }
        if (!plan.raw_flow.has_shape(in.num_suppliers, in.num_plants)) {
            throw DimensionError("raw_flow must be suppliers x plants");
        }
        if (!plan.plant_dc_flow.has_shape(in.num_plants, in.num_dcs)) {
            throw DimensionError("plant_dc_flow must be plants x dcs");
        }
        if (!plan.dc_retailer_flow.has_shape(in.num_dcs, in.num_retailers)) {
            throw DimensionError("dc_retailer_flow must be dcs x retailers");
        }
    }

    // Breach threshold for a residual whose constraint right-hand side is rhs.
    inline double slack(double tolerance, double rhs)
    {
        return tolerance * std::max(1.0, std::abs(rhs));
    }

} // namespace detail

// Report-style check: never throws, lists every problem it finds.
inline ValidationReport validate_instance(NetworkInstance const& in)
{
    ValidationReport report;
    auto add = [&](std::string field, std::string message) {
        report.issues.push_back({std::move(field), std::move(message)});
    };

    auto count = [&](char const* name, std::size_t n) {
        if (n == 0) { add(name, "count must be at least 1"); }
    };
    count("counts.suppliers", in.num_suppliers);
    count("counts.plants", in.num_plants);
    count("counts.dcs", in.num_dcs);
    count("counts.retailers", in.num_retailers);

    auto vec = [&](char const* name, std::vector<double> const& v, std::size_t expected) {
        if (v.size() != expected) {
            add(name, "has " + std::to_string(v.size()) + " entries, expected " + std::to_string(expected));
        }
        for (std::size_t n = 0; n < v.size(); ++n) {
            if (!std::isfinite(v[n])) {
                add(name, "entry " + std::to_string(n) + " is not finite");
            } else if (v[n] < 0.0) {
                add(name, "entry " + std::to_string(n) + " is negative");
            }
        }
    };
    vec("supplier_capacity", in.supplier_capacity, in.num_suppliers);
    vec("plant_capacity", in.plant_capacity, in.num_plants);
    vec("dc_capacity", in.dc_capacity, in.num_dcs);
    vec("demand", in.demand, in.num_retailers);
    vec("raw_unit_cost", in.raw_unit_cost, in.num_suppliers);
    vec("holding_unit_cost", in.holding_unit_cost, in.num_dcs);

    auto mat = [&](char const* name, Matrix const& m, std::size_t rows, std::size_t cols) {
        if (!m.has_shape(rows, cols)) {
            add(name, "is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected "
                    + std::to_string(rows) + "x" + std::to_string(cols));
        }
        for (std::size_t n = 0; n < m.size(); ++n) {
            double const v = m.values()[n];
            if (!std::isfinite(v)) {
                add(name, "entry " + std::to_string(n) + " is not finite");
            } else if (v < 0.0) {
                add(name, "entry " + std::to_string(n) + " is negative");
            }
        }
    };
    mat("plant_dc_unit_cost", in.plant_dc_unit_cost, in.num_plants, in.num_dcs);
    mat("dc_retailer_unit_cost", in.dc_retailer_unit_cost, in.num_dcs, in.num_retailers);

    if (!std::isfinite(in.utilization) || !(in.utilization > 0.0)) {
        add("utilization", "must be finite and strictly positive");
    }
    return report;
}

inline CostBreakdown evaluate_cost(NetworkInstance const& in, FlowPlan const& plan)
{
    detail::require_shapes(in, plan);
    CostBreakdown cost;
    for (std::size_t s = 0; s < in.num_suppliers; ++s) {
        for (std::size_t k = 0; k < in.num_plants; ++k) {
            cost.raw_cost += in.raw_unit_cost[s] * plan.raw_flow(s, k);
        }
    }
    for (std::size_t k = 0; k < in.num_plants; ++k) {
        for (std::size_t j = 0; j < in.num_dcs; ++j) {
            cost.plant_to_dc_cost += in.plant_dc_unit_cost(k, j) * plan.plant_dc_flow(k, j);
        }
    }
    // Single period: holding is charged once on everything a DC receives.
    for (std::size_t j = 0; j < in.num_dcs; ++j) {
        double inbound = 0.0;
        for (std::size_t k = 0; k < in.num_plants; ++k) { inbound += plan.plant_dc_flow(k, j); }
        cost.holding_cost += in.holding_unit_cost[j] * inbound;
    }
    for (std::size_t j = 0; j < in.num_dcs; ++j) {
        for (std::size_t i = 0; i < in.num_retailers; ++i) {
            cost.dc_to_retailer_cost += in.dc_retailer_unit_cost(j, i) * plan.dc_retailer_flow(j, i);
        }
    }
    cost.total = cost.raw_cost + cost.plant_to_dc_cost + cost.holding_cost + cost.dc_to_retailer_cost;
    return cost;
}

// Each residual r with right-hand side b is a breach when r < -tolerance * max(1, |b|);
// a breach adds |r| to total_violation.
inline ConstraintReport evaluate_constraints(NetworkInstance const& in, FlowPlan const& plan,
                                             double tolerance = kDefaultTolerance)
{
    detail::require_shapes(in, plan);
    if (!(tolerance >= 0.0)) {
        throw Error("tolerance must be non-negative");
    }
    auto const S = in.num_suppliers;
    auto const K = in.num_plants;
    auto const J = in.num_dcs;
    auto const I = in.num_retailers;
    double const u = in.utilization;

    std::vector<double> shipped(S, 0.0), raw_in(K, 0.0), produced(K, 0.0);
    std::vector<double> dc_in(J, 0.0), dc_out(J, 0.0), delivered(I, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t k = 0; k < K; ++k) {
            shipped[s] += plan.raw_flow(s, k);
            raw_in[k] += plan.raw_flow(s, k);
        }
    }
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < J; ++j) {
            produced[k] += plan.plant_dc_flow(k, j);
            dc_in[j] += plan.plant_dc_flow(k, j);
        }
    }
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < I; ++i) {
            dc_out[j] += plan.dc_retailer_flow(j, i);
            delivered[i] += plan.dc_retailer_flow(j, i);
        }
    }

    ConstraintReport rep;
    double violation = 0.0;
    auto check = [&](double residual, double rhs) {
        if (residual < -detail::slack(tolerance, rhs)) { violation += -residual; }
    };

    double const total_capacity = detail::sum(in.dc_capacity);
    rep.residual_dc_storage = total_capacity - detail::sum(in.demand);
    check(rep.residual_dc_storage, total_capacity);

    double const total_produced = detail::sum(produced);
    double const total_shipped = detail::sum(dc_out);
    rep.residual_production_vs_shipment = total_produced - total_shipped;
    check(rep.residual_production_vs_shipment, total_shipped);

    rep.demand_mismatch.resize(I);
    for (std::size_t i = 0; i < I; ++i) {
        rep.demand_mismatch[i] = delivered[i] - in.demand[i];
        if (std::abs(rep.demand_mismatch[i]) > detail::slack(tolerance, in.demand[i])) {
            violation += std::abs(rep.demand_mismatch[i]);
        }
    }

    rep.residual_raw_per_plant.resize(K);
    rep.residual_plant_capacity.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        rep.residual_raw_per_plant[k] = raw_in[k] - u * produced[k];
        check(rep.residual_raw_per_plant[k], raw_in[k]);
        rep.residual_plant_capacity[k] = in.plant_capacity[k] - u * produced[k];
        check(rep.residual_plant_capacity[k], in.plant_capacity[k]);
    }

    rep.residual_supplier_capacity.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        rep.residual_supplier_capacity[s] = in.supplier_capacity[s] - shipped[s];
        check(rep.residual_supplier_capacity[s], in.supplier_capacity[s]);
    }

    if (in.strict_per_dc) {
        rep.residual_dc_inbound.resize(J);
        rep.residual_dc_balance.resize(J);
        for (std::size_t j = 0; j < J; ++j) {
            rep.residual_dc_inbound[j] = in.dc_capacity[j] - dc_in[j];
            check(rep.residual_dc_inbound[j], in.dc_capacity[j]);
            rep.residual_dc_balance[j] = dc_in[j] - dc_out[j];
            check(rep.residual_dc_balance[j], dc_out[j]);
        }
    }

    rep.total_violation = violation;
    return rep;
}

inline bool is_feasible(ConstraintReport const& report) noexcept
{
    return report.total_violation == 0.0;
}

// Largest aggregate demand that a plan within the solver's decode bounds can
// carry: DC storage, plant capacity, and the per-plant raw share C_s / K.
inline double reachable_throughput(NetworkInstance const& in)
{
    double const raw_share = detail::sum(in.supplier_capacity) / static_cast<double>(in.num_plants);
    double production = 0.0;
    for (double cap : in.plant_capacity) { production += std::min(cap, raw_share); }
    return std::min(detail::sum(in.dc_capacity), production / in.utilization);
}

} // namespace scnet
