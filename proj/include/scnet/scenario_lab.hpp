#pragma once

// The three SBC Tanzania network configurations, their published daily
// production schedules, and the arithmetic used to audit those schedules.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "scnet/errors.hpp"
#include "scnet/network_model.hpp"

namespace scnet {

enum class ScenarioName { baseline, dc_expansion, network_expansion };

class UnknownScenario : public Error {
public:
    using Error::Error;
};

inline ScenarioName parse_scenario_name(std::string_view name)
{
    if (name == "baseline") { return ScenarioName::baseline; }
    if (name == "dc_expansion") { return ScenarioName::dc_expansion; }
    if (name == "network_expansion") { return ScenarioName::network_expansion; }
    throw UnknownScenario("unknown scenario '" + std::string(name)
                          + "' (expected baseline, dc_expansion or network_expansion)");
}

inline std::string to_string(ScenarioName name)
{
    switch (name) {
    case ScenarioName::baseline: return "baseline";
    case ScenarioName::dc_expansion: return "dc_expansion";
    case ScenarioName::network_expansion: return "network_expansion";
    }
    return "?";
}

struct ScenarioSpec {
    ScenarioName name = ScenarioName::baseline;
    std::vector<double> plant_capacities;
    std::vector<double> dc_capacities;
    std::string notes;
};

// Cases shipped per day, rows are DCs and columns are plants.
struct ScheduleTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<std::int64_t>> cases;

    friend bool operator==(ScheduleTable const&, ScheduleTable const&) = default;
};

struct ScenarioBundle {
    ScenarioSpec spec;
    NetworkInstance instance;         // synthetic demand and unit costs
    ScheduleTable published_schedule; // the table reported for this configuration
    std::string table_file;           // bundled fixture name
    double published_weekly_cost = 0.0; // TZS, reference metadata only
};

enum class EntityKind { plant, dc };

struct CapacityBreach {
    EntityKind kind = EntityKind::plant;
    std::size_t index = 0;
    std::string label;
    std::int64_t total = 0;
    double capacity = 0.0;
    // Largest utilization factor u with u * total <= capacity.
    double utilization_threshold = 0.0;

    friend bool operator==(CapacityBreach const&, CapacityBreach const&) = default;
};

struct ScheduleAudit {
    std::vector<std::int64_t> plant_totals;
    std::vector<std::int64_t> dc_totals;
    std::int64_t grand_total_by_rows = 0;
    std::int64_t grand_total_by_columns = 0;
    std::vector<CapacityBreach> breaches;

    friend bool operator==(ScheduleAudit const&, ScheduleAudit const&) = default;
};

struct ComparisonReport {
    std::int64_t old_total = 0;
    std::int64_t new_total = 0;
    std::int64_t change = 0;
    // (new - old) / new in percent; absent when new total is 0.
    std::optional<double> percent_of_new;
    // (new - old) / old in percent; absent when old total is 0.
    std::optional<double> percent_of_old;
};

namespace detail {

    inline ScheduleTable make_table(std::size_t dcs, std::size_t plants,
                                    std::vector<std::vector<std::int64_t>> cases)
    {
        ScheduleTable t;
        for (std::size_t j = 1; j <= dcs; ++j) { t.row_labels.push_back("DC " + std::to_string(j)); }
        for (std::size_t k = 1; k <= plants; ++k) { t.column_labels.push_back("Plant " + std::to_string(k)); }
        t.cases = std::move(cases);
        return t;
    }

    // Reported as printed; the network expansion table lists DC 5 before
    // DC 4, stored here in label order.
    inline ScheduleTable published_table(ScenarioName name)
    {
        switch (name) {
        case ScenarioName::baseline:
            return make_table(4, 4, {
                {315, 0, 0, 11196},
                {0, 4949, 8964, 0},
                {10474, 0, 0, 1897},
                {0, 5932, 6766, 0},
            });
        case ScenarioName::dc_expansion:
            return make_table(4, 4, {
                {4257, 0, 0, 10253},
                {7363, 0, 745, 6363},
                {1670, 8753, 0, 4572},
                {0, 3427, 11155, 0},
            });
        case ScenarioName::network_expansion:
            return make_table(8, 7, {
                {800, 0, 0, 11364, 0, 2452, 0},
                {0, 0, 4215, 0, 6021, 0, 4750},
                {5688, 3061, 4535, 1074, 0, 0, 0},
                {0, 0, 0, 5800, 0, 2944, 6167},
                {2133, 6438, 800, 4957, 0, 0, 0},
                {0, 4990, 644, 0, 5717, 0, 3482},
                {0, 0, 0, 6632, 0, 7452, 0},
                {6128, 0, 4086, 0, 3111, 1669, 0},
            });
        }
        throw UnknownScenario("unknown scenario");
    }

    struct Point {
        double x;
        double y;
    };

    // Entity sites on a 100 x 100 map, drawn from raw engine output so the
    // layout does not depend on the standard library's distributions.
    inline std::vector<Point> sites(std::mt19937_64& engine, std::size_t n)
    {
        std::vector<Point> pts(n);
        for (auto& p : pts) {
            p.x = static_cast<double>(engine() % 10001) / 100.0;
            p.y = static_cast<double>(engine() % 10001) / 100.0;
        }
        return pts;
    }

    inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

    // Unit costs grow linearly with map distance and are rounded to whole
    // currency units.
    inline NetworkInstance synthetic_instance(ScenarioSpec const& spec, std::vector<double> supplier_capacity,
                                              std::vector<double> demand, std::uint64_t layout_seed)
    {
        constexpr double utilization = 0.95;
        NetworkInstance in;
        in.num_suppliers = supplier_capacity.size();
        in.num_plants = spec.plant_capacities.size();
        in.num_dcs = spec.dc_capacities.size();
        in.num_retailers = demand.size();
        in.supplier_capacity = std::move(supplier_capacity);
        in.plant_capacity = spec.plant_capacities;
        in.dc_capacity = spec.dc_capacities;
        in.demand = std::move(demand);
        in.utilization = utilization;

        std::mt19937_64 engine(layout_seed);
        auto const suppliers = sites(engine, in.num_suppliers);
        auto const plants = sites(engine, in.num_plants);
        auto const dcs = sites(engine, in.num_dcs);
        auto const retailers = sites(engine, in.num_retailers);

        Point centre{0.0, 0.0};
        for (auto p : plants) {
            centre.x += p.x / static_cast<double>(plants.size());
            centre.y += p.y / static_cast<double>(plants.size());
        }
        for (auto s : suppliers) { in.raw_unit_cost.push_back(std::round(40.0 + 0.3 * distance(s, centre))); }
        for (std::size_t j = 0; j < in.num_dcs; ++j) {
            in.holding_unit_cost.push_back(static_cast<double>(3 + engine() % 5));
        }
        in.plant_dc_unit_cost = Matrix(in.num_plants, in.num_dcs);
        for (std::size_t k = 0; k < in.num_plants; ++k) {
            for (std::size_t j = 0; j < in.num_dcs; ++j) {
                in.plant_dc_unit_cost(k, j) = std::round(5.0 + 0.25 * distance(plants[k], dcs[j]));
            }
        }
        in.dc_retailer_unit_cost = Matrix(in.num_dcs, in.num_retailers);
        for (std::size_t j = 0; j < in.num_dcs; ++j) {
            for (std::size_t i = 0; i < in.num_retailers; ++i) {
                in.dc_retailer_unit_cost(j, i) = std::round(8.0 + 0.35 * distance(dcs[j], retailers[i]));
            }
        }
        return in;
    }

} // namespace detail

inline ScenarioBundle build_scenario(ScenarioName name)
{
    ScenarioBundle b;
    b.spec.name = name;
    b.published_schedule = detail::published_table(name);
    // Regional demand shared by the two four-plant configurations, 47,500
    // cases in total so that it fits the baseline's 48,000 cases of storage.
    std::vector<double> const regional_demand{5200, 4300, 4800, 5100, 4400, 4700, 4900, 4600, 4500, 5000};
    std::string const synthetic_note =
        " Demand, supplier capacities and unit costs are synthetic: sites are placed on a 100x100 map"
        " from a fixed seed and unit costs grow linearly with distance; utilization is 0.95.";

    switch (name) {
    case ScenarioName::baseline:
        b.spec.plant_capacities = {12800, 12000, 25600, 12800};
        b.spec.dc_capacities = {12000, 12000, 12000, 12000};
        b.spec.notes = "Current network: four plants and four 12,000-case DCs." + synthetic_note;
        b.table_file = "table1.csv";
        b.published_weekly_cost = 43834900.0;
        b.instance = detail::synthetic_instance(b.spec, {16000, 14000, 12000, 10000, 8000}, regional_demand, 2013);
        break;
    case ScenarioName::dc_expansion:
        b.spec.plant_capacities = {12800, 12000, 25600, 12800};
        b.spec.dc_capacities = {15000, 15000, 15000, 15000};
        b.spec.notes = "DC storage raised to 15,000 cases each; plants and customers unchanged." + synthetic_note;
        b.table_file = "table2.csv";
        b.published_weekly_cost = 43100800.0;
        b.instance = detail::synthetic_instance(b.spec, {16000, 14000, 12000, 10000, 8000}, regional_demand, 2013);
        break;
    case ScenarioName::network_expansion: {
        b.spec.plant_capacities = {15000, 15000, 15000, 30000, 15000, 15000, 15000};
        b.spec.dc_capacities = std::vector<double>(8, 15000);
        b.spec.notes = "Seven plants (one at 30,000 cases) and eight 15,000-case DCs. Demand is not a limit"
                       " here, so each of the 16 regions demands an equal share of the most the network can"
                       " carry." + synthetic_note;
        b.table_file = "table3.csv";
        b.published_weekly_cost = 114660000.0;
        constexpr std::size_t regions = 16;
        b.instance = detail::synthetic_instance(b.spec, std::vector<double>(5, 45000), std::vector<double>(regions, 1.0), 2013);
        double const share = reachable_throughput(b.instance) / static_cast<double>(regions);
        b.instance.demand.assign(regions, share);
        break;
    }
    }
    return b;
}

inline ScenarioBundle build_scenario(std::string_view name)
{
    return build_scenario(parse_scenario_name(name));
}

// Column totals are checked against plant capacity, and with strict_per_dc
// row totals against DC capacity as well.
inline ScheduleAudit check_schedule(ScheduleTable const& table, ScenarioSpec const& spec, bool strict_per_dc = false)
{
    auto const J = spec.dc_capacities.size();
    auto const K = spec.plant_capacities.size();
    if (table.cases.size() != J) {
        throw DimensionError("table has " + std::to_string(table.cases.size()) + " DC rows, scenario has "
                             + std::to_string(J));
    }
    for (auto const& row : table.cases) {
        if (row.size() != K) {
            throw DimensionError("table row has " + std::to_string(row.size()) + " plant columns, scenario has "
                                 + std::to_string(K));
        }
    }
    auto label = [](std::vector<std::string> const& labels, std::size_t n, char const* fallback) {
        return n < labels.size() ? labels[n] : std::string(fallback) + " " + std::to_string(n + 1);
    };

    ScheduleAudit audit;
    audit.plant_totals.assign(K, 0);
    audit.dc_totals.assign(J, 0);
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < K; ++k) {
            if (table.cases[j][k] < 0) { throw FormatError("schedule entries must be non-negative"); }
            audit.dc_totals[j] += table.cases[j][k];
            audit.plant_totals[k] += table.cases[j][k];
        }
    }
    for (auto t : audit.dc_totals) { audit.grand_total_by_rows += t; }
    for (auto t : audit.plant_totals) { audit.grand_total_by_columns += t; }

    auto flag = [&](EntityKind kind, std::size_t n, std::string name, std::int64_t total, double capacity) {
        if (static_cast<double>(total) > capacity) {
            audit.breaches.push_back({kind, n, std::move(name), total, capacity, capacity / static_cast<double>(total)});
        }
    };
    for (std::size_t k = 0; k < K; ++k) {
        flag(EntityKind::plant, k, label(table.column_labels, k, "Plant"), audit.plant_totals[k], spec.plant_capacities[k]);
    }
    if (strict_per_dc) {
        for (std::size_t j = 0; j < J; ++j) {
            flag(EntityKind::dc, j, label(table.row_labels, j, "DC"), audit.dc_totals[j], spec.dc_capacities[j]);
        }
    }
    return audit;
}

inline ComparisonReport compare_scenarios(ScheduleAudit const& old_audit, ScheduleAudit const& new_audit)
{
    for (auto const* a : {&old_audit, &new_audit}) {
        if (a->grand_total_by_rows != a->grand_total_by_columns) {
            throw Error("audit row and column totals disagree");
        }
    }
    ComparisonReport rep;
    rep.old_total = old_audit.grand_total_by_rows;
    rep.new_total = new_audit.grand_total_by_rows;
    rep.change = rep.new_total - rep.old_total;
    if (rep.new_total != 0) {
        rep.percent_of_new = 100.0 * static_cast<double>(rep.change) / static_cast<double>(rep.new_total);
    }
    if (rep.old_total != 0) {
        rep.percent_of_old = 100.0 * static_cast<double>(rep.change) / static_cast<double>(rep.old_total);
    }
    return rep;
}

} // namespace scnet
