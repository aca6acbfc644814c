// Command-line front end: solve, check, audit, compare, oracle, scenario.
//
// Exit codes: 0 success, 1 infeasible or no result, 2 input error,
// 3 oracle refused (search space too large).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "scnet/exact_oracle.hpp"
#include "scnet/io.hpp"
#include "scnet/network_model.hpp"
#include "scnet/nsga2.hpp"
#include "scnet/scenario_lab.hpp"

namespace {

enum ExitCode : int { kOk = 0, kNoResult = 1, kInputError = 2, kRefused = 3 };

void print_plan(scnet::FlowPlan const& plan)
{
    auto dump = [](char const* name, scnet::Matrix const& m) {
        std::cout << name << " (" << m.rows() << "x" << m.cols() << ")\n";
        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::cout << " ";
            for (std::size_t c = 0; c < m.cols(); ++c) { std::printf(" %12.4f", m(r, c)); }
            std::cout << "\n";
        }
    };
    dump("raw_flow", plan.raw_flow);
    dump("plant_dc_flow", plan.plant_dc_flow);
    dump("dc_retailer_flow", plan.dc_retailer_flow);
}

void print_audit(scnet::ScheduleAudit const& audit, scnet::ScheduleTable const& table)
{
    std::cout << "plant totals:";
    for (std::size_t k = 0; k < audit.plant_totals.size(); ++k) {
        std::cout << "  " << table.column_labels.at(k) << "=" << audit.plant_totals[k];
    }
    std::cout << "\nDC totals:";
    for (std::size_t j = 0; j < audit.dc_totals.size(); ++j) {
        std::cout << "  " << table.row_labels.at(j) << "=" << audit.dc_totals[j];
    }
    std::cout << "\ngrand total: " << audit.grand_total_by_rows << " (rows), " << audit.grand_total_by_columns
              << " (columns)\n";
    if (audit.breaches.empty()) {
        std::cout << "no capacity breaches\n";
    }
    for (auto const& b : audit.breaches) {
        std::printf("breach: %s total %lld exceeds capacity %.0f (utilization threshold %.4f)\n", b.label.c_str(),
                    static_cast<long long>(b.total), b.capacity, b.utilization_threshold);
    }
}

int run_solve(std::string const& path, scnet::SolverConfig const& config, std::string const& out,
              std::string const& trace)
{
    auto const instance = scnet::load_instance_file(path);
    auto const result = scnet::solve(instance, config);
    if (!out.empty()) { scnet::save_result(result, out); }
    if (!trace.empty()) { scnet::emit_trace(result, trace); }

    std::cout << "generations: " << result.generations_run << " (" << scnet::to_string(result.terminated_by) << ")\n";
    if (!result.best_feasible) {
        double min_violation = result.final_front.empty() ? 0.0 : result.final_front.front().objectives.violation;
        std::printf("no feasible plan found; smallest violation %.6g\n", min_violation);
        return kNoResult;
    }
    auto const& c = result.best_feasible->cost;
    std::printf("best feasible cost: %.2f\n  raw %.2f | plant->dc %.2f | holding %.2f | dc->retailer %.2f\n",
                c.total, c.raw_cost, c.plant_to_dc_cost, c.holding_cost, c.dc_to_retailer_cost);
    return kOk;
}

int run_check(std::string const& path)
{
    try {
        auto const instance = scnet::load_instance_file(path);
        std::cout << "ok: " << instance.num_suppliers << " suppliers, " << instance.num_plants << " plants, "
                  << instance.num_dcs << " DCs, " << instance.num_retailers << " retailers\n";
        return kOk;
    } catch (scnet::InstanceError const& e) {
        for (auto const& p : e.problems()) { std::cout << p << "\n"; }
        return kInputError;
    }
}

int run_audit(std::string const& path, std::string const& scenario, bool strict, bool as_json)
{
    auto const table = scnet::parse_schedule_csv(scnet::read_file(path));
    auto const bundle = scnet::build_scenario(scenario);
    auto const audit = scnet::check_schedule(table, bundle.spec, strict);
    if (as_json) {
        std::cout << scnet::audit_to_json(audit).dump(2) << "\n";
    } else {
        print_audit(audit, table);
    }
    return kOk;
}

int run_compare(std::string const& a, std::string const& b, std::string const& scenario_a,
                std::string const& scenario_b, bool as_json)
{
    auto audit = [](std::string const& path, std::string const& scenario) {
        return scnet::check_schedule(scnet::parse_schedule_csv(scnet::read_file(path)),
                                     scnet::build_scenario(scenario).spec);
    };
    auto const rep = scnet::compare_scenarios(audit(a, scenario_a), audit(b, scenario_b));
    if (as_json) {
        std::cout << scnet::comparison_to_json(rep).dump(2) << "\n";
        return kOk;
    }
    std::cout << "old total: " << rep.old_total << "\nnew total: " << rep.new_total << "\nchange: " << rep.change << "\n";
    if (rep.percent_of_new) {
        std::printf("change / new: %.2f%%\n", *rep.percent_of_new);
    } else {
        std::cout << "change / new: undefined (new total is 0)\n";
    }
    if (rep.percent_of_old) {
        std::printf("change / old: %.2f%%\n", *rep.percent_of_old);
    } else {
        std::cout << "change / old: undefined (old total is 0)\n";
    }
    return kOk;
}

int run_oracle(std::string const& path, double grid)
{
    auto const instance = scnet::load_instance_file(path);
    try {
        auto const best = scnet::brute_force_optimum(instance, grid);
        std::printf("optimum cost: %.6f\nlower bound: %.6f\n", best.cost, scnet::lower_bound(instance));
        print_plan(best.plan);
        return kOk;
    } catch (scnet::SearchSpaceTooLarge const& e) {
        std::printf("refused: search space has %.6g lattice points (limit 1e8)\n", e.points());
        return kRefused;
    } catch (scnet::NoFeasibleLatticePoint const& e) {
        std::printf("no feasible lattice point; smallest violation %.6g\n", e.min_violation());
        return kNoResult;
    }
}

int run_scenario(std::string const& name, std::string const& dir)
{
    auto const bundle = scnet::build_scenario(name);
    std::filesystem::path const out(dir);
    std::filesystem::create_directories(out);
    scnet::write_file_atomic(out / (name + ".instance.json"), scnet::save_instance(bundle.instance));
    scnet::write_file_atomic(out / bundle.table_file, scnet::format_schedule_csv(bundle.published_schedule));
    scnet::json meta = {
        {"name", name},
        {"plant_capacities", bundle.spec.plant_capacities},
        {"dc_capacities", bundle.spec.dc_capacities},
        {"notes", bundle.spec.notes},
        {"table", bundle.table_file},
        {"published_weekly_cost_tzs", bundle.published_weekly_cost},
    };
    scnet::write_file_atomic(out / (name + ".scenario.json"), meta.dump(2) + "\n");
    std::cout << "wrote " << name << ".instance.json, " << bundle.table_file << ", " << name
              << ".scenario.json to " << out.string() << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Production-distribution network planner"};
    app.require_subcommand(1);

    scnet::SolverConfig config;
    std::string instance_path, out_path, trace_path;
    auto* solve = app.add_subcommand("solve", "Run NSGA-II on an instance");
    solve->add_option("instance", instance_path, "Instance JSON")->required();
    solve->add_option("--seed", config.seed, "Random seed");
    solve->add_option("--generations", config.max_generations, "Maximum generations");
    solve->add_option("--population", config.population_size, "Population size");
    solve->add_option("--crossover", config.crossover_prob, "Crossover probability");
    solve->add_option("--mutation", config.mutation_prob, "Per-gene mutation probability");
    solve->add_option("--out", out_path, "Write result JSON here");
    solve->add_option("--trace", trace_path, "Write convergence trace CSV here");

    auto* check = app.add_subcommand("check", "Validate an instance");
    check->add_option("instance", instance_path, "Instance JSON")->required();

    std::string table_path, scenario_name;
    bool strict = false;
    bool as_json = false;
    auto* audit = app.add_subcommand("audit", "Audit a schedule table against a scenario");
    audit->add_option("table", table_path, "Schedule CSV")->required();
    audit->add_option("--scenario", scenario_name, "Scenario name")->required();
    audit->add_flag("--strict-per-dc", strict, "Also check each DC row against its capacity");
    audit->add_flag("--json", as_json, "Print the audit as JSON");

    std::string table_b, scenario_a, scenario_b;
    auto* compare = app.add_subcommand("compare", "Compare total production of two schedules");
    compare->add_option("table_a", table_path, "Older schedule CSV")->required();
    compare->add_option("table_b", table_b, "Newer schedule CSV")->required();
    compare->add_option("--scenario-a", scenario_a, "Scenario of the older table")->required();
    compare->add_option("--scenario-b", scenario_b, "Scenario of the newer table")->required();
    compare->add_flag("--json", as_json, "Print the report as JSON");

    double grid = 1.0;
    auto* oracle = app.add_subcommand("oracle", "Brute-force optimum of a tiny instance");
    oracle->add_option("instance", instance_path, "Instance JSON")->required();
    oracle->add_option("--grid", grid, "Lattice step")->check(CLI::PositiveNumber);

    std::string emit_dir;
    auto* scenario = app.add_subcommand("scenario", "Write a scenario's instance template and fixtures");
    scenario->add_option("name", scenario_name, "baseline | dc_expansion | network_expansion")->required();
    scenario->add_option("--emit", emit_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        return app.exit(e) == 0 ? kOk : kInputError;
    }

    try {
        if (*solve) { return run_solve(instance_path, config, out_path, trace_path); }
        if (*check) { return run_check(instance_path); }
        if (*audit) { return run_audit(table_path, scenario_name, strict, as_json); }
        if (*compare) { return run_compare(table_path, table_b, scenario_a, scenario_b, as_json); }
        if (*oracle) { return run_oracle(instance_path, grid); }
        if (*scenario) { return run_scenario(scenario_name, emit_dir); }
    } catch (scnet::Error const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
