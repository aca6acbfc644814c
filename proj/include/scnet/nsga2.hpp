#pragma once

// NSGA-II over the bi-objective (total cost, total constraint violation).
//
// Genotype: a box [0,1]^n with n = S*K + K*J + J*I, laid out as
//   [ raw block (s,k) row-major | plant-dc block (k,j) row-major |
//     allocation block, retailer-major: gene i*J + j weighs DC j for retailer i ]
// Decoding scales the first two blocks by capacity-derived bounds and turns
// the allocation weights into shares of each retailer's demand, so every
// decoded plan meets demand exactly. The capacity constraints are left to
// the violation objective.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "scnet/errors.hpp"
#include "scnet/network_model.hpp"

namespace scnet {

struct SolverConfig {
    std::size_t population_size = 50;
    double crossover_prob = 0.6;
    double mutation_prob = 0.001;
    std::size_t max_generations = 200;
    std::size_t stall_generations = 50;
    double stall_tolerance = 1e-6;
    std::uint64_t seed = 0;
    double sbx_eta = 15.0;
    double pm_eta = 20.0;
};

inline void validate_config(SolverConfig const& c)
{
    if (c.population_size < 4 || c.population_size % 2 != 0) {
        throw ConfigError("population_size must be even and at least 4");
    }
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(c.crossover_prob)) { throw ConfigError("crossover_prob must lie in [0,1]"); }
    if (!prob(c.mutation_prob)) { throw ConfigError("mutation_prob must lie in [0,1]"); }
    if (c.max_generations < 1) { throw ConfigError("max_generations must be at least 1"); }
    if (!(c.stall_tolerance >= 0.0)) { throw ConfigError("stall_tolerance must be non-negative"); }
    if (!(c.sbx_eta >= 0.0) || !(c.pm_eta >= 0.0)) { throw ConfigError("distribution indices must be non-negative"); }
}

// Seeded stream shared by every stochastic decision of a run. Conversions are
// spelled out so a seed reproduces the same run with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n - 1}, n > 0.
    std::size_t index(std::size_t n) noexcept
    {
        return static_cast<std::size_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

struct Chromosome {
    std::vector<double> genes;

    friend bool operator==(Chromosome const&, Chromosome const&) = default;
};

struct Objectives {
    double cost = 0.0;
    double violation = 0.0;

    [[nodiscard]] bool feasible() const noexcept { return violation == 0.0; }
    friend bool operator==(Objectives const&, Objectives const&) = default;
};

struct Individual {
    Chromosome chromosome;
    FlowPlan plan;
    Objectives objectives;
    std::size_t rank = 0;
    double crowding = 0.0;

    friend bool operator==(Individual const&, Individual const&) = default;
};

using Population = std::vector<Individual>;

struct FeasiblePlan {
    FlowPlan plan;
    CostBreakdown cost;

    friend bool operator==(FeasiblePlan const&, FeasiblePlan const&) = default;
};

struct GenerationRecord {
    std::size_t generation = 0;
    std::optional<double> best_feasible_cost;
    double mean_cost = 0.0;
    double min_violation = 0.0;
    std::size_t feasible_count = 0;

    friend bool operator==(GenerationRecord const&, GenerationRecord const&) = default;
};

enum class Termination { max_generations, stall };

struct SolveResult {
    std::optional<FeasiblePlan> best_feasible;
    std::vector<Individual> final_front;
    std::vector<GenerationRecord> trace;
    std::size_t generations_run = 0;
    Termination terminated_by = Termination::max_generations;

    friend bool operator==(SolveResult const&, SolveResult const&) = default;
};

inline std::size_t gene_count(NetworkInstance const& in) noexcept
{
    return in.num_suppliers * in.num_plants + in.num_plants * in.num_dcs + in.num_dcs * in.num_retailers;
}

// Upper bounds of the decoded flows; the exact oracle enumerates the same box.
inline double raw_flow_bound(NetworkInstance const& in, std::size_t s)
{
    return in.supplier_capacity[s] / static_cast<double>(in.num_plants);
}

inline double plant_dc_flow_bound(NetworkInstance const& in, std::size_t k)
{
    return in.plant_capacity[k] / (in.utilization * static_cast<double>(in.num_dcs));
}

inline FlowPlan decode(Chromosome const& c, NetworkInstance const& in)
{
    if (c.genes.size() != gene_count(in)) {
        throw DimensionError("chromosome has " + std::to_string(c.genes.size()) + " genes, instance needs "
                             + std::to_string(gene_count(in)));
    }
    auto const S = in.num_suppliers;
    auto const K = in.num_plants;
    auto const J = in.num_dcs;
    auto const I = in.num_retailers;

    FlowPlan plan = FlowPlan::zeros(in);
    auto g = c.genes.begin();
    for (std::size_t s = 0; s < S; ++s) {
        double const bound = raw_flow_bound(in, s);
        for (std::size_t k = 0; k < K; ++k) { plan.raw_flow(s, k) = *g++ * bound; }
    }
    for (std::size_t k = 0; k < K; ++k) {
        double const bound = plant_dc_flow_bound(in, k);
        for (std::size_t j = 0; j < J; ++j) { plan.plant_dc_flow(k, j) = *g++ * bound; }
    }
    for (std::size_t i = 0; i < I; ++i) {
        double const weight = std::accumulate(g, g + static_cast<std::ptrdiff_t>(J), 0.0);
        for (std::size_t j = 0; j < J; ++j) {
            plan.dc_retailer_flow(j, i) = weight > 0.0 ? in.demand[i] * g[static_cast<std::ptrdiff_t>(j)] / weight
                                                       : in.demand[i] / static_cast<double>(J);
        }
        g += static_cast<std::ptrdiff_t>(J);
    }
    return plan;
}

inline Objectives evaluate(FlowPlan const& plan, NetworkInstance const& in)
{
    return {evaluate_cost(in, plan).total, evaluate_constraints(in, plan).total_violation};
}

inline Individual make_individual(Chromosome c, NetworkInstance const& in)
{
    Individual ind;
    ind.plan = decode(c, in);
    ind.objectives = evaluate(ind.plan, in);
    ind.chromosome = std::move(c);
    return ind;
}

inline Population init_population(NetworkInstance const& in, SolverConfig const& config, Rng& rng)
{
    Population pop;
    pop.reserve(config.population_size);
    auto const n = gene_count(in);
    for (std::size_t p = 0; p < config.population_size; ++p) {
        Chromosome c;
        c.genes.resize(n);
        for (auto& gene : c.genes) { gene = rng.uniform(); }
        pop.push_back(make_individual(std::move(c), in));
    }
    return pop;
}

// Simulated binary crossover. Each gene pair is recombined with probability
// one half; children are clamped to the unit box.
inline std::pair<Chromosome, Chromosome> crossover(Chromosome const& a, Chromosome const& b,
                                                   SolverConfig const& config, Rng& rng)
{
    if (a.genes.size() != b.genes.size()) {
        throw DimensionError("crossover parents differ in length");
    }
    std::pair<Chromosome, Chromosome> children{a, b};
    if (!(rng.uniform() < config.crossover_prob)) {
        return children;
    }
    double const exponent = 1.0 / (config.sbx_eta + 1.0);
    auto& x = children.first.genes;
    auto& y = children.second.genes;
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (rng.uniform() >= 0.5 || x[n] == y[n]) {
            continue;
        }
        double const u = rng.uniform();
        double const beta = u <= 0.5 ? std::pow(2.0 * u, exponent) : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
        double const p1 = x[n];
        double const p2 = y[n];
        x[n] = std::clamp(0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2), 0.0, 1.0);
        y[n] = std::clamp(0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2), 0.0, 1.0);
    }
    return children;
}

// Polynomial mutation on the unit box.
inline Chromosome mutate(Chromosome c, SolverConfig const& config, Rng& rng)
{
    double const exponent = 1.0 / (config.pm_eta + 1.0);
    for (auto& gene : c.genes) {
        if (!(rng.uniform() < config.mutation_prob)) {
            continue;
        }
        double const u = rng.uniform();
        double const delta = u < 0.5 ? std::pow(2.0 * u, exponent) - 1.0 : 1.0 - std::pow(2.0 * (1.0 - u), exponent);
        gene = std::clamp(gene + delta, 0.0, 1.0);
    }
    return c;
}

enum class DominanceMode {
    pareto,       // plain Pareto dominance on (cost, violation)
    constrained,  // feasible beats infeasible; infeasible compare by violation alone
};

inline bool dominates(Objectives const& a, Objectives const& b, DominanceMode mode = DominanceMode::pareto) noexcept
{
    if (mode == DominanceMode::constrained) {
        bool const fa = a.feasible();
        bool const fb = b.feasible();
        if (fa != fb) { return fa; }
        if (!fa) { return a.violation < b.violation; }
    }
    return a.cost <= b.cost && a.violation <= b.violation && (a.cost < b.cost || a.violation < b.violation);
}

// Deb's fast non-dominated sort. Each front is returned in ascending index order.
inline std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<Objectives const> points,
                                                                     DominanceMode mode = DominanceMode::pareto)
{
    for (auto const& p : points) {
        if (!std::isfinite(p.cost) || !std::isfinite(p.violation)) {
            throw Error("non-finite objective value");
        }
    }
    auto const n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) { continue; }
            if (dominates(points[p], points[q], mode)) {
                dominated_by[p].push_back(q);
            } else if (dominates(points[q], points[p], mode)) {
                ++domination_count[p];
            }
        }
        if (domination_count[p] == 0) { current.push_back(p); }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto p : current) {
            for (auto q : dominated_by[p]) {
                if (--domination_count[q] == 0) { next.push_back(q); }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

inline std::vector<double> crowding_distance(std::span<Objectives const> front)
{
    auto const n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    std::vector<std::size_t> order(n);
    auto accumulate = [&](auto value) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return value(front[a]) < value(front[b]); });
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        double const range = value(front[order.back()]) - value(front[order.front()]);
        if (range <= 0.0) { return; }
        for (std::size_t m = 1; m + 1 < n; ++m) {
            distance[order[m]] += (value(front[order[m + 1]]) - value(front[order[m - 1]])) / range;
        }
    };
    accumulate([](Objectives const& o) { return o.cost; });
    accumulate([](Objectives const& o) { return o.violation; });
    return distance;
}

// Assigns rank (front index under constrained domination) and crowding distance within the front.
inline void assign_rank_and_crowding(Population& pop)
{
    std::vector<Objectives> objs;
    objs.reserve(pop.size());
    for (auto const& ind : pop) { objs.push_back(ind.objectives); }
    auto const fronts = fast_non_dominated_sort(objs, DominanceMode::constrained);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        std::vector<Objectives> front_objs;
        front_objs.reserve(fronts[r].size());
        for (auto idx : fronts[r]) { front_objs.push_back(objs[idx]); }
        auto const dist = crowding_distance(front_objs);
        for (std::size_t m = 0; m < fronts[r].size(); ++m) {
            pop[fronts[r][m]].rank = r;
            pop[fronts[r][m]].crowding = dist[m];
        }
    }
}

// Lower rank wins, then larger crowding distance, then lower index.
inline bool crowded_less(Individual const& a, std::size_t ia, Individual const& b, std::size_t ib) noexcept
{
    if (a.rank != b.rank) { return a.rank < b.rank; }
    if (a.crowding != b.crowding) { return a.crowding > b.crowding; }
    return ia < ib;
}

// Elitist survivor selection over parents followed by offspring.
inline Population select_next_generation(Population const& parents, Population const& offspring,
                                         SolverConfig const& config)
{
    Population combined;
    combined.reserve(parents.size() + offspring.size());
    combined.insert(combined.end(), parents.begin(), parents.end());
    combined.insert(combined.end(), offspring.begin(), offspring.end());
    assign_rank_and_crowding(combined);

    std::vector<std::size_t> order(combined.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return crowded_less(combined[a], a, combined[b], b); });

    auto const keep = std::min(config.population_size, combined.size());
    Population next;
    next.reserve(keep);
    for (std::size_t m = 0; m < keep; ++m) { next.push_back(std::move(combined[order[m]])); }
    return next;
}

inline std::size_t binary_tournament(Population const& pop, Rng& rng)
{
    auto const a = rng.index(pop.size());
    auto const b = rng.index(pop.size());
    return crowded_less(pop[a], a, pop[b], b) ? a : b;
}

namespace detail {

    inline GenerationRecord summarize(Population const& pop, std::size_t generation)
    {
        GenerationRecord rec;
        rec.generation = generation;
        rec.min_violation = std::numeric_limits<double>::infinity();
        double cost_sum = 0.0;
        for (auto const& ind : pop) {
            cost_sum += ind.objectives.cost;
            rec.min_violation = std::min(rec.min_violation, ind.objectives.violation);
            if (ind.objectives.feasible()) {
                ++rec.feasible_count;
                if (!rec.best_feasible_cost || ind.objectives.cost < *rec.best_feasible_cost) {
                    rec.best_feasible_cost = ind.objectives.cost;
                }
            }
        }
        rec.mean_cost = cost_sum / static_cast<double>(pop.size());
        return rec;
    }

    inline Individual const* cheapest_feasible(Population const& pop)
    {
        Individual const* best = nullptr;
        for (auto const& ind : pop) {
            if (ind.objectives.feasible() && (!best || ind.objectives.cost < best->objectives.cost)) {
                best = &ind;
            }
        }
        return best;
    }

} // namespace detail

inline SolveResult solve(NetworkInstance const& in, SolverConfig const& config)
{
    validate_config(config);
    if (auto const report = validate_instance(in); !report.ok()) {
        throw Error("invalid instance: " + report.issues.front().field + " " + report.issues.front().message);
    }

    Rng rng(config.seed);
    Population pop = init_population(in, config, rng);
    assign_rank_and_crowding(pop);

    SolveResult result;
    auto remember_best = [&](Population const& p) {
        if (auto const* best = detail::cheapest_feasible(p);
            best && (!result.best_feasible || best->objectives.cost < result.best_feasible->cost.total)) {
            result.best_feasible = FeasiblePlan{best->plan, evaluate_cost(in, best->plan)};
        }
    };
    remember_best(pop);

    auto const N = config.population_size;
    for (std::size_t gen = 1; gen <= config.max_generations; ++gen) {
        Population offspring;
        offspring.reserve(N);
        while (offspring.size() < N) {
            auto const& a = pop[binary_tournament(pop, rng)].chromosome;
            auto const& b = pop[binary_tournament(pop, rng)].chromosome;
            auto [c1, c2] = crossover(a, b, config, rng);
            offspring.push_back(make_individual(mutate(std::move(c1), config, rng), in));
            offspring.push_back(make_individual(mutate(std::move(c2), config, rng), in));
        }
        pop = select_next_generation(pop, offspring, config);
        remember_best(pop);
        result.trace.push_back(detail::summarize(pop, gen));
        result.generations_run = gen;

        auto const W = config.stall_generations;
        if (W > 0 && gen > W) {
            auto const& then = result.trace[gen - 1 - W].best_feasible_cost;
            auto const& now = result.trace[gen - 1].best_feasible_cost;
            if (then && now && *then - *now <= config.stall_tolerance * std::abs(*then)) {
                result.terminated_by = Termination::stall;
                break;
            }
        }
    }

    for (auto const& ind : pop) {
        if (ind.rank == 0) { result.final_front.push_back(ind); }
    }
    return result;
}

} // namespace scnet
