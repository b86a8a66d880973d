#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "permeq/equations.hpp"
#include "permeq/errors.hpp"
#include "permeq/local_stats.hpp"
#include "permeq/rational.hpp"
#include "permeq/rng.hpp"
#include "permeq/solution_space.hpp"
#include "permeq/testers.hpp"

namespace permeq {

enum class TesterKind { sas, lsm };
enum class InstanceModel { solutions, planted, random_tuple };

inline const char* tester_name(TesterKind t) { return t == TesterKind::sas ? "sas" : "lsm"; }

inline const char* instance_model_name(InstanceModel m) {
    switch (m) {
        case InstanceModel::solutions: return "solutions";
        case InstanceModel::planted: return "planted";
        case InstanceModel::random_tuple: return "random";
    }
    return "?";
}

/// One grid of experiment cells: (n, s, corruption) combinations, each cell
/// running `trials` seeded tester runs on one generated instance.
struct SweepSpec {
    SweepSpec(std::string label, EquationSystem sys)
        : system_label(std::move(label)), system(std::move(sys)) {}

    std::string system_label;
    EquationSystem system;
    TesterKind tester = TesterKind::sas;
    std::vector<std::size_t> n_values;
    std::vector<std::uint64_t> s_values;
    std::vector<std::size_t> corruption_values{0}; // used by the planted model only
    std::size_t probe_radius = 2;                  // lsm
    Rat delta = Rat(1, 20);                        // lsm
    InstanceModel instance = InstanceModel::planted;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::uint64_t budget = default_enumeration_budget;
    std::size_t workers = 0; // 0 = hardware concurrency
};

struct SweepRow {
    std::size_t n = 0;
    std::uint64_t s = 0;
    std::size_t corruption = 0;
    std::size_t accepted = 0;
    std::size_t trials = 0;
    std::uint64_t total_queries = 0;
    Rat exact_defect;
    bool have_dist = false; // strict-degree distance was within the enumeration budget
    Rat exact_dist;
};

namespace detail {

struct SweepCell {
    std::size_t n;
    std::uint64_t s;
    std::size_t corruption;
};

inline SweepRow run_sweep_cell(const SweepSpec& spec, const SweepCell& cell,
                               std::uint64_t cell_seed,
                               const std::shared_ptr<const ProbeSet>& probe,
                               const std::shared_ptr<const ComparisonSet>& comparison) {
    SweepRow row;
    row.n = cell.n;
    row.s = cell.s;
    row.corruption = cell.corruption;
    row.trials = spec.trials;

    PermTuple instance = [&] {
        const std::uint64_t gen_seed = derive_seed(cell_seed, 0);
        switch (spec.instance) {
            case InstanceModel::planted:
                return plant_near_solution(spec.system, cell.n, cell.corruption, gen_seed,
                                           spec.budget)
                    .tuple;
            case InstanceModel::solutions: {
                Rng rng(gen_seed);
                return sample_solution(spec.system, cell.n, rng, spec.budget);
            }
            case InstanceModel::random_tuple: {
                Rng rng(gen_seed);
                return random_tuple(rng, spec.system.rank(), cell.n);
            }
        }
        throw PreconditionError("unknown instance model");
    }();

    QueryOracle oracle(instance);
    if (spec.tester == TesterKind::sas) {
        SasConfig cfg{spec.system, cell.s, false};
        for (std::size_t t = 0; t < spec.trials; ++t) {
            TesterVerdict v = sas_run(cfg, oracle, derive_seed(cell_seed, 1 + t));
            if (v.accepted) ++row.accepted;
            row.total_queries += v.queries_used;
        }
    } else {
        LsmConfig cfg{spec.system, cell.s, probe, spec.delta, PrecomputedSource{comparison}, false};
        for (std::size_t t = 0; t < spec.trials; ++t) {
            LsmVerdict v = lsm_run(cfg, oracle, derive_seed(cell_seed, 1 + t));
            if (v.accepted) ++row.accepted;
            row.total_queries += v.queries_used;
        }
    }

    row.exact_defect = defect(spec.system, instance);
    try {
        row.exact_dist = dist_to_solutions(spec.system, instance, spec.budget);
        row.have_dist = true;
    } catch (const BudgetError&) {
        row.have_dist = false;
    }
    return row;
}

} // namespace detail

/// Runs every cell of the grid, spreading cells over a worker pool. Row order
/// and content depend only on (spec, seed), never on scheduling: each cell's
/// seed is derived from its grid position and rows are returned in grid order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.trials == 0) throw PreconditionError("trials must be positive");
    if (spec.n_values.empty() || spec.s_values.empty())
        throw PreconditionError("sweep needs at least one n and one s value");
    const std::vector<std::size_t>& corruptions =
        spec.instance == InstanceModel::planted ? spec.corruption_values
                                                : std::vector<std::size_t>{0};
    if (corruptions.empty()) throw PreconditionError("sweep needs at least one corruption value");

    std::shared_ptr<const ProbeSet> probe;
    std::map<std::size_t, std::shared_ptr<const ComparisonSet>> comparisons;
    if (spec.tester == TesterKind::lsm) {
        if (spec.probe_radius == 0) throw PreconditionError("lsm sweeps need probe radius >= 1");
        probe = std::make_shared<const ProbeSet>(
            ProbeSet::words_up_to(spec.system.alphabet(), spec.probe_radius));
        LsmConfig proto{spec.system, 1, probe, spec.delta, ExhaustiveSource{spec.budget}, false};
        for (std::size_t n : spec.n_values)
            if (!comparisons.count(n)) comparisons[n] = build_comparison_set(proto, n);
    }

    std::vector<detail::SweepCell> cells;
    for (std::size_t n : spec.n_values)
        for (std::uint64_t s : spec.s_values)
            for (std::size_t m : corruptions) cells.push_back(detail::SweepCell{n, s, m});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                const auto comparison = spec.tester == TesterKind::lsm
                                            ? comparisons.at(cells[i].n)
                                            : std::shared_ptr<const ComparisonSet>{};
                rows[i] = detail::run_sweep_cell(spec, cells[i], derive_seed(spec.seed, i), probe,
                                                 comparison);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::size_t nworkers = spec.workers ? spec.workers : std::thread::hardware_concurrency();
    if (nworkers == 0) nworkers = 1;
    nworkers = std::min(nworkers, cells.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

/// CSV rendering with the full configuration echoed in leading comment lines.
/// Byte-identical for identical (spec, seed).
inline std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "# system=" << spec.system_label << "\n";
    os << "# tester=" << tester_name(spec.tester) << "\n";
    os << "# instance=" << instance_model_name(spec.instance) << "\n";
    os << "# trials=" << spec.trials << " seed=" << spec.seed << " budget=" << spec.budget << "\n";
    if (spec.tester == TesterKind::lsm)
        os << "# probe_radius=" << spec.probe_radius << " delta=" << rat_to_string(spec.delta)
           << "\n";
    os << "system,n,s,P_radius,delta,instance_model,corruption,accept_rate,reject_rate,"
          "mean_queries,exact_defect,exact_dist_to_sol\n";
    for (const SweepRow& r : rows) {
        os << spec.system_label << ',' << r.n << ',' << r.s << ',';
        if (spec.tester == TesterKind::lsm)
            os << spec.probe_radius << ',' << rat_to_string(spec.delta);
        else
            os << ',';
        os << ',' << instance_model_name(spec.instance) << ',' << r.corruption << ','
           << format_fixed(Rat(r.accepted, r.trials), 6) << ','
           << format_fixed(Rat(r.trials - r.accepted, r.trials), 6) << ','
           << format_fixed(Rat(r.total_queries, r.trials), 3) << ','
           << rat_to_string(r.exact_defect) << ','
           << (r.have_dist ? rat_to_string(r.exact_dist) : std::string()) << "\n";
    }
    return os.str();
}

inline std::string run_sweep_csv(const SweepSpec& spec) { return sweep_csv(spec, run_sweep(spec)); }

} // namespace permeq
