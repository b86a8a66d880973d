#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "permeq/equations.hpp"
#include "permeq/errors.hpp"
#include "permeq/local_stats.hpp"
#include "permeq/rational.hpp"
#include "permeq/rng.hpp"
#include "permeq/solution_space.hpp"

namespace permeq {

namespace seed_stream {
inline constexpr std::uint64_t sas = 1;
inline constexpr std::uint64_t lsm = 2;
inline constexpr std::uint64_t family = 3;
} // namespace seed_stream

struct TesterVerdict {
    bool accepted = false;
    std::uint64_t queries_used = 0;
    std::uint64_t query_budget = 0; // declared bound for this run; used <= budget always
    std::vector<QueryRecord> transcript;
};

// ---------------------------------------------------------------------------
// Sample and Substitute: draw s uniform (relator, point) pairs and check the
// point is fixed by the substituted relator. All s checks are drawn even
// after a failure, so the query count depends only on the drawn words.

struct SasConfig {
    EquationSystem system;
    std::uint64_t repetition = 1;
    bool record_transcript = false;
};

inline TesterVerdict sas_run(const SasConfig& cfg, QueryOracle& oracle, std::uint64_t seed) {
    if (cfg.repetition == 0) throw PreconditionError("repetition must be at least 1");
    if (oracle.arity() != cfg.system.rank())
        throw PreconditionError("oracle arity does not match the system's alphabet");
    const std::size_t n = oracle.degree();
    if (n == 0) throw PreconditionError("degree must be positive");
    const auto& relators = cfg.system.relators();
    Rng rng(derive_seed(seed, seed_stream::sas));
    oracle.reset();
    oracle.set_recording(cfg.record_transcript);
    bool all_fixed = true;
    for (std::uint64_t j = 0; j < cfg.repetition; ++j) {
        const Word& w = relators[static_cast<std::size_t>(rng.below(relators.size()))];
        const std::uint32_t x = static_cast<std::uint32_t>(rng.below(n));
        if (evaluate_point_counted(w, oracle, x) != x) all_fixed = false;
    }
    TesterVerdict v;
    v.accepted = all_fixed;
    v.queries_used = oracle.count();
    v.query_budget = cfg.repetition * cfg.system.max_relator_length();
    v.transcript = oracle.take_transcript();
    oracle.set_recording(false);
    return v;
}

/// Exact acceptance law: one check passes with probability 1 - defect (the
/// mean over E x [n] of the fixedness indicator), and the s checks are
/// independent, so acceptance probability is (1 - defect)^s.
inline Rat sas_accept_probability(const SasConfig& cfg, const PermTuple& sigma) {
    if (cfg.repetition == 0) throw PreconditionError("repetition must be at least 1");
    Rat pass = Rat(1) - defect(cfg.system, sigma);
    return rat_pow(pass, static_cast<unsigned long>(cfg.repetition));
}

inline Rat sas_reject_probability(const SasConfig& cfg, const PermTuple& sigma) {
    return Rat(1) - sas_accept_probability(cfg, sigma);
}

/// Smallest repetition count driving the rejection probability to the target
/// on instances of the given defect, found from the exact law.
inline std::uint64_t sas_repetition_for(const Rat& defect_value, const Rat& target_reject) {
    if (defect_value <= 0 || defect_value > 1)
        throw PreconditionError("defect must lie in (0, 1]");
    if (target_reject <= 0 || target_reject >= 1)
        throw PreconditionError("target rejection probability must lie in (0, 1)");
    const Rat pass = Rat(1) - defect_value;
    const Rat accept_cap = Rat(1) - target_reject;
    std::uint64_t s = 1;
    Rat acc = pass;
    while (acc > accept_cap) {
        ++s;
        acc *= pass;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Local Statistics Matcher: sample an empirical trace distribution and accept
// iff it is delta-close in total variation to the exact distribution of some
// comparison solution.

/// The exact local statistics the empirical distribution is matched against.
/// `approximate` is true unless the stats cover all of Sol_E(n).
struct ComparisonSet {
    std::shared_ptr<const ProbeSet> probe;
    std::vector<LocalStats> stats; // deduplicated
    bool approximate = false;
};

struct ExhaustiveSource {
    std::uint64_t budget = default_enumeration_budget;
};
struct ProvidedSource {
    std::vector<PermTuple> solutions;
    bool complete = false; // caller asserts the list is all of Sol_E(n)
};
struct FamilySource {
    std::size_t count = 64; // commutator family samples
};
struct PrecomputedSource {
    std::shared_ptr<const ComparisonSet> set;
};
using SolutionSource = std::variant<ExhaustiveSource, ProvidedSource, FamilySource, PrecomputedSource>;

struct LsmConfig {
    EquationSystem system;
    std::uint64_t repetition = 1;
    std::shared_ptr<const ProbeSet> probe;
    Rat delta;
    SolutionSource source = ExhaustiveSource{};
    bool record_transcript = false;
};

namespace detail {

inline void dedup_push(std::vector<LocalStats>& stats, std::set<std::map<Trace, Rat>>& seen,
                       LocalStats&& s) {
    if (seen.insert(s.weights).second) stats.push_back(std::move(s));
}

} // namespace detail

/// Builds the comparison stats for degree n from a solution source. Throws
/// ComparisonUnavailableError when the source cannot cover that degree —
/// deliberately distinct from a reject verdict.
inline std::shared_ptr<const ComparisonSet> build_comparison_set(const LsmConfig& cfg, std::size_t n,
                                                                 std::uint64_t seed = 0) {
    if (!cfg.probe || cfg.probe->size() == 0) throw PreconditionError("probe set must be nonempty");
    auto out = std::make_shared<ComparisonSet>();
    out->probe = cfg.probe;
    std::set<std::map<Trace, Rat>> seen;

    if (const auto* pre = std::get_if<PrecomputedSource>(&cfg.source)) {
        if (!pre->set || pre->set->stats.empty())
            throw ComparisonUnavailableError("precomputed comparison set is empty");
        if (!pre->set->probe || (pre->set->probe != cfg.probe && !(*pre->set->probe == *cfg.probe)))
            throw PreconditionError("precomputed comparison set uses a different probe set");
        return pre->set;
    }
    if (const auto* ex = std::get_if<ExhaustiveSource>(&cfg.source)) {
        std::vector<PermTuple> sols;
        try {
            sols = enumerate_solutions(cfg.system, n, ex->budget);
        } catch (const BudgetError& e) {
            throw ComparisonUnavailableError(std::string("exhaustive comparison set unavailable: ") +
                                             e.what());
        }
        if (sols.empty())
            throw ComparisonUnavailableError("Sol_E(n) is empty at this degree; nothing to compare against");
        for (const auto& tau : sols)
            detail::dedup_push(out->stats, seen, exact_local_stats(tau, cfg.probe));
        out->approximate = false;
        return out;
    }
    if (const auto* prov = std::get_if<ProvidedSource>(&cfg.source)) {
        for (const auto& tau : prov->solutions) {
            if (tau.degree() != n)
                throw PreconditionError("provided comparison solution has the wrong degree");
            if (!is_solution(cfg.system, tau))
                throw PreconditionError("provided comparison tuple is not a solution");
            detail::dedup_push(out->stats, seen, exact_local_stats(tau, cfg.probe));
        }
        if (out->stats.empty())
            throw ComparisonUnavailableError("provided solution list is empty for this degree");
        out->approximate = !prov->complete;
        return out;
    }
    const auto& fam = std::get<FamilySource>(cfg.source);
    if (!is_commutator_system(cfg.system))
        throw ComparisonUnavailableError("no sampled solution family is available for this system");
    if (fam.count == 0) throw ComparisonUnavailableError("family sample count must be positive");
    Rng rng(derive_seed(seed, seed_stream::family));
    for (std::size_t i = 0; i < fam.count; ++i)
        detail::dedup_push(out->stats, seen, exact_local_stats(commutator_family_sample(rng, n), cfg.probe));
    out->approximate = true;
    return out;
}

struct LsmVerdict : TesterVerdict {
    Rat min_tv;                         // exact minimum over the comparison set
    bool approximate_comparison = false; // comparison set did not cover all of Sol_E(n)
};

inline LsmVerdict lsm_run(const LsmConfig& cfg, QueryOracle& oracle, std::uint64_t seed) {
    if (cfg.repetition == 0) throw PreconditionError("repetition must be at least 1");
    if (!cfg.probe || cfg.probe->size() == 0) throw PreconditionError("probe set must be nonempty");
    if (cfg.delta <= 0) throw PreconditionError("proximity delta must be positive");
    if (oracle.arity() != cfg.system.rank())
        throw PreconditionError("oracle arity does not match the system's alphabet");

    const auto comparison = build_comparison_set(cfg, oracle.degree(), seed);
    if (comparison->stats.empty())
        throw ComparisonUnavailableError("comparison set is empty; cannot run the matcher");

    Rng rng(derive_seed(seed, seed_stream::lsm));
    oracle.reset();
    oracle.set_recording(cfg.record_transcript);
    const LocalStats emp =
        empirical_local_stats(oracle, cfg.probe, static_cast<std::size_t>(cfg.repetition), rng);

    Rat best(-1);
    for (const LocalStats& s : comparison->stats) {
        Rat tv = tv_distance(emp, s);
        if (best < 0 || tv < best) best = tv;
    }

    LsmVerdict v;
    v.accepted = best <= cfg.delta;
    v.queries_used = oracle.count();
    v.query_budget = cfg.repetition * cfg.probe->total_letters();
    v.transcript = oracle.take_transcript();
    v.min_tv = best;
    v.approximate_comparison = comparison->approximate;
    oracle.set_recording(false);
    return v;
}

// ---------------------------------------------------------------------------
// Separator validation: empirical completeness/soundness rates with Wilson
// intervals against the 0.99/0.99 contract.

/// A tuple together with its exact distance to the solution set, produced by
/// certify_far. Only exact enumeration certifies farness (planting bounds the
/// distance from above, which certifies nothing here).
struct CertifiedNegative {
    PermTuple tuple;
    Rat distance; // exact dist_to_solutions value, >= the eps it was certified for
    Rat certified_eps;
};

inline CertifiedNegative certify_far(const EquationSystem& e, PermTuple tuple, const Rat& eps,
                                     std::uint64_t budget = default_enumeration_budget) {
    Rat d = dist_to_solutions(e, tuple, budget);
    if (d < eps)
        throw PreconditionError("tuple is not eps-far from the solution set; refusing to certify");
    return CertifiedNegative{std::move(tuple), std::move(d), eps};
}

struct WilsonInterval {
    double low;
    double high;
};

/// Wilson score interval for a binomial proportion at normal quantile z.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return WilsonInterval{0.0, 1.0};
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    double low = center - half;
    double high = center + half;
    if (low < 0.0) low = 0.0;
    if (high > 1.0) high = 1.0;
    return WilsonInterval{low, high};
}

using Tester = std::function<TesterVerdict(const PermTuple&, std::uint64_t seed)>;

struct InstanceReport {
    bool positive;
    std::size_t index; // within its side's list
    std::size_t accepted;
    std::size_t trials;
    double accept_rate;
    WilsonInterval interval; // on the acceptance probability
    std::uint64_t max_queries;
    bool flagged; // confidently violates its side of the 0.99/0.99 contract
};

struct SeparatorReport {
    double completeness = 0.99; // required acceptance probability on positives
    double soundness = 0.99;    // required rejection probability on negatives
    double z = 2.5758293035489004; // two-sided 99% normal quantile
    std::vector<InstanceReport> instances;
    std::uint64_t max_queries = 0;
    bool contract_violated = false;
};

/// Runs the tester `trials` times per instance with derived seeds. Positives
/// must be solutions (checked); negatives carry their farness certificates.
/// An instance is flagged only when its Wilson interval confidently excludes
/// the required rate, so a passing report is evidence, not proof.
inline SeparatorReport validate_separator(const EquationSystem& e, const Tester& tester,
                                          const std::vector<PermTuple>& positives,
                                          const std::vector<CertifiedNegative>& negatives,
                                          std::size_t trials, std::uint64_t seed,
                                          double completeness = 0.99, double soundness = 0.99,
                                          double z = 2.5758293035489004) {
    if (trials == 0) throw PreconditionError("trials must be positive");
    for (const auto& p : positives)
        if (!is_solution(e, p))
            throw PreconditionError("positive instance is not a solution");

    SeparatorReport report;
    report.completeness = completeness;
    report.soundness = soundness;
    report.z = z;

    std::size_t instance_idx = 0;
    auto run_side = [&](const PermTuple& tuple, bool positive, std::size_t side_index) {
        InstanceReport ir;
        ir.positive = positive;
        ir.index = side_index;
        ir.trials = trials;
        ir.accepted = 0;
        ir.max_queries = 0;
        const std::uint64_t instance_seed = derive_seed(seed, instance_idx++);
        for (std::size_t t = 0; t < trials; ++t) {
            TesterVerdict v = tester(tuple, derive_seed(instance_seed, t));
            if (v.accepted) ++ir.accepted;
            ir.max_queries = std::max(ir.max_queries, v.queries_used);
        }
        ir.accept_rate = static_cast<double>(ir.accepted) / static_cast<double>(trials);
        ir.interval = wilson_interval(ir.accepted, trials, z);
        ir.flagged = positive ? ir.interval.high < completeness
                              : ir.interval.low > 1.0 - soundness;
        report.max_queries = std::max(report.max_queries, ir.max_queries);
        report.contract_violated = report.contract_violated || ir.flagged;
        report.instances.push_back(ir);
    };

    for (std::size_t i = 0; i < positives.size(); ++i) run_side(positives[i], true, i);
    for (std::size_t i = 0; i < negatives.size(); ++i) run_side(negatives[i].tuple, false, i);
    return report;
}

} // namespace permeq
