#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "permeq/equations.hpp"
#include "permeq/errors.hpp"
#include "permeq/rational.hpp"
#include "permeq/rng.hpp"

namespace permeq {

/// Hard ceiling on brute-force tuple visits: (n!)^k must stay below this for
/// exhaustive enumeration. Covers n <= 6 at k = 2 and n <= 9 at k = 1.
inline constexpr std::uint64_t default_enumeration_budget = 600000;

inline std::uint64_t tuple_visits(std::size_t n, std::size_t k) {
    std::uint64_t f = detail::factorial_saturating(n);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total = detail::saturating_mul(total, f);
    return total;
}

inline std::vector<Perm> all_permutations(std::size_t n) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    std::vector<Perm> out;
    out.reserve(static_cast<std::size_t>(detail::factorial_saturating(n)));
    do {
        out.push_back(Perm::from_images(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

/// Exactly Sol_E(n), by exhausting Sym(n)^k in lexicographic order (first
/// coordinate outermost). Refuses when (n!)^k exceeds the budget.
inline std::vector<PermTuple> enumerate_solutions(const EquationSystem& e, std::size_t n,
                                                  std::uint64_t budget = default_enumeration_budget) {
    const std::size_t k = e.rank();
    const std::uint64_t visits = tuple_visits(n, k);
    if (visits > budget) {
        std::ostringstream os;
        os << "enumerate_solutions at n=" << n << ", k=" << k << " needs (n!)^k = " << visits
           << " tuple visits, over the budget of " << budget;
        throw BudgetError(os.str());
    }
    const std::vector<Perm> sym = all_permutations(n);
    std::vector<std::size_t> idx(k, 0);
    std::vector<PermTuple> out;
    while (true) {
        std::vector<Perm> coords;
        coords.reserve(k);
        for (std::size_t i = 0; i < k; ++i) coords.push_back(sym[idx[i]]);
        PermTuple t(std::move(coords));
        if (is_solution(e, t)) out.push_back(std::move(t));
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < sym.size()) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Flexible degree windows: solutions may live on [N] for n <= N <= n + nu.

struct FlexBudget {
    enum class Rule { zero, linear_in_eps_n, linear_in_n, unbounded };

    Rule rule = Rule::zero;
    Rat c = Rat(0);

    static FlexBudget zero() { return FlexBudget{Rule::zero, Rat(0)}; }
    static FlexBudget linear_in_eps_n(Rat coeff) { return FlexBudget{Rule::linear_in_eps_n, std::move(coeff)}; }
    static FlexBudget linear_in_n(Rat coeff) { return FlexBudget{Rule::linear_in_n, std::move(coeff)}; }
    static FlexBudget unbounded() { return FlexBudget{Rule::unbounded, Rat(0)}; }

    /// nu(eps, n): how many extra degrees beyond n are admissible. SIZE_MAX
    /// means "no intrinsic limit" (the caller truncates at its budget).
    std::size_t window(const Rat& eps, std::size_t n) const {
        Rat v(0);
        switch (rule) {
            case Rule::zero: return 0;
            case Rule::linear_in_eps_n: v = c * eps * Rat(n); break;
            case Rule::linear_in_n: v = c * Rat(n); break;
            case Rule::unbounded: return std::numeric_limits<std::size_t>::max();
        }
        if (v < 0) return 0;
        BigInt whole = numerator(v) / denominator(v);
        if (whole > std::numeric_limits<std::uint32_t>::max())
            return std::numeric_limits<std::size_t>::max() - 1;
        return static_cast<std::size_t>(static_cast<std::uint64_t>(whole));
    }
};

/// Accepts "zero", "linear:<c>", "n-linear:<c>", "unbounded"; <c> is a
/// nonnegative rational or decimal.
inline FlexBudget parse_flex(const std::string& text) {
    if (text == "zero") return FlexBudget::zero();
    if (text == "unbounded") return FlexBudget::unbounded();
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        Rat c = parse_rational(text.substr(colon + 1));
        if (c < 0) throw ParseError("flex coefficient must be nonnegative");
        if (head == "linear") return FlexBudget::linear_in_eps_n(std::move(c));
        if (head == "n-linear") return FlexBudget::linear_in_n(std::move(c));
    }
    throw ParseError("flex must be one of zero | linear:<c> | n-linear:<c> | unbounded");
}

inline std::string format_flex(const FlexBudget& f) {
    switch (f.rule) {
        case FlexBudget::Rule::zero: return "zero";
        case FlexBudget::Rule::linear_in_eps_n: return "linear:" + rat_to_string(f.c);
        case FlexBudget::Rule::linear_in_n: return "n-linear:" + rat_to_string(f.c);
        case FlexBudget::Rule::unbounded: return "unbounded";
    }
    return "zero";
}

struct FlexDistance {
    Rat value;                   // min tuple distance over the admissible solution sets
    std::size_t attained_degree; // degree N where the minimum was found
    std::size_t max_degree;      // largest N actually examined
    bool truncated;              // true iff an unbounded window was cut at the budget
};

/// Strict-degree distance: min over Sol_E(n) of tuple_dist. Zero iff sigma is
/// a solution.
inline Rat dist_to_solutions(const EquationSystem& e, const PermTuple& sigma,
                             std::uint64_t budget = default_enumeration_budget) {
    const auto sols = enumerate_solutions(e, sigma.degree(), budget);
    if (sols.empty()) throw BudgetError("Sol_E(n) is empty; distance undefined at this degree");
    Rat best = tuple_dist(sigma, sols.front());
    for (std::size_t i = 1; i < sols.size(); ++i) {
        Rat d = tuple_dist(sigma, sols[i]);
        if (d < best) best = d;
    }
    return best;
}

/// Flexible-degree distance: min over n <= N <= n + nu(eps, n) and tau in
/// Sol_E(N) of tuple_dist(sigma, tau) (disagreements counted on [n] only, per
/// dist_cross). Bounded windows refuse when any admissible N is over the
/// enumeration budget; an unbounded window is truncated at the budget instead
/// and the result flagged, since it is then an upper bound on the true
/// infimum.
inline FlexDistance dist_to_solutions_flex(const EquationSystem& e, const PermTuple& sigma,
                                           const FlexBudget& flex, const Rat& eps,
                                           std::uint64_t budget = default_enumeration_budget) {
    const std::size_t n = sigma.degree();
    const std::size_t k = e.rank();
    const std::size_t extra = flex.window(eps, n);
    const bool unb = flex.rule == FlexBudget::Rule::unbounded;
    const std::size_t last =
        extra > std::numeric_limits<std::size_t>::max() - n ? std::numeric_limits<std::size_t>::max()
                                                            : n + extra;

    FlexDistance res{Rat(-1), n, n, false};
    bool any = false;
    for (std::size_t N = n; N <= last; ++N) {
        if (unb && tuple_visits(N, k) > budget) {
            res.truncated = true;
            break;
        }
        const auto sols = enumerate_solutions(e, N, budget);
        for (const auto& tau : sols) {
            Rat d = tuple_dist(sigma, tau);
            if (!any || d < res.value) {
                res.value = d;
                res.attained_degree = N;
                any = true;
            }
        }
        res.max_degree = N;
        if (N == std::numeric_limits<std::size_t>::max()) break;
    }
    if (!any) throw BudgetError("no comparison solutions exist in the admissible degree window");
    return res;
}

// ---------------------------------------------------------------------------
// Instance generation

inline bool is_commutator_system(const EquationSystem& e) {
    if (e.rank() != 2 || e.size() != 1) return false;
    return e.relators().front() == parse_word("xyXY", e.alphabet());
}

/// Two powers of a common uniformly random n-cycle: always commutator
/// solutions, available at any degree. Not uniform on Sol, but a genuine
/// solution family for planting beyond the enumeration budget.
inline PermTuple commutator_family_sample(Rng& rng, std::size_t n) {
    if (n == 0) throw PreconditionError("degree must be positive");
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i + 1 < n; ++i) img[i] = static_cast<std::uint32_t>(i + 1);
    img[n - 1] = 0;
    const Perm cycle = Perm::from_images(std::move(img));
    const Perm rho = random_perm(rng, n);
    const Perm gamma = compose(rho, compose(cycle, rho.inverse()));
    std::uint64_t a = rng.below(n);
    std::uint64_t b = rng.below(n);
    return PermTuple({perm_pow(gamma, a), perm_pow(gamma, b)});
}

/// A uniformly random solution when enumeration is affordable; otherwise the
/// commutator family when the system has that shape; otherwise refuses.
inline PermTuple sample_solution(const EquationSystem& e, std::size_t n, Rng& rng,
                                 std::uint64_t budget = default_enumeration_budget) {
    if (tuple_visits(n, e.rank()) <= budget) {
        const auto sols = enumerate_solutions(e, n, budget);
        if (sols.empty()) throw BudgetError("Sol_E(n) is empty at this degree");
        return sols[static_cast<std::size_t>(rng.below(sols.size()))];
    }
    if (is_commutator_system(e)) return commutator_family_sample(rng, n);
    throw BudgetError("no solution family available beyond the enumeration budget for this system");
}

struct PlantedInstance {
    PermTuple tuple;        // the instance under test
    PermTuple base;         // the solution it was edited from
    std::size_t edits;      // requested number of transposition edits
    Rat dist_to_base;       // measured tuple distance to the base (<= edits * 2/n)
};

/// Starts from a random solution and applies m transposition edits, each
/// swapping two image entries of a random coordinate. Deterministic in
/// (E, n, m, seed).
inline PlantedInstance plant_near_solution(const EquationSystem& e, std::size_t n, std::size_t m,
                                           std::uint64_t seed,
                                           std::uint64_t budget = default_enumeration_budget) {
    if (m > e.rank() * n) throw PreconditionError("corruption exceeds k*n edits");
    if (m > 0 && n < 2) throw PreconditionError("transposition edits need degree at least 2");
    Rng rng(seed);
    PermTuple base = sample_solution(e, n, rng, budget);
    std::vector<Perm> coords(base.perms());
    for (std::size_t t = 0; t < m; ++t) {
        std::size_t i = static_cast<std::size_t>(rng.below(coords.size()));
        std::uint32_t u = static_cast<std::uint32_t>(rng.below(n));
        std::uint32_t v = static_cast<std::uint32_t>(rng.below(n - 1));
        if (v >= u) ++v;
        coords[i] = coords[i].with_swapped_images(u, v);
    }
    PermTuple tuple(std::move(coords));
    Rat d = tuple_dist(tuple, base);
    return PlantedInstance{std::move(tuple), std::move(base), m, std::move(d)};
}

} // namespace permeq
