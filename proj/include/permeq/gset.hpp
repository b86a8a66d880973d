#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include "permeq/equations.hpp"
#include "permeq/errors.hpp"
#include "permeq/local_stats.hpp"
#include "permeq/rational.hpp"

namespace permeq {

/// A finite set with a k-generator action (generator i acts by the i-th
/// permutation). `certified` records that the relators of some equation
/// system were checked to act trivially, making this an honest action of the
/// presented group rather than just of the free group.
struct GSet {
    PermTuple action;
    bool certified = false;

    std::size_t size() const { return action.degree(); }
    std::size_t rank() const { return action.arity(); }
};

inline GSet make_gset(PermTuple action) { return GSet{std::move(action), false}; }

inline GSet certified_gset(PermTuple action, const EquationSystem& e) {
    if (!is_solution(e, action))
        throw PreconditionError("action does not satisfy the relators; cannot certify");
    return GSet{std::move(action), true};
}

struct GsetDistanceOptions {
    std::size_t max_exact_points = 8;        // |X| ceiling for the exact search
    std::uint64_t max_injections = 100000000; // falling-factorial ceiling
    bool allow_greedy = false;               // over budget: labeled upper bound instead of refusal
};

struct GsetDistance {
    Rat value;
    bool exact; // false when the value is only a greedy upper bound
};

namespace detail {

// Completed-constraint cost of setting f(v) = y, given the partial map f
// (y_of[x] is the image or npos). A constraint is a pair (generator s, point
// x) contributing [f(s x) != s f(x)]; it is charged when its second endpoint
// gets assigned.
inline std::size_t added_cost(const PermTuple& x_act, const PermTuple& y_act,
                              const std::vector<std::uint32_t>& y_of, std::uint32_t v,
                              std::uint32_t y) {
    constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
    std::size_t cost = 0;
    for (std::size_t s = 0; s < x_act.arity(); ++s) {
        const std::uint32_t sv = x_act.fwd(s, v);
        if (sv == v) {
            cost += y_act.fwd(s, y) != y;
            continue;
        }
        if (y_of[sv] != unset) cost += y_of[sv] != y_act.fwd(s, y);
        const std::uint32_t pv = x_act.bwd(s, v);
        if (pv != v && y_of[pv] != unset) cost += y != y_act.fwd(s, y_of[pv]);
    }
    return cost;
}

inline void injection_search(const PermTuple& x_act, const PermTuple& y_act,
                             std::vector<std::uint32_t>& y_of, std::vector<bool>& used,
                             std::uint32_t v, std::size_t partial, std::size_t& best) {
    if (partial >= best) return;
    const std::size_t m = x_act.degree();
    if (v == m) {
        best = partial;
        return;
    }
    for (std::uint32_t y = 0; y < y_act.degree(); ++y) {
        if (used[y]) continue;
        const std::size_t step = added_cost(x_act, y_act, y_of, v, y);
        if (partial + step >= best) continue;
        y_of[v] = y;
        used[y] = true;
        injection_search(x_act, y_act, y_of, used, v + 1, partial + step, best);
        used[y] = false;
        y_of[v] = std::numeric_limits<std::uint32_t>::max();
    }
}

inline std::size_t greedy_injection_cost(const PermTuple& x_act, const PermTuple& y_act) {
    constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> y_of(x_act.degree(), unset);
    std::vector<bool> used(y_act.degree(), false);
    std::size_t total = 0;
    for (std::uint32_t v = 0; v < x_act.degree(); ++v) {
        std::size_t best_step = std::numeric_limits<std::size_t>::max();
        std::uint32_t best_y = 0;
        for (std::uint32_t y = 0; y < y_act.degree(); ++y) {
            if (used[y]) continue;
            std::size_t step = added_cost(x_act, y_act, y_of, v, y);
            if (step < best_step) {
                best_step = step;
                best_y = y;
            }
        }
        y_of[v] = best_y;
        used[best_y] = true;
        total += best_step;
    }
    return total;
}

inline std::uint64_t falling_factorial_saturating(std::uint64_t n, std::uint64_t k) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 0; i < k; ++i) f = saturating_mul(f, n - i);
    return f;
}

} // namespace detail

/// Minimal per-point equivariance defect over injections of the smaller set
/// into the larger: min_f (1/|X|) sum_s sum_x [f(s x) != s f(x)]. Exact via
/// branch-and-bound within the budget; optionally a greedy upper bound beyond
/// it, labeled as such.
inline GsetDistance gset_distance(const GSet& xs, const GSet& ys,
                                  const GsetDistanceOptions& opts = {}) {
    if (xs.rank() != ys.rank()) throw PreconditionError("actions have different numbers of generators");
    if (xs.size() == 0 || ys.size() == 0) throw PreconditionError("actions must be on nonempty sets");
    const GSet& small = xs.size() <= ys.size() ? xs : ys;
    const GSet& large = xs.size() <= ys.size() ? ys : xs;
    const std::size_t m = small.size();

    const std::uint64_t leaves = detail::falling_factorial_saturating(large.size(), m);
    if (m > opts.max_exact_points || leaves > opts.max_injections) {
        if (!opts.allow_greedy) {
            std::ostringstream os;
            os << "exact injection search refused: |X| = " << m << " (ceiling "
               << opts.max_exact_points << "), injections = " << leaves << " (ceiling "
               << opts.max_injections << "); pass allow_greedy for a labeled upper bound";
            throw BudgetError(os.str());
        }
        std::size_t cost = detail::greedy_injection_cost(small.action, large.action);
        return GsetDistance{Rat(cost, m), false};
    }

    std::vector<std::uint32_t> y_of(m, std::numeric_limits<std::uint32_t>::max());
    std::vector<bool> used(large.size(), false);
    std::size_t best = small.rank() * m + 1;
    detail::injection_search(small.action, large.action, y_of, used, 0, 0, best);
    return GsetDistance{Rat(best, m), true};
}

// ---------------------------------------------------------------------------
// Finite marginals of the random-stabilizer measure: the probability that the
// stabilizer of a uniform point meets A in exactly B.

struct MarginalSpec {
    std::vector<Word> A;
    std::vector<Word> B;
};

inline Rat random_stabilizer_marginal(const GSet& xs, const MarginalSpec& spec) {
    ProbeSet a(Alphabet::standard(std::max<std::size_t>(xs.rank(), 1)), spec.A);
    Trace b_mask(a.size());
    for (const Word& w : spec.B) {
        std::size_t pos = a.index_of(w);
        if (pos == ProbeSet::npos) throw PreconditionError("B must be a subset of A");
        b_mask.set(pos);
    }
    const std::size_t n = xs.size();
    if (n == 0) throw PreconditionError("action must be on a nonempty set");
    std::size_t hits = 0;
    for (std::uint32_t x = 0; x < n; ++x)
        if (stab_trace(xs.action, x, a) == b_mask) ++hits;
    return Rat(hits, n);
}

} // namespace permeq
