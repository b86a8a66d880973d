#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "permeq/errors.hpp"
#include "permeq/graph.hpp"
#include "permeq/rational.hpp"
#include "permeq/rng.hpp"
#include "permeq/word.hpp"

namespace permeq {

/// An ordered set of distinct probe words, held in shortlex order so that
/// subset bitmasks mean the same thing across runs.
class ProbeSet {
public:
    ProbeSet(Alphabet alphabet, std::vector<Word> words)
        : alphabet_(std::move(alphabet)), words_(std::move(words)) {
        std::sort(words_.begin(), words_.end(), ShortlexLess{});
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
        for (const Word& w : words_)
            if (w.max_index() >= alphabet_.rank())
                throw PreconditionError("probe word uses a generator outside the alphabet");
    }

    /// All nonempty reduced words of length <= max_len.
    static ProbeSet words_up_to(const Alphabet& alphabet, std::size_t max_len) {
        std::vector<Word> ws = enumerate_reduced_words(alphabet.rank(), max_len);
        ws.erase(std::remove_if(ws.begin(), ws.end(), [](const Word& w) { return w.empty(); }),
                 ws.end());
        return ProbeSet(alphabet, std::move(ws));
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return words_.size(); }
    const Word& word(std::size_t i) const { return words_[i]; }
    const std::vector<Word>& words() const { return words_; }

    std::size_t total_letters() const {
        std::size_t t = 0;
        for (const Word& w : words_) t += w.size();
        return t;
    }

    // Position of w, or npos. Words are shortlex-sorted, so this is a binary search.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const Word& w) const {
        auto it = std::lower_bound(words_.begin(), words_.end(), w, ShortlexLess{});
        if (it == words_.end() || !(*it == w)) return npos;
        return static_cast<std::size_t>(it - words_.begin());
    }

    bool operator==(const ProbeSet& o) const {
        return alphabet_ == o.alphabet_ && words_ == o.words_;
    }

private:
    Alphabet alphabet_;
    std::vector<Word> words_;
};

/// A subset of a probe set, as a bitmask over probe positions.
class Trace {
public:
    Trace() = default;
    explicit Trace(std::size_t nbits) : bits_((nbits + 63) / 64, 0) {}

    void set(std::size_t i) { bits_[i / 64] |= std::uint64_t(1) << (i % 64); }
    bool test(std::size_t i) const { return (bits_[i / 64] >> (i % 64)) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::vector<std::uint32_t> indices() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < bits_.size() * 64; ++i)
            if (test(i)) out.push_back(static_cast<std::uint32_t>(i));
        return out;
    }

    bool operator==(const Trace& o) const { return bits_ == o.bits_; }
    bool operator<(const Trace& o) const { return bits_ < o.bits_; }

private:
    std::vector<std::uint64_t> bits_;
};

/// Which probe words fix the point x under the tuple's action.
inline Trace stab_trace(const PermTuple& sigma, std::uint32_t x, const ProbeSet& probe) {
    if (probe.alphabet().rank() > sigma.arity())
        throw PreconditionError("probe alphabet is larger than the tuple's arity");
    Trace t(probe.size());
    for (std::size_t i = 0; i < probe.size(); ++i)
        if (evaluate_point(probe.word(i), sigma, x) == x) t.set(i);
    return t;
}

/// Same through a counting oracle; costs exactly the probe's total letter count.
inline Trace stab_trace_counted(QueryOracle& oracle, std::uint32_t x, const ProbeSet& probe) {
    if (probe.alphabet().rank() > oracle.arity())
        throw PreconditionError("probe alphabet is larger than the tuple's arity");
    Trace t(probe.size());
    for (std::size_t i = 0; i < probe.size(); ++i)
        if (evaluate_point_counted(probe.word(i), oracle, x) == x) t.set(i);
    return t;
}

/// A probability distribution over subsets of a probe set, stored sparsely.
/// At most n distinct traces occur for a degree-n tuple, so the support stays
/// tiny even when 2^|P| is astronomical.
struct LocalStats {
    std::shared_ptr<const ProbeSet> probe;
    std::map<Trace, Rat> weights;

    Rat total_mass() const {
        Rat s(0);
        for (const auto& [t, w] : weights) s += w;
        return s;
    }
};

inline LocalStats exact_local_stats(const PermTuple& sigma, std::shared_ptr<const ProbeSet> probe) {
    const std::size_t n = sigma.degree();
    if (n == 0) throw PreconditionError("degree must be positive");
    std::map<Trace, std::size_t> counts;
    for (std::uint32_t x = 0; x < n; ++x) ++counts[stab_trace(sigma, x, *probe)];
    LocalStats out{std::move(probe), {}};
    for (auto& [t, c] : counts) out.weights.emplace(t, Rat(c, n));
    return out;
}

inline LocalStats exact_local_stats(const PermTuple& sigma, const ProbeSet& probe) {
    return exact_local_stats(sigma, std::make_shared<const ProbeSet>(probe));
}

/// Empirical counterpart: s uniform points through the counting oracle, atom
/// weight = multiplicity / s.
inline LocalStats empirical_local_stats(QueryOracle& oracle, std::shared_ptr<const ProbeSet> probe,
                                        std::size_t s, Rng& rng) {
    if (s == 0) throw PreconditionError("sample count must be positive");
    const std::size_t n = oracle.degree();
    if (n == 0) throw PreconditionError("degree must be positive");
    std::map<Trace, std::size_t> counts;
    for (std::size_t j = 0; j < s; ++j) {
        std::uint32_t x = static_cast<std::uint32_t>(rng.below(n));
        ++counts[stab_trace_counted(oracle, x, *probe)];
    }
    LocalStats out{std::move(probe), {}};
    for (auto& [t, c] : counts) out.weights.emplace(t, Rat(c, s));
    return out;
}

namespace detail {

inline void require_common_probe(const LocalStats& a, const LocalStats& b) {
    if (a.probe == b.probe) return;
    if (a.probe && b.probe && *a.probe == *b.probe) return;
    throw PreconditionError("distributions are over different probe sets");
}

} // namespace detail

/// Exact total-variation distance: half the L1 difference over the union of
/// atoms.
inline Rat tv_distance(const LocalStats& a, const LocalStats& b) {
    detail::require_common_probe(a, b);
    Rat sum(0);
    auto ia = a.weights.begin();
    auto ib = b.weights.begin();
    while (ia != a.weights.end() || ib != b.weights.end()) {
        if (ib == b.weights.end() || (ia != a.weights.end() && ia->first < ib->first)) {
            sum += ia->second;
            ++ia;
        } else if (ia == a.weights.end() || ib->first < ia->first) {
            sum += ib->second;
            ++ib;
        } else {
            sum += abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return sum / 2;
}

/// Pushforward onto a smaller probe set: each atom keeps only the bits of the
/// sub-probe, masses merging accordingly.
inline LocalStats restrict(const LocalStats& a, std::shared_ptr<const ProbeSet> sub) {
    std::vector<std::size_t> pos(sub->size());
    for (std::size_t j = 0; j < sub->size(); ++j) {
        pos[j] = a.probe->index_of(sub->word(j));
        if (pos[j] == ProbeSet::npos)
            throw PreconditionError("restriction target is not a subset of the probe set");
    }
    LocalStats out{std::move(sub), {}};
    for (const auto& [t, w] : a.weights) {
        Trace nt(out.probe->size());
        for (std::size_t j = 0; j < pos.size(); ++j)
            if (t.test(pos[j])) nt.set(j);
        out.weights[nt] += w;
    }
    return out;
}

inline LocalStats restrict(const LocalStats& a, const ProbeSet& sub) {
    return restrict(a, std::make_shared<const ProbeSet>(sub));
}

// ---------------------------------------------------------------------------
// Ball statistics. The radius-r ball around a point and the stabilizer trace
// over all words of length <= 2r carry the same information, so the two
// induced partitions of [n] must coincide.

inline std::map<BallCode, std::size_t> ball_stats(const PermTuple& sigma, std::size_t radius) {
    const LabeledGraph g(sigma);
    std::map<BallCode, std::size_t> out;
    for (std::uint32_t x = 0; x < sigma.degree(); ++x) ++out[ball_code(g, x, radius)];
    return out;
}

/// Partition of [n] by some per-point key, as class ids numbered in order of
/// first appearance.
template <typename Key>
std::vector<std::uint32_t> classes_by_key(const std::vector<Key>& keys) {
    std::map<Key, std::uint32_t> ids;
    std::vector<std::uint32_t> out;
    out.reserve(keys.size());
    for (const Key& k : keys) {
        auto [it, fresh] = ids.emplace(k, static_cast<std::uint32_t>(ids.size()));
        (void)fresh;
        out.push_back(it->second);
    }
    return out;
}

inline std::vector<std::uint32_t> ball_partition(const PermTuple& sigma, std::size_t radius) {
    const LabeledGraph g(sigma);
    std::vector<BallCode> keys;
    keys.reserve(sigma.degree());
    for (std::uint32_t x = 0; x < sigma.degree(); ++x) keys.push_back(ball_code(g, x, radius));
    return classes_by_key(keys);
}

inline std::vector<std::uint32_t> trace_partition(const PermTuple& sigma, const ProbeSet& probe) {
    std::vector<Trace> keys;
    keys.reserve(sigma.degree());
    for (std::uint32_t x = 0; x < sigma.degree(); ++x) keys.push_back(stab_trace(sigma, x, probe));
    return classes_by_key(keys);
}

} // namespace permeq
