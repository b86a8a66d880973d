#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "permeq/errors.hpp"
#include "permeq/rational.hpp"
#include "permeq/rng.hpp"

namespace permeq {

/// A permutation of [n]. Points are 0-based internally; all text and JSON
/// formats are 1-based.
class Perm {
public:
    Perm() = default;

    static Perm identity(std::size_t n) {
        Perm p;
        p.img_.resize(n);
        std::iota(p.img_.begin(), p.img_.end(), 0u);
        return p;
    }

    // images[x] = image of x, 0-based; must be a bijection of [0,n).
    static Perm from_images(std::vector<std::uint32_t> images) {
        std::vector<bool> seen(images.size(), false);
        for (auto v : images) {
            if (v >= images.size() || seen[v])
                throw ParseError("image list is not a bijection");
            seen[v] = true;
        }
        Perm p;
        p.img_ = std::move(images);
        return p;
    }

    std::size_t degree() const { return img_.size(); }
    std::uint32_t apply(std::uint32_t x) const { return img_[x]; }
    const std::vector<std::uint32_t>& images() const { return img_; }

    Perm inverse() const {
        Perm p;
        p.img_.resize(img_.size());
        for (std::uint32_t x = 0; x < img_.size(); ++x) p.img_[img_[x]] = x;
        return p;
    }

    // Left action: (a*b)(x) = a(b(x)), b applied first.
    friend Perm compose(const Perm& a, const Perm& b) {
        Perm p;
        p.img_.resize(b.img_.size());
        for (std::uint32_t x = 0; x < b.img_.size(); ++x) p.img_[x] = a.img_[b.img_[x]];
        return p;
    }

    bool operator==(const Perm& o) const { return img_ == o.img_; }
    bool operator!=(const Perm& o) const { return !(*this == o); }
    bool operator<(const Perm& o) const { return img_ < o.img_; }

    bool is_identity() const {
        for (std::uint32_t x = 0; x < img_.size(); ++x)
            if (img_[x] != x) return false;
        return true;
    }

    // Swaps the images at positions u and v (right multiplication by the
    // transposition (u v)).
    Perm with_swapped_images(std::uint32_t u, std::uint32_t v) const {
        Perm p = *this;
        std::swap(p.img_[u], p.img_[v]);
        return p;
    }

private:
    std::vector<std::uint32_t> img_;
};

inline Perm random_perm(Rng& rng, std::size_t n) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(img[i - 1], img[j]);
    }
    return Perm::from_images(std::move(img));
}

inline Perm perm_pow(const Perm& p, std::uint64_t e) {
    Perm acc = Perm::identity(p.degree());
    Perm b = p;
    while (e > 0) {
        if (e & 1) acc = compose(acc, b);
        b = compose(b, b);
        e >>= 1;
    }
    return acc;
}

/// A k-tuple of permutations of common degree n: the object under test.
/// Inverses are precomputed so that both lookup directions are O(1).
class PermTuple {
public:
    PermTuple() = default;

    explicit PermTuple(std::vector<Perm> perms) : perms_(std::move(perms)) {
        if (perms_.empty()) throw PreconditionError("a tuple needs at least one permutation");
        const std::size_t n = perms_.front().degree();
        for (const auto& p : perms_)
            if (p.degree() != n) throw PreconditionError("tuple has mixed degrees");
        inv_.reserve(perms_.size());
        for (const auto& p : perms_) inv_.push_back(p.inverse());
    }

    static PermTuple identity(std::size_t k, std::size_t n) {
        std::vector<Perm> ps(k, Perm::identity(n));
        return PermTuple(std::move(ps));
    }

    std::size_t arity() const { return perms_.size(); }
    std::size_t degree() const { return perms_.empty() ? 0 : perms_.front().degree(); }
    const Perm& perm(std::size_t i) const { return perms_[i]; }
    const Perm& inv_perm(std::size_t i) const { return inv_[i]; }
    const std::vector<Perm>& perms() const { return perms_; }

    std::uint32_t fwd(std::size_t i, std::uint32_t x) const { return perms_[i].apply(x); }
    std::uint32_t bwd(std::size_t i, std::uint32_t x) const { return inv_[i].apply(x); }

    bool operator==(const PermTuple& o) const { return perms_ == o.perms_; }
    bool operator<(const PermTuple& o) const { return perms_ < o.perms_; }

private:
    std::vector<Perm> perms_;
    std::vector<Perm> inv_;
};

inline PermTuple random_tuple(Rng& rng, std::size_t k, std::size_t n) {
    std::vector<Perm> ps;
    ps.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ps.push_back(random_perm(rng, n));
    return PermTuple(std::move(ps));
}

// Simultaneous conjugation by pi: each coordinate becomes pi sigma_i pi^{-1}.
// This is exactly a relabeling of the underlying point set.
inline PermTuple conjugate(const PermTuple& t, const Perm& pi) {
    std::vector<Perm> ps;
    ps.reserve(t.arity());
    const Perm pinv = pi.inverse();
    for (std::size_t i = 0; i < t.arity(); ++i)
        ps.push_back(compose(pi, compose(t.perm(i), pinv)));
    return PermTuple(std::move(ps));
}

// ---------------------------------------------------------------------------
// Normalized Hamming metric

/// Fraction of points where the two permutations disagree, as an exact
/// rational in [0,1]. Degrees must match; use dist_cross otherwise.
inline Rat dist(const Perm& a, const Perm& b) {
    if (a.degree() != b.degree())
        throw PreconditionError("dist needs equal degrees; use dist_cross");
    std::size_t moved = 0;
    for (std::uint32_t x = 0; x < a.degree(); ++x)
        if (a.apply(x) != b.apply(x)) ++moved;
    return Rat(moved, a.degree() == 0 ? 1 : a.degree());
}

/// Cross-degree variant: disagreements counted on the smaller ground set and
/// normalized by its size. Symmetric in its arguments.
inline Rat dist_cross(const Perm& a, const Perm& b) {
    const Perm& small = a.degree() <= b.degree() ? a : b;
    const Perm& large = a.degree() <= b.degree() ? b : a;
    const std::size_t n = small.degree();
    std::size_t moved = 0;
    for (std::uint32_t x = 0; x < n; ++x)
        if (small.apply(x) != large.apply(x)) ++moved;
    return Rat(moved, n == 0 ? 1 : n);
}

/// Coordinatewise sum of distances, in [0, k]. Degrees may differ between the
/// tuples (not within one).
inline Rat tuple_dist(const PermTuple& a, const PermTuple& b) {
    if (a.arity() != b.arity()) throw PreconditionError("tuple_dist needs equal arity");
    Rat sum(0);
    for (std::size_t i = 0; i < a.arity(); ++i) sum += dist_cross(a.perm(i), b.perm(i));
    return sum;
}

// ---------------------------------------------------------------------------
// Query accounting

/// One unit lookup: "what is sigma_i x" (inverse=false) or "what is
/// sigma_i^{-1} x" (inverse=true), with the oracle's answer.
struct QueryRecord {
    std::uint32_t coord;
    bool inverse;
    std::uint32_t point;
    std::uint32_t answer;
};

/// Wraps a tuple and counts unit lookups. One owner per tester run. An
/// optional transcript records every query for audit of the query bound.
class QueryOracle {
public:
    explicit QueryOracle(const PermTuple& tuple) : tuple_(&tuple) {}
    // The oracle only borrows the tuple, so a temporary would dangle.
    explicit QueryOracle(PermTuple&&) = delete;

    std::size_t degree() const { return tuple_->degree(); }
    std::size_t arity() const { return tuple_->arity(); }

    std::uint32_t fwd(std::size_t i, std::uint32_t x) {
        ++count_;
        std::uint32_t y = tuple_->fwd(i, x);
        if (recording_) log_.push_back(QueryRecord{static_cast<std::uint32_t>(i), false, x, y});
        return y;
    }
    std::uint32_t bwd(std::size_t i, std::uint32_t x) {
        ++count_;
        std::uint32_t y = tuple_->bwd(i, x);
        if (recording_) log_.push_back(QueryRecord{static_cast<std::uint32_t>(i), true, x, y});
        return y;
    }

    std::uint64_t count() const { return count_; }
    void set_recording(bool on) { recording_ = on; }
    const std::vector<QueryRecord>& transcript() const { return log_; }
    std::vector<QueryRecord> take_transcript() { return std::move(log_); }

    void reset() {
        count_ = 0;
        log_.clear();
    }

private:
    const PermTuple* tuple_;
    std::uint64_t count_ = 0;
    bool recording_ = false;
    std::vector<QueryRecord> log_;
};

// ---------------------------------------------------------------------------
// Text formats. Image lists are 1-based ("2 3 1"); cycle notation accepts
// "(1 2 3)(4 5)", fixed points omitted, "()" for the identity.

inline std::string format_perm(const Perm& p) {
    std::ostringstream os;
    for (std::size_t x = 0; x < p.degree(); ++x) {
        if (x) os << ' ';
        os << p.apply(static_cast<std::uint32_t>(x)) + 1;
    }
    return os.str();
}

inline std::string format_cycles(const Perm& p) {
    std::vector<bool> seen(p.degree(), false);
    std::ostringstream os;
    bool any = false;
    for (std::uint32_t x = 0; x < p.degree(); ++x) {
        if (seen[x] || p.apply(x) == x) continue;
        any = true;
        os << '(';
        std::uint32_t y = x;
        bool first = true;
        do {
            if (!first) os << ' ';
            os << y + 1;
            seen[y] = true;
            y = p.apply(y);
            first = false;
        } while (y != x);
        os << ')';
    }
    return any ? os.str() : "()";
}

namespace detail {

inline std::vector<std::vector<std::uint32_t>> parse_cycle_groups(const std::string& text) {
    std::vector<std::vector<std::uint32_t>> cycles;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] != '(')
            throw ParseError(std::string("expected '(' in cycle notation, got '") + text[i] + "'", i + 1);
        ++i;
        std::vector<std::uint32_t> cyc;
        while (true) {
            while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
                ++i;
            if (i >= text.size()) throw ParseError("unterminated cycle", i);
            if (text[i] == ')') {
                ++i;
                break;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError(std::string("unexpected character '") + text[i] + "' in cycle", i + 1);
            std::uint64_t v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
                ++i;
            }
            if (v == 0) throw ParseError("points are 1-based; 0 is not a point", i);
            cyc.push_back(static_cast<std::uint32_t>(v - 1));
        }
        if (!cyc.empty()) cycles.push_back(std::move(cyc));
    }
    return cycles;
}

} // namespace detail

/// Parses either a 1-based image list or cycle notation. For cycle notation
/// the degree is `degree_hint` when given, otherwise the largest point named.
inline Perm parse_perm(const std::string& text, std::size_t degree_hint = 0) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty permutation literal");
    if (text[first] == '(') {
        auto cycles = detail::parse_cycle_groups(text);
        std::size_t n = degree_hint;
        for (const auto& c : cycles)
            for (auto v : c) n = std::max<std::size_t>(n, v + 1);
        std::vector<std::uint32_t> img(n);
        std::iota(img.begin(), img.end(), 0u);
        std::vector<bool> seen(n, false);
        for (const auto& c : cycles) {
            for (std::size_t j = 0; j < c.size(); ++j) {
                std::uint32_t from = c[j];
                std::uint32_t to = c[(j + 1) % c.size()];
                if (seen[from]) throw ParseError("point repeated in cycle notation");
                seen[from] = true;
                img[from] = to;
            }
        }
        return Perm::from_images(std::move(img));
    }
    std::istringstream is(text);
    std::vector<std::uint32_t> img;
    std::int64_t v;
    while (is >> v) {
        if (v < 1) throw ParseError("image entries are 1-based positive integers");
        img.push_back(static_cast<std::uint32_t>(v - 1));
    }
    if (!is.eof()) throw ParseError("trailing garbage in image list: '" + text + "'");
    if (img.empty()) throw ParseError("empty permutation literal");
    if (degree_hint != 0 && img.size() != degree_hint)
        throw ParseError("image list length disagrees with expected degree");
    return Perm::from_images(std::move(img));
}

/// One permutation per line; blank lines and '#' comments skipped. An optional
/// leading "n=<N>" line pins the degree (needed when every line is in cycle
/// notation and the largest point is not the degree).
inline PermTuple parse_tuple_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> entries;
    std::size_t degree_hint = 0;
    while (std::getline(is, line)) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (entries.empty() && line.compare(first, 2, "n=") == 0) {
            degree_hint = std::stoul(line.substr(first + 2));
            continue;
        }
        entries.push_back(line);
    }
    if (entries.empty()) throw ParseError("no permutations found in tuple input");
    // Cycle lines need the final degree up front, so scan image-list lines first.
    for (const auto& e : entries) {
        std::size_t f = e.find_first_not_of(" \t\r");
        if (e[f] != '(') {
            Perm p = parse_perm(e);
            degree_hint = std::max(degree_hint, p.degree());
        } else {
            for (const auto& c : detail::parse_cycle_groups(e))
                for (auto v : c) degree_hint = std::max<std::size_t>(degree_hint, v + 1);
        }
    }
    std::vector<Perm> perms;
    perms.reserve(entries.size());
    for (const auto& e : entries) perms.push_back(parse_perm(e, degree_hint));
    return PermTuple(std::move(perms));
}

} // namespace permeq
