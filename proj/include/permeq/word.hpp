#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permeq/errors.hpp"
#include "permeq/perm.hpp"

namespace permeq {

/// Names for the k free generators. Single letters: lowercase is the
/// generator, the matching uppercase its inverse. Defaults are x, y, z,
/// then a, b, c, ...
class Alphabet {
public:
    static Alphabet standard(std::size_t k) {
        static const std::string pool = "xyzabcdefghijklmnopqrstuvw";
        if (k == 0 || k > pool.size())
            throw ParseError("rank must be between 1 and 26");
        return Alphabet(pool.substr(0, k));
    }

    explicit Alphabet(std::string names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            char c = names_[i];
            if (!std::islower(static_cast<unsigned char>(c)))
                throw ParseError("generator names must be lowercase letters");
            if (names_.find(c, i + 1) != std::string::npos)
                throw ParseError("duplicate generator name");
        }
        if (names_.empty()) throw ParseError("alphabet needs at least one generator");
    }

    std::size_t rank() const { return names_.size(); }
    char name(std::size_t i) const { return names_[i]; }

    std::optional<std::size_t> index_of(char lowercase) const {
        auto pos = names_.find(lowercase);
        if (pos == std::string::npos) return std::nullopt;
        return pos;
    }

    bool operator==(const Alphabet& o) const { return names_ == o.names_; }

private:
    std::string names_;
};

/// One letter of a word: generator index plus direction. Letters compare by
/// code() = 2*index + inverse, so x < X < y < Y < ...; shortlex below builds
/// on this.
struct Letter {
    std::uint32_t index = 0;
    bool inverse = false;

    std::uint32_t code() const { return 2 * index + (inverse ? 1u : 0u); }
    Letter flipped() const { return Letter{index, !inverse}; }

    bool operator==(const Letter& o) const { return index == o.index && inverse == o.inverse; }
    bool operator!=(const Letter& o) const { return !(*this == o); }
    bool operator<(const Letter& o) const { return code() < o.code(); }
};

/// A freely reduced word over the generators; the class invariant is that no
/// letter is adjacent to its own inverse. Letters are stored in reading
/// order, leftmost first.
class Word {
public:
    Word() = default;

    static Word generator(std::uint32_t index, bool inverse = false) {
        Word w;
        w.letters_.push_back(Letter{index, inverse});
        return w;
    }

    // Reduces fully: cancels adjacent inverse pairs until none remain.
    static Word from_letters(const std::vector<Letter>& raw) {
        Word w;
        for (const Letter& l : raw) w.push_reduced(l);
        return w;
    }

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }
    const Letter& letter(std::size_t i) const { return letters_[i]; }

    Word inverted() const {
        Word w;
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            w.letters_.push_back(it->flipped());
        return w;
    }

    friend Word concat(const Word& a, const Word& b) {
        Word w = a;
        for (const Letter& l : b.letters_) w.push_reduced(l);
        return w;
    }

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    bool operator!=(const Word& o) const { return !(*this == o); }

    std::uint32_t max_index() const {
        std::uint32_t m = 0;
        for (const Letter& l : letters_) m = std::max(m, l.index);
        return m;
    }

private:
    void push_reduced(const Letter& l) {
        if (!letters_.empty() && letters_.back() == l.flipped())
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    std::vector<Letter> letters_;
};

// w^e with free reduction (negative exponents invert first).
inline Word word_pow(const Word& w, std::int64_t e) {
    Word base = e < 0 ? w.inverted() : w;
    std::uint64_t reps = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    Word acc;
    for (std::uint64_t i = 0; i < reps; ++i) acc = concat(acc, base);
    return acc;
}

/// Length-then-lexicographic order on reduced words, letters compared by
/// code(). The empty word is least.
inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.letter(i) != b.letter(i)) return a.letter(i) < b.letter(i);
    }
    return false;
}

struct ShortlexLess {
    bool operator()(const Word& a, const Word& b) const { return shortlex_less(a, b); }
};

// ---------------------------------------------------------------------------
// Text form: lowercase = generator, uppercase = inverse, no separators.
// "1" (or an all-whitespace string) denotes the empty word.

inline Word parse_word(const std::string& text, const Alphabet& alphabet) {
    std::vector<Letter> raw;
    bool saw_one = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '1') {
            saw_one = true;
            continue;
        }
        char low = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        auto idx = alphabet.index_of(low);
        if (!idx)
            throw ParseError(std::string("unknown letter '") + c + "'", i + 1);
        raw.push_back(Letter{static_cast<std::uint32_t>(*idx),
                             std::isupper(static_cast<unsigned char>(c)) != 0});
    }
    if (saw_one && !raw.empty())
        throw ParseError("'1' is the empty word and cannot be mixed with letters");
    if (!saw_one && raw.empty())
        throw ParseError("empty word literal; the empty word is written '1'");
    return Word::from_letters(raw);
}

inline std::string format_word(const Word& w, const Alphabet& alphabet) {
    if (w.empty()) return "1";
    std::string out;
    out.reserve(w.size());
    for (const Letter& l : w.letters()) {
        char c = alphabet.name(l.index);
        out.push_back(l.inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration of all freely reduced words of length <= max_len over k
// generators, in shortlex order. There are 1 + sum_{l=1..r} 2k(2k-1)^(l-1)
// of them; callers should check count_reduced_words against their budget
// first.

inline std::uint64_t count_reduced_words(std::size_t k, std::size_t max_len) {
    std::uint64_t total = 1;
    std::uint64_t layer = 1;
    for (std::size_t l = 1; l <= max_len; ++l) {
        layer *= (l == 1) ? 2 * static_cast<std::uint64_t>(k)
                          : 2 * static_cast<std::uint64_t>(k) - 1;
        total += layer;
    }
    return total;
}

inline std::vector<Word> enumerate_reduced_words(std::size_t k, std::size_t max_len) {
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(count_reduced_words(k, max_len)));
    out.push_back(Word());
    std::size_t layer_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t layer_end = out.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (std::uint32_t code = 0; code < 2 * k; ++code) {
                Letter l{code / 2, (code & 1) != 0};
                const Word& parent = out[i];
                if (!parent.empty() && parent.letters().back() == l.flipped()) continue;
                std::vector<Letter> ls = parent.letters();
                ls.push_back(l);
                out.push_back(Word::from_letters(ls));
            }
        }
        layer_begin = layer_end;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation: substitute sigma_i for generator i. Letters act on points with
// the rightmost letter applied first, so (uv)(sigma) maps x to
// u(sigma)(v(sigma)(x)).

inline std::uint32_t evaluate_point(const Word& w, const PermTuple& tuple, std::uint32_t x) {
    std::uint32_t cur = x;
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
        cur = it->inverse ? tuple.bwd(it->index, cur) : tuple.fwd(it->index, cur);
    return cur;
}

inline Perm evaluate(const Word& w, const PermTuple& tuple) {
    const std::size_t n = tuple.degree();
    std::vector<std::uint32_t> img(n);
    for (std::uint32_t x = 0; x < n; ++x) img[x] = evaluate_point(w, tuple, x);
    return Perm::from_images(std::move(img));
}

/// Same walk through a counting oracle: each letter is one unit query, so a
/// call costs exactly |w| units.
inline std::uint32_t evaluate_point_counted(const Word& w, QueryOracle& oracle, std::uint32_t x) {
    std::uint32_t cur = x;
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
        cur = it->inverse ? oracle.bwd(it->index, cur) : oracle.fwd(it->index, cur);
    return cur;
}

} // namespace permeq
