#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permeq/errors.hpp"
#include "permeq/rational.hpp"
#include "permeq/word.hpp"

namespace permeq {

/// A finite set E of relator words over a fixed alphabet. Tuples satisfying
/// every relator form the solution set Sol_E(n).
class EquationSystem {
public:
    EquationSystem(Alphabet alphabet, std::vector<Word> relators)
        : alphabet_(std::move(alphabet)), relators_(std::move(relators)) {
        if (relators_.empty()) throw ParseError("equation system needs at least one relator");
        for (std::size_t i = 0; i < relators_.size(); ++i) {
            const Word& w = relators_[i];
            if (w.empty()) throw ParseError("relator reduces to the empty word");
            if (w.max_index() >= alphabet_.rank())
                throw ParseError("relator uses a generator outside the alphabet");
            for (std::size_t j = i + 1; j < relators_.size(); ++j)
                if (w == relators_[j]) throw ParseError("duplicate relator");
        }
    }

    static EquationSystem commutator() {
        Alphabet a = Alphabet::standard(2);
        return EquationSystem(a, {parse_word("xyXY", a)});
    }

    // The relator x y^m x^{-1} y^{-n}.
    static EquationSystem baumslag_solitar(std::int64_t m, std::int64_t n) {
        Alphabet a = Alphabet::standard(2);
        Word x = Word::generator(0);
        Word y = Word::generator(1);
        Word rel = concat(concat(x, word_pow(y, m)), concat(x.inverted(), word_pow(y, -n)));
        return EquationSystem(a, {rel});
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t rank() const { return alphabet_.rank(); }
    const std::vector<Word>& relators() const { return relators_; }
    std::size_t size() const { return relators_.size(); }

    std::size_t max_relator_length() const {
        std::size_t m = 0;
        for (const Word& w : relators_) m = std::max(m, w.size());
        return m;
    }

private:
    Alphabet alphabet_;
    std::vector<Word> relators_;
};

inline bool is_solution(const EquationSystem& e, const PermTuple& sigma) {
    if (sigma.arity() != e.rank()) throw PreconditionError("tuple arity does not match alphabet rank");
    for (const Word& w : e.relators())
        if (!evaluate(w, sigma).is_identity()) return false;
    return true;
}

/// Mean relator displacement (1/|E|) * sum_w d(w(sigma), id), exact. Zero
/// exactly on solutions; with one check per draw this is also the single-shot
/// rejection probability of the sampling tester.
inline Rat defect(const EquationSystem& e, const PermTuple& sigma) {
    if (sigma.arity() != e.rank()) throw PreconditionError("tuple arity does not match alphabet rank");
    const Perm id = Perm::identity(sigma.degree());
    Rat sum(0);
    for (const Word& w : e.relators()) sum += dist(evaluate(w, sigma), id);
    return sum / Rat(e.size());
}

// ---------------------------------------------------------------------------
// Text format: first line the alphabet names (spaces optional), then one
// relator word per line. Blank lines and '#' comments skipped.

inline EquationSystem parse_system_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::optional<Alphabet> alphabet;
    std::vector<Word> relators;
    while (std::getline(is, line)) {
        std::string stripped;
        for (char c : line) {
            if (c == '#') break;
            if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
        }
        if (stripped.empty()) continue;
        if (!alphabet) {
            alphabet.emplace(stripped);
            continue;
        }
        relators.push_back(parse_word(stripped, *alphabet));
    }
    if (!alphabet) throw ParseError("system file is empty");
    return EquationSystem(*alphabet, std::move(relators));
}

/// Built-in systems: "commutator" and "bs <m> <n>". Returns nullopt for
/// anything else (callers typically fall back to reading a file).
inline std::optional<EquationSystem> resolve_named_system(const std::string& name) {
    if (name == "commutator") return EquationSystem::commutator();
    std::istringstream is(name);
    std::string head;
    is >> head;
    if (head == "bs") {
        std::int64_t m, n;
        std::string rest;
        if (!(is >> m >> n) || is >> rest) return std::nullopt; // malformed: not a built-in
        return EquationSystem::baumslag_solitar(m, n);
    }
    return std::nullopt;
}

} // namespace permeq
