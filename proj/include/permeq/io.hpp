#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "permeq/equations.hpp"
#include "permeq/errors.hpp"
#include "permeq/local_stats.hpp"
#include "permeq/perm.hpp"
#include "permeq/testers.hpp"

namespace permeq {

// Insertion-ordered JSON so every serialized document has one canonical byte
// form per code path.
using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << content;
}

// ---------------------------------------------------------------------------
// Permutations and tuples. JSON uses 1-based image arrays, matching the text
// format.

inline Json perm_to_json(const Perm& p) {
    Json arr = Json::array();
    for (std::uint32_t x = 0; x < p.degree(); ++x) arr.push_back(p.apply(x) + 1);
    return arr;
}

inline Perm perm_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("permutation JSON must be a nonempty array");
    std::vector<std::uint32_t> img;
    img.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
            throw ParseError("image entries are 1-based positive integers");
        img.push_back(static_cast<std::uint32_t>(v.get<std::int64_t>() - 1));
    }
    return Perm::from_images(std::move(img));
}

inline Json tuple_to_json(const PermTuple& t) {
    Json perms = Json::array();
    for (std::size_t i = 0; i < t.arity(); ++i) perms.push_back(perm_to_json(t.perm(i)));
    return Json{{"n", t.degree()}, {"k", t.arity()}, {"perms", perms}};
}

inline PermTuple tuple_from_json(const Json& j) {
    const Json* perms = nullptr;
    if (j.is_array())
        perms = &j;
    else if (j.is_object() && j.contains("perms"))
        perms = &j.at("perms");
    else
        throw ParseError("tuple JSON must be an array of permutations or {\"perms\": [...]}");
    std::vector<Perm> ps;
    for (const auto& pj : *perms) ps.push_back(perm_from_json(pj));
    return PermTuple(std::move(ps));
}

/// Loads a tuple from either format: JSON when the first non-space byte is
/// '[' or '{', the line-per-permutation text format otherwise.
inline PermTuple parse_tuple_any(const std::string& content) {
    std::size_t first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (content[first] == '[' || content[first] == '{')) {
        Json j = Json::parse(content, nullptr, false);
        if (j.is_discarded()) throw ParseError("invalid JSON in tuple input");
        return tuple_from_json(j);
    }
    return parse_tuple_text(content);
}

inline PermTuple load_tuple_file(const std::string& path) { return parse_tuple_any(read_file(path)); }

// ---------------------------------------------------------------------------
// Systems, distributions, verdicts

inline Json system_to_json(const EquationSystem& e) {
    std::string names;
    for (std::size_t i = 0; i < e.rank(); ++i) names.push_back(e.alphabet().name(i));
    Json rel = Json::array();
    for (const Word& w : e.relators()) rel.push_back(format_word(w, e.alphabet()));
    return Json{{"alphabet", names}, {"relators", rel}};
}

inline EquationSystem system_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("alphabet") || !j.contains("relators"))
        throw ParseError("system JSON needs \"alphabet\" and \"relators\"");
    Alphabet a(j.at("alphabet").get<std::string>());
    std::vector<Word> rels;
    for (const auto& r : j.at("relators")) rels.push_back(parse_word(r.get<std::string>(), a));
    return EquationSystem(a, std::move(rels));
}

/// Named system, JSON file, or text file — in that order of interpretation.
inline EquationSystem load_system(const std::string& name_or_path) {
    if (auto named = resolve_named_system(name_or_path)) return *named;
    const std::string content = read_file(name_or_path);
    std::size_t first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        Json j = Json::parse(content, nullptr, false);
        if (j.is_discarded()) throw ParseError("invalid JSON in system file");
        return system_from_json(j);
    }
    return parse_system_text(content);
}

// Atom key: the trace's words, comma-joined in shortlex order ("" = empty trace).
inline std::string trace_key(const Trace& t, const ProbeSet& probe) {
    std::string key;
    bool first = true;
    for (std::uint32_t i : t.indices()) {
        if (!first) key.push_back(',');
        key += format_word(probe.word(i), probe.alphabet());
        first = false;
    }
    return key;
}

inline Json stats_to_json(const LocalStats& s) {
    Json probe = Json::array();
    for (const Word& w : s.probe->words()) probe.push_back(format_word(w, s.probe->alphabet()));
    Json atoms = Json::object();
    for (const auto& [t, w] : s.weights) atoms[trace_key(t, *s.probe)] = rat_to_string(w);
    return Json{{"probe", probe}, {"atoms", atoms}};
}

inline std::string stats_to_csv(const LocalStats& s) {
    std::ostringstream os;
    os << "trace,weight,weight_float\n";
    for (const auto& [t, w] : s.weights) {
        std::string key = trace_key(t, *s.probe);
        for (char& c : key)
            if (c == ',') c = ' ';
        os << key << ',' << rat_to_string(w) << ',' << format_fixed(w, 6) << '\n';
    }
    return os.str();
}

inline Json transcript_to_json(const std::vector<QueryRecord>& transcript) {
    Json arr = Json::array();
    for (const QueryRecord& q : transcript)
        arr.push_back(Json{{"coord", q.coord + 1},
                           {"dir", q.inverse ? "bwd" : "fwd"},
                           {"point", q.point + 1},
                           {"answer", q.answer + 1}});
    return arr;
}

inline Json verdict_to_json(const TesterVerdict& v, bool include_transcript = false) {
    Json j{{"accepted", v.accepted},
           {"queries_used", v.queries_used},
           {"query_budget", v.query_budget}};
    if (include_transcript) j["transcript"] = transcript_to_json(v.transcript);
    return j;
}

inline Json verdict_to_json(const LsmVerdict& v, bool include_transcript = false) {
    Json j = verdict_to_json(static_cast<const TesterVerdict&>(v), include_transcript);
    j["min_tv"] = rat_to_string(v.min_tv);
    j["min_tv_float"] = format_fixed(v.min_tv, 6);
    j["approximate_comparison"] = v.approximate_comparison;
    return j;
}

inline Json report_to_json(const SeparatorReport& r) {
    Json instances = Json::array();
    for (const InstanceReport& ir : r.instances)
        instances.push_back(Json{{"side", ir.positive ? "positive" : "negative"},
                                 {"index", ir.index},
                                 {"accepted", ir.accepted},
                                 {"trials", ir.trials},
                                 {"accept_rate", ir.accept_rate},
                                 {"wilson_low", ir.interval.low},
                                 {"wilson_high", ir.interval.high},
                                 {"max_queries", ir.max_queries},
                                 {"flagged", ir.flagged}});
    return Json{{"completeness", r.completeness},
                {"soundness", r.soundness},
                {"z", r.z},
                {"max_queries", r.max_queries},
                {"contract_violated", r.contract_violated},
                {"instances", instances}};
}

} // namespace permeq
