#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permeq/experiment.hpp"
#include "permeq/gset.hpp"
#include "permeq/io.hpp"
#include "permeq/testers.hpp"

namespace {

using namespace permeq;

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_budget = 3;
constexpr int exit_contract = 4;

const char* const system_help =
    "Equation system: a built-in name, or a file (text: alphabet line then one relator per "
    "line; or JSON {\"alphabet\",\"relators\"}). Built-ins: \"commutator\" = {xyXY}; "
    "\"bs m n\" = {xy^mXy^-n} (coprime m,n >= 2: testable but not stable; |m| = |n| >= 2: "
    "not BS-rigid; min(|m|,|n|) <= 1: stable)";

// Every command writes through here so --out behaves uniformly.
void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

std::string render(const Json& j, bool as_json, const std::string& fallback_text) {
    return as_json ? j.dump(2) + "\n" : fallback_text;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* what) {
    std::vector<T> out;
    for (const std::string& part : split_commas(s)) {
        std::istringstream is(part);
        T v;
        if (!(is >> v) || !is.eof())
            throw ParseError(std::string("bad ") + what + " list entry: '" + part + "'");
        out.push_back(v);
    }
    return out;
}

struct CommonOutputs {
    std::string out_path;
    std::string format = "text";
    bool json() const { return format == "json"; }
};

void add_output_flags(CLI::App* cmd, CommonOutputs& o) {
    cmd->add_option("--out", o.out_path, "Write output to this file instead of stdout");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

Json config_echo(const EquationSystem& system, const std::string& system_label) {
    Json j = system_to_json(system);
    j["system"] = system_label;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_eval(const std::string& word_text, const std::string& tuple_path,
             const CommonOutputs& out) {
    PermTuple tuple = load_tuple_file(tuple_path);
    Alphabet alphabet = Alphabet::standard(tuple.arity());
    Word w = parse_word(word_text, alphabet);
    Perm result = evaluate(w, tuple);
    Json j{{"word", format_word(w, alphabet)},
           {"n", tuple.degree()},
           {"result", perm_to_json(result)},
           {"cycles", format_cycles(result)}};
    std::ostringstream os;
    os << format_perm(result) << "\n" << format_cycles(result) << "\n";
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

int cmd_reduce(const std::string& word_text, std::size_t rank, const CommonOutputs& out) {
    Alphabet alphabet = Alphabet::standard(rank);
    Word w = parse_word(word_text, alphabet);
    Json j{{"input", word_text}, {"reduced", format_word(w, alphabet)}, {"length", w.size()}};
    emit(out.out_path, render(j, out.json(), format_word(w, alphabet) + "\n"));
    return exit_ok;
}

int cmd_solutions(const std::string& system_label, std::size_t n, bool list,
                  std::uint64_t budget, const CommonOutputs& out) {
    EquationSystem system = load_system(system_label);
    auto sols = enumerate_solutions(system, n, budget);
    Json j{{"config", config_echo(system, system_label)}, {"n", n}, {"count", sols.size()}};
    std::ostringstream os;
    os << sols.size() << "\n";
    if (list) {
        Json arr = Json::array();
        for (const auto& t : sols) {
            arr.push_back(tuple_to_json(t));
            for (std::size_t i = 0; i < t.arity(); ++i)
                os << format_perm(t.perm(i)) << (i + 1 < t.arity() ? " | " : "\n");
        }
        j["solutions"] = arr;
    }
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

int cmd_defect(const std::string& system_label, const std::string& tuple_path,
               const CommonOutputs& out) {
    EquationSystem system = load_system(system_label);
    PermTuple tuple = load_tuple_file(tuple_path);
    Rat d = defect(system, tuple);
    bool sol = is_solution(system, tuple);
    Json j{{"config", config_echo(system, system_label)},
           {"n", tuple.degree()},
           {"defect", rat_to_string(d)},
           {"defect_float", format_fixed(d, 6)},
           {"is_solution", sol}};
    std::ostringstream os;
    os << "defect = " << rat_to_string(d) << " (" << format_fixed(d, 6) << ")\n"
       << "is_solution = " << (sol ? "true" : "false") << "\n";
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

int cmd_dist(const std::string& system_label, const std::string& tuple_path,
             const std::string& flex_text, std::vector<std::string> eps_texts,
             std::uint64_t budget, const CommonOutputs& out) {
    EquationSystem system = load_system(system_label);
    PermTuple tuple = load_tuple_file(tuple_path);
    FlexBudget flex = parse_flex(flex_text);
    if (eps_texts.empty()) eps_texts.push_back("1/10");
    Json rows = Json::array();
    std::ostringstream os;
    for (const std::string& et : eps_texts) {
        Rat eps = parse_rational(et);
        FlexDistance fd = dist_to_solutions_flex(system, tuple, flex, eps, budget);
        rows.push_back(Json{{"eps", rat_to_string(eps)},
                            {"distance", rat_to_string(fd.value)},
                            {"distance_float", format_fixed(fd.value, 6)},
                            {"attained_degree", fd.attained_degree},
                            {"max_degree_examined", fd.max_degree},
                            {"truncated", fd.truncated},
                            {"below_eps", fd.value < eps}});
        os << "eps=" << rat_to_string(eps) << " dist=" << rat_to_string(fd.value) << " ("
           << format_fixed(fd.value, 6) << ") attained_at_N=" << fd.attained_degree
           << (fd.truncated ? " [truncated]" : "") << "\n";
    }
    Json j{{"config", config_echo(system, system_label)},
           {"n", tuple.degree()},
           {"flex", format_flex(flex)},
           {"distances", rows}};
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

// Shared by sas/lsm: when --positive/--negative files are given, the command
// switches to separator validation and exit code 4 reports a detected
// contract violation.
struct ValidationInputs {
    std::vector<std::string> positive_paths;
    std::vector<std::string> negative_paths;
    std::string far_eps = "1/10";
    bool requested() const { return !positive_paths.empty() || !negative_paths.empty(); }
};

void add_validation_flags(CLI::App* cmd, ValidationInputs& v) {
    cmd->add_option("--positive", v.positive_paths,
                    "Tuple file(s) expected to be accepted; must be solutions");
    cmd->add_option("--negative", v.negative_paths,
                    "Tuple file(s) expected to be rejected; certified far via exact "
                    "distance-to-solutions >= --far-eps before running");
    cmd->add_option("--far-eps", v.far_eps, "Farness threshold used to certify negatives")
        ->capture_default_str();
}

int run_validation(const EquationSystem& system, const std::string& system_label,
                   const Tester& tester, const ValidationInputs& vin, std::size_t trials,
                   std::uint64_t seed, std::uint64_t budget, const CommonOutputs& out) {
    std::vector<PermTuple> positives;
    for (const auto& p : vin.positive_paths) positives.push_back(load_tuple_file(p));
    std::vector<CertifiedNegative> negatives;
    Rat eps = parse_rational(vin.far_eps);
    for (const auto& p : vin.negative_paths)
        negatives.push_back(certify_far(system, load_tuple_file(p), eps, budget));
    SeparatorReport report = validate_separator(system, tester, positives, negatives, trials, seed);
    Json j{{"config", config_echo(system, system_label)},
           {"trials", trials},
           {"seed", seed},
           {"far_eps", rat_to_string(eps)},
           {"report", report_to_json(report)}};
    std::ostringstream os;
    for (const auto& ir : report.instances)
        os << (ir.positive ? "positive" : "negative") << "[" << ir.index
           << "] accept_rate=" << ir.accept_rate << " wilson=[" << ir.interval.low << ", "
           << ir.interval.high << "] max_queries=" << ir.max_queries
           << (ir.flagged ? " FLAGGED" : "") << "\n";
    os << "contract_violated = " << (report.contract_violated ? "true" : "false") << "\n";
    emit(out.out_path, render(j, out.json(), os.str()));
    return report.contract_violated ? exit_contract : exit_ok;
}

int cmd_sas(const std::string& system_label, const std::string& tuple_path, std::uint64_t s,
            std::size_t trials, std::uint64_t seed, const ValidationInputs& vin,
            std::uint64_t budget, const CommonOutputs& out) {
    EquationSystem system = load_system(system_label);
    SasConfig cfg{system, s, false};
    if (vin.requested()) {
        Tester tester = [&cfg](const PermTuple& t, std::uint64_t run_seed) {
            QueryOracle oracle(t);
            return sas_run(cfg, oracle, run_seed);
        };
        return run_validation(system, system_label, tester, vin, trials, seed, budget, out);
    }
    if (tuple_path.empty()) throw ParseError("sas needs --tuple (or --positive/--negative)");
    PermTuple tuple = load_tuple_file(tuple_path);
    QueryOracle oracle(tuple);
    std::size_t accepted = 0;
    std::uint64_t total_queries = 0, max_queries = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        TesterVerdict v = sas_run(cfg, oracle, derive_seed(seed, t));
        if (v.accepted) ++accepted;
        total_queries += v.queries_used;
        max_queries = std::max(max_queries, v.queries_used);
    }
    Rat exact_accept = sas_accept_probability(cfg, tuple);
    Rat d = defect(system, tuple);
    Json j{{"config", config_echo(system, system_label)},
           {"n", tuple.degree()},
           {"s", s},
           {"trials", trials},
           {"seed", seed},
           {"accept_rate", format_fixed(Rat(accepted, trials), 6)},
           {"exact_accept_probability", rat_to_string(exact_accept)},
           {"exact_accept_float", format_fixed(exact_accept, 6)},
           {"exact_defect", rat_to_string(d)},
           {"mean_queries", format_fixed(Rat(total_queries, trials), 3)},
           {"max_queries", max_queries},
           {"query_budget", s * system.max_relator_length()}};
    std::ostringstream os;
    os << "accept_rate = " << format_fixed(Rat(accepted, trials), 6) << " (exact law "
       << rat_to_string(exact_accept) << " = " << format_fixed(exact_accept, 6) << ")\n"
       << "exact_defect = " << rat_to_string(d) << "\n"
       << "max_queries = " << max_queries << " of budget " << s * system.max_relator_length()
       << "\n";
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

int cmd_lsm(const std::string& system_label, const std::string& tuple_path, std::uint64_t s,
            std::size_t probe_radius, const std::string& delta_text, std::size_t trials,
            std::uint64_t seed, const std::string& source_text, const ValidationInputs& vin,
            std::uint64_t budget, const CommonOutputs& out) {
    EquationSystem system = load_system(system_label);
    auto probe = std::make_shared<const ProbeSet>(
        ProbeSet::words_up_to(system.alphabet(), probe_radius));
    Rat delta = parse_rational(delta_text);

    SolutionSource source = ExhaustiveSource{budget};
    if (source_text.rfind("family", 0) == 0) {
        std::size_t count = 64;
        if (auto colon = source_text.find(':'); colon != std::string::npos)
            count = static_cast<std::size_t>(std::stoull(source_text.substr(colon + 1)));
        source = FamilySource{count};
    } else if (source_text.rfind("file:", 0) == 0) {
        const std::string path = source_text.substr(5);
        ProvidedSource prov;
        std::istringstream is(read_file(path));
        std::string block, line;
        // blank-line-separated tuple blocks
        auto flush = [&] {
            if (block.find_first_not_of(" \t\r\n") != std::string::npos)
                prov.solutions.push_back(parse_tuple_any(block));
            block.clear();
        };
        while (std::getline(is, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                flush();
            else
                block += line + "\n";
        }
        flush();
        source = std::move(prov);
    } else if (source_text != "exhaustive") {
        throw ParseError("--source must be exhaustive | family[:count] | file:<path>");
    }

    LsmConfig cfg{system, s, probe, delta, source, false};
    if (vin.requested()) {
        Tester tester = [&cfg](const PermTuple& t, std::uint64_t run_seed) {
            QueryOracle oracle(t);
            return static_cast<TesterVerdict>(lsm_run(cfg, oracle, run_seed));
        };
        return run_validation(system, system_label, tester, vin, trials, seed, budget, out);
    }
    if (tuple_path.empty()) throw ParseError("lsm needs --tuple (or --positive/--negative)");
    PermTuple tuple = load_tuple_file(tuple_path);

    // one comparison build shared across trials
    cfg.source = PrecomputedSource{build_comparison_set(cfg, tuple.degree(), seed)};
    QueryOracle oracle(tuple);
    std::size_t accepted = 0;
    std::uint64_t total_queries = 0, max_queries = 0;
    Rat min_tv(-1);
    bool approx = false;
    for (std::size_t t = 0; t < trials; ++t) {
        LsmVerdict v = lsm_run(cfg, oracle, derive_seed(seed, t));
        if (v.accepted) ++accepted;
        total_queries += v.queries_used;
        max_queries = std::max(max_queries, v.queries_used);
        if (min_tv < 0 || v.min_tv < min_tv) min_tv = v.min_tv;
        approx = v.approximate_comparison;
    }
    Json j{{"config", config_echo(system, system_label)},
           {"n", tuple.degree()},
           {"s", s},
           {"probe_radius", probe_radius},
           {"probe_words", probe->size()},
           {"delta", rat_to_string(delta)},
           {"trials", trials},
           {"seed", seed},
           {"accept_rate", format_fixed(Rat(accepted, trials), 6)},
           {"best_min_tv", rat_to_string(min_tv)},
           {"best_min_tv_float", format_fixed(min_tv, 6)},
           {"approximate_comparison", approx},
           {"mean_queries", format_fixed(Rat(total_queries, trials), 3)},
           {"max_queries", max_queries},
           {"query_budget", s * probe->total_letters()}};
    std::ostringstream os;
    os << "accept_rate = " << format_fixed(Rat(accepted, trials), 6) << "\n"
       << "best_min_tv = " << rat_to_string(min_tv) << " (" << format_fixed(min_tv, 6) << ")"
       << (approx ? " [approximate comparison set]" : "") << "\n"
       << "max_queries = " << max_queries << " of budget " << s * probe->total_letters() << "\n";
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

int cmd_dsets(const std::string& x_path, const std::string& y_path,
              const std::string& certify_system, bool greedy, const CommonOutputs& out) {
    PermTuple xt = load_tuple_file(x_path);
    PermTuple yt = load_tuple_file(y_path);
    GSet xs, ys;
    if (!certify_system.empty()) {
        EquationSystem system = load_system(certify_system);
        xs = certified_gset(std::move(xt), system);
        ys = certified_gset(std::move(yt), system);
    } else {
        xs = make_gset(std::move(xt));
        ys = make_gset(std::move(yt));
    }
    GsetDistanceOptions opts;
    opts.allow_greedy = greedy;
    GsetDistance d = gset_distance(xs, ys, opts);
    Json j{{"x_size", xs.size()},
           {"y_size", ys.size()},
           {"certified", xs.certified},
           {"distance", rat_to_string(d.value)},
           {"distance_float", format_fixed(d.value, 6)},
           {"exact", d.exact}};
    std::ostringstream os;
    os << "d_S = " << rat_to_string(d.value) << " (" << format_fixed(d.value, 6) << ")"
       << (d.exact ? "" : " [greedy upper bound]") << "\n";
    emit(out.out_path, render(j, out.json(), os.str()));
    return exit_ok;
}

int cmd_marginal(const std::string& tuple_path, const std::string& a_text,
                 const std::string& b_text, const CommonOutputs& out) {
    PermTuple tuple = load_tuple_file(tuple_path);
    Alphabet alphabet = Alphabet::standard(tuple.arity());
    MarginalSpec spec;
    for (const std::string& w : split_commas(a_text)) spec.A.push_back(parse_word(w, alphabet));
    if (!b_text.empty())
        for (const std::string& w : split_commas(b_text)) spec.B.push_back(parse_word(w, alphabet));
    Rat p = random_stabilizer_marginal(make_gset(tuple), spec);
    Json j{{"n", tuple.degree()},
           {"A", a_text},
           {"B", b_text},
           {"probability", rat_to_string(p)},
           {"probability_float", format_fixed(p, 6)}};
    emit(out.out_path,
         render(j, out.json(), rat_to_string(p) + " (" + format_fixed(p, 6) + ")\n"));
    return exit_ok;
}

int cmd_sweep(const std::string& system_label, const std::string& tester_text,
              const std::string& n_list, const std::string& s_list, const std::string& m_list,
              const std::string& instance_text, std::size_t probe_radius,
              const std::string& delta_text, std::size_t trials, std::uint64_t seed,
              std::uint64_t budget, std::size_t workers, const CommonOutputs& out) {
    SweepSpec spec(system_label, load_system(system_label));
    if (tester_text == "sas")
        spec.tester = TesterKind::sas;
    else if (tester_text == "lsm")
        spec.tester = TesterKind::lsm;
    else
        throw ParseError("--tester must be sas or lsm");
    spec.n_values = parse_list<std::size_t>(n_list, "n");
    spec.s_values = parse_list<std::uint64_t>(s_list, "s");
    spec.corruption_values = parse_list<std::size_t>(m_list, "corruption");
    if (instance_text == "solutions")
        spec.instance = InstanceModel::solutions;
    else if (instance_text == "planted")
        spec.instance = InstanceModel::planted;
    else if (instance_text == "random")
        spec.instance = InstanceModel::random_tuple;
    else
        throw ParseError("--instance must be solutions | planted | random");
    spec.probe_radius = probe_radius;
    spec.delta = parse_rational(delta_text);
    spec.trials = trials;
    spec.seed = seed;
    spec.budget = budget;
    spec.workers = workers;
    emit(out.out_path, run_sweep_csv(spec));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and randomized testers for equations between permutations"};
    app.require_subcommand(1);

    // eval
    std::string ev_word, ev_tuple;
    CommonOutputs ev_out;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a word at a permutation tuple");
    eval_cmd->add_option("word", ev_word, "Word over the tuple's alphabet (x, X = inverse, ...)")
        ->required();
    eval_cmd->add_option("--tuple", ev_tuple, "Tuple file (text or JSON)")->required();
    add_output_flags(eval_cmd, ev_out);

    // reduce
    std::string rd_word;
    std::size_t rd_rank = 2;
    CommonOutputs rd_out;
    auto* reduce_cmd = app.add_subcommand("reduce", "Freely reduce a word");
    reduce_cmd->add_option("word", rd_word, "Word to reduce")->required();
    reduce_cmd->add_option("--k", rd_rank, "Alphabet rank")->capture_default_str();
    add_output_flags(reduce_cmd, rd_out);

    // solutions
    std::string so_system;
    std::size_t so_n = 3;
    bool so_list = false;
    std::uint64_t so_budget = default_enumeration_budget;
    CommonOutputs so_out;
    auto* sol_cmd = app.add_subcommand("solutions", "Count (or list) Sol_E(n) exhaustively");
    sol_cmd->add_option("--system", so_system, system_help)->required();
    sol_cmd->add_option("--n", so_n, "Degree")->required();
    sol_cmd->add_flag("--list", so_list, "List the solutions, not just the count");
    sol_cmd->add_option("--budget", so_budget, "Enumeration budget in tuple visits")
        ->capture_default_str();
    add_output_flags(sol_cmd, so_out);

    // defect
    std::string df_system, df_tuple;
    CommonOutputs df_out;
    auto* def_cmd = app.add_subcommand("defect", "Exact mean relator displacement of a tuple");
    def_cmd->add_option("--system", df_system, system_help)->required();
    def_cmd->add_option("--tuple", df_tuple, "Tuple file")->required();
    add_output_flags(def_cmd, df_out);

    // dist
    std::string di_system, di_tuple, di_flex = "zero";
    std::vector<std::string> di_eps;
    std::uint64_t di_budget = default_enumeration_budget;
    CommonOutputs di_out;
    auto* dist_cmd =
        app.add_subcommand("dist", "Exact distance to the solution set, optionally flexible");
    dist_cmd->add_option("--system", di_system, system_help)->required();
    dist_cmd->add_option("--tuple", di_tuple, "Tuple file")->required();
    dist_cmd->add_option("--flex", di_flex, "zero | linear:<c> | n-linear:<c> | unbounded")
        ->capture_default_str();
    dist_cmd->add_option("--eps", di_eps,
                         "Epsilon value(s) for the flex window (rational or decimal); "
                         "repeatable");
    dist_cmd->add_option("--budget", di_budget, "Enumeration budget in tuple visits")
        ->capture_default_str();
    add_output_flags(dist_cmd, di_out);

    // sas
    std::string sa_system, sa_tuple;
    std::uint64_t sa_s = 1, sa_seed = 0;
    std::size_t sa_trials = 100;
    std::uint64_t sa_budget = default_enumeration_budget;
    ValidationInputs sa_val;
    CommonOutputs sa_out;
    auto* sas_cmd = app.add_subcommand(
        "sas", "Sample-and-Substitute tester: Monte Carlo runs plus the exact acceptance law");
    sas_cmd->add_option("--system", sa_system, system_help)->required();
    sas_cmd->add_option("--tuple", sa_tuple, "Tuple file (instance under test)");
    sas_cmd->add_option("--s", sa_s, "Repetition factor")->capture_default_str();
    sas_cmd->add_option("--trials", sa_trials, "Monte Carlo trials")->capture_default_str();
    sas_cmd->add_option("--seed", sa_seed, "Base seed (runs derive per-trial seeds)")->required();
    sas_cmd->add_option("--budget", sa_budget, "Enumeration budget for certification")
        ->capture_default_str();
    add_validation_flags(sas_cmd, sa_val);
    add_output_flags(sas_cmd, sa_out);

    // lsm
    std::string ls_system, ls_tuple, ls_delta = "1/20", ls_source = "exhaustive";
    std::uint64_t ls_s = 1000, ls_seed = 0;
    std::size_t ls_radius = 2, ls_trials = 20;
    std::uint64_t ls_budget = default_enumeration_budget;
    ValidationInputs ls_val;
    CommonOutputs ls_out;
    auto* lsm_cmd = app.add_subcommand(
        "lsm", "Local-Statistics-Matcher tester: empirical trace statistics vs exact solutions");
    lsm_cmd->add_option("--system", ls_system, system_help)->required();
    lsm_cmd->add_option("--tuple", ls_tuple, "Tuple file (instance under test)");
    lsm_cmd->add_option("--s", ls_s, "Sample count per run")->capture_default_str();
    lsm_cmd->add_option("--probe-radius", ls_radius, "Probe set = all words of length <= radius")
        ->capture_default_str();
    lsm_cmd->add_option("--delta", ls_delta, "Proximity threshold (rational or decimal)")
        ->capture_default_str();
    lsm_cmd->add_option("--trials", ls_trials, "Seeded runs")->capture_default_str();
    lsm_cmd->add_option("--seed", ls_seed, "Base seed")->required();
    lsm_cmd->add_option("--source", ls_source,
                        "Comparison solutions: exhaustive | family[:count] | file:<path> "
                        "(blank-line-separated tuple blocks)")
        ->capture_default_str();
    lsm_cmd->add_option("--budget", ls_budget, "Enumeration budget in tuple visits")
        ->capture_default_str();
    add_validation_flags(lsm_cmd, ls_val);
    add_output_flags(lsm_cmd, ls_out);

    // dsets
    std::string dx_x, dx_y, dx_certify;
    bool dx_greedy = false;
    CommonOutputs dx_out;
    auto* dsets_cmd =
        app.add_subcommand("dsets", "Distance between two finite actions (injection defect)");
    dsets_cmd->add_option("x", dx_x, "Tuple file for X")->required();
    dsets_cmd->add_option("y", dx_y, "Tuple file for Y")->required();
    dsets_cmd->add_option("--certify", dx_certify,
                          "Require both actions to satisfy this system's relators");
    dsets_cmd->add_flag("--greedy", dx_greedy,
                        "Over budget, return a labeled greedy upper bound instead of refusing");
    add_output_flags(dsets_cmd, dx_out);

    // marginal
    std::string mg_tuple, mg_a, mg_b;
    CommonOutputs mg_out;
    auto* marg_cmd = app.add_subcommand(
        "marginal", "Random-stabilizer marginal: P(stab trace on A equals B) for a uniform point");
    marg_cmd->add_option("--tuple", mg_tuple, "Tuple file (the action)")->required();
    marg_cmd->add_option("--A", mg_a, "Comma-separated word list")->required();
    marg_cmd->add_option("--B", mg_b, "Comma-separated subset of A (empty = empty set)");
    add_output_flags(marg_cmd, mg_out);

    // sweep
    std::string sw_system, sw_tester = "sas", sw_n = "3,4", sw_s = "1,5", sw_m = "0,1",
                sw_instance = "planted", sw_delta = "1/20";
    std::size_t sw_radius = 2, sw_trials = 100, sw_workers = 0;
    std::uint64_t sw_seed = 0, sw_budget = default_enumeration_budget;
    CommonOutputs sw_out;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Grid of tester experiments over (n, s, corruption); deterministic CSV");
    sweep_cmd->add_option("--system", sw_system, system_help)->required();
    sweep_cmd->add_option("--tester", sw_tester, "sas | lsm")->capture_default_str();
    sweep_cmd->add_option("--n", sw_n, "Comma-separated degrees")->capture_default_str();
    sweep_cmd->add_option("--s", sw_s, "Comma-separated repetition factors")
        ->capture_default_str();
    sweep_cmd->add_option("--m", sw_m, "Comma-separated corruption counts (planted model)")
        ->capture_default_str();
    sweep_cmd->add_option("--instance", sw_instance, "solutions | planted | random")
        ->capture_default_str();
    sweep_cmd->add_option("--probe-radius", sw_radius, "Probe radius (lsm)")
        ->capture_default_str();
    sweep_cmd->add_option("--delta", sw_delta, "Proximity threshold (lsm)")
        ->capture_default_str();
    sweep_cmd->add_option("--trials", sw_trials, "Trials per cell")->capture_default_str();
    sweep_cmd->add_option("--seed", sw_seed, "Base seed (cells derive their own)")->required();
    sweep_cmd->add_option("--budget", sw_budget, "Enumeration budget in tuple visits")
        ->capture_default_str();
    sweep_cmd->add_option("--workers", sw_workers, "Worker threads (0 = hardware)")
        ->capture_default_str();
    sweep_cmd->add_option("--out", sw_out.out_path,
                          "Write the CSV here instead of stdout (output is always CSV)");

    try {
        app.parse(argc, argv);
        if (*eval_cmd) return cmd_eval(ev_word, ev_tuple, ev_out);
        if (*reduce_cmd) return cmd_reduce(rd_word, rd_rank, rd_out);
        if (*sol_cmd) return cmd_solutions(so_system, so_n, so_list, so_budget, so_out);
        if (*def_cmd) return cmd_defect(df_system, df_tuple, df_out);
        if (*dist_cmd) return cmd_dist(di_system, di_tuple, di_flex, di_eps, di_budget, di_out);
        if (*sas_cmd)
            return cmd_sas(sa_system, sa_tuple, sa_s, sa_trials, sa_seed, sa_val, sa_budget,
                           sa_out);
        if (*lsm_cmd)
            return cmd_lsm(ls_system, ls_tuple, ls_s, ls_radius, ls_delta, ls_trials, ls_seed,
                           ls_source, ls_val, ls_budget, ls_out);
        if (*dsets_cmd) return cmd_dsets(dx_x, dx_y, dx_certify, dx_greedy, dx_out);
        if (*marg_cmd) return cmd_marginal(mg_tuple, mg_a, mg_b, mg_out);
        if (*sweep_cmd)
            return cmd_sweep(sw_system, sw_tester, sw_n, sw_s, sw_m, sw_instance, sw_radius,
                             sw_delta, sw_trials, sw_seed, sw_budget, sw_workers, sw_out);
        return exit_parse;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_parse;
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return exit_budget;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse;
    }
}
