// Batch command-line frontend for the pbamb library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbamb/pbamb.hpp"

namespace {

using namespace pbamb;

enum Exit { ok = 0, usage = 1, invalid = 2, precondition = 3, internal = 4 };

/// Thrown when a witness fails its replay check.
class ReplayFailure : public std::logic_error {
    using std::logic_error::logic_error;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input, output, mode, lambda_text, prefix, period, semantics = "positive", check_kind, gadget;
    int k = 0;
    bool force = false;
    std::uint64_t runs = 100000, horizon = 100, seed = 0;
};

Rational parse_lambda(const std::string& text) {
    auto r = Rational::parse(text);
    if (!r)
        throw UsageError("--lambda expects an exact rational n or n/d, got '" + text + "'");
    return *r;
}

Rational require_lambda(const Options& o) {
    if (o.lambda_text.empty())
        throw UsageError("--lambda is required");
    return parse_lambda(o.lambda_text);
}

const ProbAutomaton& as_prob(const AnyAutomaton& a, const std::string& what) {
    if (auto p = std::get_if<ProbAutomaton>(&a))
        return *p;
    throw PreconditionError(Precondition::wrong_kind, what + " needs a probabilistic automaton");
}

const NondetAutomaton& as_nondet(const AnyAutomaton& a, const std::string& what) {
    if (auto p = std::get_if<NondetAutomaton>(&a))
        return *p;
    throw PreconditionError(Precondition::wrong_kind, what + " needs a classical automaton");
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text))
        throw Error("cannot write " + path);
}

std::string approx(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.6g", x);
    return std::string(buf) + " (approx)";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string value_list(const std::vector<Rational>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + v[i].str();
    return s + "}";
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

void print_pattern(const Classification& c, const char* label, const std::optional<PatternWitness>& w) {
    std::cout << label << ": " << yes_no(w.has_value());
    if (w) {
        if (!witness_holds(c.analysed, *w))
            throw ReplayFailure(std::string(label) + " witness failed replay");
        std::cout << "  witness " << format_witness(c.analysed, *w);
    }
    std::cout << '\n';
}

int run_classify(const Options& o) {
    AnyAutomaton a = parse_automaton_file(o.input);
    Classification c = std::visit([](const auto& x) { return classify(x); }, a);
    std::cout << "automaton: " << std::visit([](const auto& x) { return x.name(); }, a) << '\n';
    print_pattern(c, "IDA", c.ida);
    print_pattern(c, "IDA_F", c.ida_f);
    print_pattern(c, "EDA", c.eda);
    print_pattern(c, "EDA_F", c.eda_f);
    std::cout << "class: " << to_string(c.ambiguity) << '\n';
    std::cout << "flat: " << yes_no(c.flat) << '\n';
    std::cout << "weak: " << yes_no(c.weak) << '\n';
    if (c.hpba)
        std::cout << "hpba: " << yes_no(*c.hpba) << '\n';
    if (c.spba)
        std::cout << "spba: " << yes_no(*c.spba) << '\n';
    std::cout << "unambiguous: " << yes_no(c.unambiguous);
    if (c.ambiguity_witness) {
        if (!count_two_accepting_runs(c.analysed, *c.ambiguity_witness))
            throw ReplayFailure("ambiguity witness failed replay");
        std::cout << "  witness " << format_word(c.analysed.alphabet(), *c.ambiguity_witness);
    }
    std::cout << '\n';
    return ok;
}

int run_translate(const Options& o) {
    static const std::vector<std::string> modes = {
        "pos2nba", "as2dba-all", "as2dba-flat", "th2gnba",  "degen",          "pca2pwa",
        "parity2ldba", "ldba2pba", "dba2pba", "pos2th", "complement-pwa", "pfa2pwa-value1"};
    if (std::find(modes.begin(), modes.end(), o.mode) == modes.end())
        throw UsageError("unknown --mode '" + o.mode + "'");
    std::optional<Rational> lambda;
    if (o.mode == "th2gnba" || o.mode == "pos2th")
        lambda = require_lambda(o);
    if (o.mode == "th2gnba" && o.k < 1)
        throw UsageError("th2gnba requires --k K with K >= 1");

    AnyAutomaton in = parse_automaton_file(o.input);
    const std::string& m = o.mode;
    AnyAutomaton out = [&]() -> AnyAutomaton {
        if (m == "pos2nba")
            return positive_to_nba(as_prob(in, m));
        if (m == "as2dba-all")
            return almost_sure_to_dba(as_prob(in, m), AlmostSureMode::all_runs);
        if (m == "as2dba-flat")
            return almost_sure_to_dba(as_prob(in, m), AlmostSureMode::flat);
        if (m == "th2gnba")
            return threshold_to_gnba(as_prob(in, m), *lambda, o.k, ThresholdOptions{!o.force});
        if (m == "degen")
            return degeneralize(as_nondet(in, m));
        if (m == "pca2pwa")
            return pca_to_pwa(as_prob(in, m));
        if (m == "parity2ldba")
            return parity_to_unambiguous_ldba(as_nondet(in, m));
        if (m == "ldba2pba")
            return ldba_to_pba(as_nondet(in, m));
        if (m == "dba2pba")
            return dba_to_pba(as_nondet(in, m));
        if (m == "pos2th")
            return positive_to_threshold(as_prob(in, m), *lambda);
        if (m == "complement-pwa")
            return complement_pwa(as_prob(in, m));
        return pfa_to_pwa_value1(as_prob(in, m));
    }();
    write_output(o.output, serialize_automaton(out));
    return ok;
}

int run_prob(const Options& o) {
    AnyAutomaton in = parse_automaton_file(o.input);
    const ProbAutomaton& a = as_prob(in, "prob");
    if (a.kind() == ProbKind::finite_word) {
        if (!o.period.empty())
            throw UsageError("finite-word automata take --prefix only");
        std::cout << pfa_acceptance(a, parse_symbols(a.alphabet(), o.prefix)).str() << '\n';
        return ok;
    }
    std::cout << acceptance_probability(a, make_word(a.alphabet(), o.prefix, o.period)).str() << '\n';
    return ok;
}

int run_member(const Options& o) {
    std::optional<Rational> lambda;
    if (o.semantics == "threshold")
        lambda = require_lambda(o);
    else if (o.semantics != "positive" && o.semantics != "almost-sure")
        throw UsageError("unknown --semantics '" + o.semantics + "'");
    AnyAutomaton in = parse_automaton_file(o.input);
    bool member = false;
    if (auto n = std::get_if<NondetAutomaton>(&in)) {
        member = member_nondet(*n, make_word(n->alphabet(), o.prefix, o.period));
    } else {
        const ProbAutomaton& a = std::get<ProbAutomaton>(in);
        Rational value = a.kind() == ProbKind::finite_word
                             ? pfa_acceptance(a, parse_symbols(a.alphabet(), o.prefix))
                             : acceptance_probability(a, make_word(a.alphabet(), o.prefix, o.period));
        if (o.semantics == "positive")
            member = value.sign() > 0;
        else if (o.semantics == "almost-sure")
            member = value.is_one();
        else
            member = value > *lambda;
    }
    std::cout << (member ? "true" : "false") << '\n';
    return ok;
}

int run_check(const Options& o) {
    if (o.check_kind == "empty") {
        AnyAutomaton in = parse_automaton_file(o.input);
        std::optional<UpWord> w;
        const Alphabet* sigma = nullptr;
        if (auto n = std::get_if<NondetAutomaton>(&in)) {
            w = is_empty_nba(*n);
            sigma = &n->alphabet();
        } else {
            // Positive-semantics emptiness via the two-copy NBA.
            const ProbAutomaton& a = std::get<ProbAutomaton>(in);
            if (a.kind() == ProbKind::finite_word)
                throw PreconditionError(Precondition::wrong_kind, "emptiness check needs an ω-automaton");
            w = is_empty_nba(positive_to_nba(a));
            sigma = &a.alphabet();
            if (w && acceptance_probability(a, *w).sign() <= 0)
                throw ReplayFailure("emptiness witness failed oracle replay");
        }
        std::cout << "empty: " << yes_no(!w.has_value()) << '\n';
        if (w)
            std::cout << "witness: " << format_word(*sigma, *w) << '\n';
        return ok;
    }
    if (o.check_kind == "nonuniversal-as") {
        NonUniversalMode mode;
        if (o.mode == "exp" || o.mode.empty())
            mode = NonUniversalMode::exp_ambiguous;
        else if (o.mode == "flat")
            mode = NonUniversalMode::flat;
        else
            throw UsageError("nonuniversal-as --mode expects exp or flat");
        AnyAutomaton in = parse_automaton_file(o.input);
        const ProbAutomaton& a = as_prob(in, "nonuniversal-as");
        auto w = non_universal_witness_almost_sure(a, mode);
        if (w && !(acceptance_probability(a, *w) < Rational(1)))
            throw ReplayFailure("non-universality witness failed oracle replay");
        std::cout << "nonuniversal: " << yes_no(w.has_value()) << '\n';
        if (w)
            std::cout << "witness: " << format_word(a.alphabet(), *w) << '\n';
        return ok;
    }
    throw UsageError("check expects 'empty' or 'nonuniversal-as'");
}

int run_supports(const Options& o) {
    AnyAutomaton in = parse_automaton_file(o.input);
    const ProbAutomaton& a = as_prob(in, "supports");
    SupportClassSet s = myhill_nerode_supports(a);
    for (std::size_t i = 0; i < s.supports.size(); ++i) {
        std::cout << "{";
        for (std::size_t j = 0; j < s.supports[i].size(); ++j)
            std::cout << (j ? "," : "") << a.state_name(s.supports[i][j]);
        std::cout << "}  via [" << format_symbols(a.alphabet(), s.representatives[i]) << "]\n";
    }
    std::cout << "size: " << s.supports.size() << '\n';
    return ok;
}

int run_epsilon(const Options& o) {
    Rational lambda = require_lambda(o);
    if (o.k < 1)
        throw UsageError("epsilon requires --k K with K >= 1");
    AnyAutomaton in = parse_automaton_file(o.input);
    EpsilonLadder l = compute_epsilon(as_prob(in, "epsilon"), lambda, o.k);
    std::cout << "base: " << value_list(l.base) << '\n';
    std::cout << "V>=" << lambda.str() << ": " << value_list(l.above_lambda.values) << '\n';
    for (int j = 1; j <= l.k; ++j) {
        std::cout << "eps_" << j << " = " << l.eps[j - 1].str() << '\n';
        std::cout << "V>=eps_" << j << ": " << value_list(l.above_eps[j - 1].values) << '\n';
    }
    return ok;
}

int run_sample(const Options& o) {
    AnyAutomaton in = parse_automaton_file(o.input);
    const ProbAutomaton& a = as_prob(in, "sample");
    UpWord w = make_word(a.alphabet(), o.prefix, o.period);
    if (o.runs < 1 || o.horizon < w.length())
        throw UsageError("--runs must be >= 1 and --horizon >= |prefix|+|period|");
    MonteCarloResult r = monte_carlo(a, w, o.runs, o.horizon, o.seed);
    std::cout << "estimate: " << approx(r.estimate) << '\n';
    std::cout << "stderr: " << approx(r.stderr_) << '\n';
    std::cout << "fork_tail: " << approx(r.fork_tail) << '\n';
    return ok;
}

int run_gadget(const Options& o) {
    ProbAutomaton g = [&] {
        if (o.gadget == "fig-a")
            return gadget_fig_a();
        if (o.gadget == "p-lambda")
            return gadget_p_lambda(require_lambda(o));
        if (o.gadget == "p-tilde-lambda")
            return gadget_p_tilde_lambda(require_lambda(o));
        throw UsageError("unknown gadget '" + o.gadget + "'");
    }();
    write_output(o.output, serialize_automaton(g));
    return ok;
}

void add_word(CLI::App* cmd, Options& o) {
    cmd->add_option("--prefix", o.prefix, "comma-separated finite prefix u");
    cmd->add_option("--period", o.period, "comma-separated nonempty period v");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ambiguity analysis and translations for probabilistic Büchi automata"};
    app.require_subcommand(1);
    Options o;

    auto* classify_cmd = app.add_subcommand("classify", "report patterns, ambiguity class and structural flags");
    classify_cmd->add_option("file", o.input)->required();

    auto* translate_cmd = app.add_subcommand("translate", "run one construction and write the result");
    translate_cmd->add_option("--mode", o.mode)->required();
    translate_cmd->add_option("--lambda", o.lambda_text, "threshold as n/d");
    translate_cmd->add_option("--k", o.k, "ambiguity bound for th2gnba");
    translate_cmd->add_flag("--force", o.force, "skip the finite-ambiguity check of th2gnba");
    translate_cmd->add_option("in", o.input)->required();
    translate_cmd->add_option("out", o.output)->required();

    auto* prob_cmd = app.add_subcommand("prob", "exact acceptance probability of a lasso word");
    prob_cmd->add_option("file", o.input)->required();
    add_word(prob_cmd, o);

    auto* member_cmd = app.add_subcommand("member", "membership of a lasso word");
    member_cmd->add_option("file", o.input)->required();
    member_cmd->add_option("--semantics", o.semantics, "positive | almost-sure | threshold");
    member_cmd->add_option("--lambda", o.lambda_text, "threshold as n/d");
    add_word(member_cmd, o);

    auto* check_cmd = app.add_subcommand("check", "emptiness or almost-sure non-universality");
    check_cmd->add_option("what", o.check_kind, "empty | nonuniversal-as")->required();
    check_cmd->add_option("file", o.input)->required();
    check_cmd->add_option("--mode", o.mode, "exp | flat (nonuniversal-as)");

    auto* supports_cmd = app.add_subcommand("supports", "reachable supports of the state distribution");
    supports_cmd->add_option("file", o.input)->required();

    auto* epsilon_cmd = app.add_subcommand("epsilon", "value sets and the epsilon ladder");
    epsilon_cmd->add_option("file", o.input)->required();
    epsilon_cmd->add_option("--lambda", o.lambda_text)->required();
    epsilon_cmd->add_option("--k", o.k)->required();

    auto* sample_cmd = app.add_subcommand("sample", "seeded Monte-Carlo estimate");
    sample_cmd->add_option("file", o.input)->required();
    add_word(sample_cmd, o);
    sample_cmd->add_option("--runs", o.runs);
    sample_cmd->add_option("--horizon", o.horizon);
    sample_cmd->add_option("--seed", o.seed);

    auto* gadget_cmd = app.add_subcommand("gadget", "write one of the example gadgets");
    gadget_cmd->add_option("name", o.gadget, "fig-a | p-lambda | p-tilde-lambda")->required();
    gadget_cmd->add_option("--lambda", o.lambda_text);
    gadget_cmd->add_option("out", o.output)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*classify_cmd)
            return run_classify(o);
        if (*translate_cmd)
            return run_translate(o);
        if (*prob_cmd)
            return run_prob(o);
        if (*member_cmd)
            return run_member(o);
        if (*check_cmd)
            return run_check(o);
        if (*supports_cmd)
            return run_supports(o);
        if (*epsilon_cmd)
            return run_epsilon(o);
        if (*sample_cmd)
            return run_sample(o);
        return run_gadget(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return invalid;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return invalid;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << '\n';
        return precondition;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return internal;
    }
}
