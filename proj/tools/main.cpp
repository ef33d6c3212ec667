#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corrcomplete/completion.hpp"
#include "corrcomplete/models.hpp"
#include "corrcomplete/pattern.hpp"
#include "corrcomplete/verify.hpp"

namespace cc = corrcomplete;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNotChordal = 3;
constexpr int kExitNotPd = 4;
constexpr int kExitIo = 5;

/// check passes when the completion's inverse vanishes on the unspecified
/// pairs up to this bound.
constexpr double kCheckResidualTol = 1e-10;

/// The oracle cross-check runs automatically up to this many free entries.
constexpr int kAutoOracleFreeLimit = 6;

std::string read_input(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        if (std::cin.bad()) throw cc::IoError("failed to read standard input");
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cc::IoError("cannot open '" + path + "' for reading");
    ss << in.rdbuf();
    if (in.bad()) throw cc::IoError("failed to read '" + path + "'");
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content << std::flush;
        if (!std::cout) throw cc::IoError("failed to write standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cc::IoError("cannot open '" + path + "' for writing");
    out << content << std::flush;
    if (!out) throw cc::IoError("failed to write '" + path + "'");
}

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw cc::InvalidInput("invalid number '" + text + "' for " + what);
    return v;
}

double pivot_tolerance() {
    const char* env = std::getenv("CORRCOMPLETE_TOL");
    if (!env || !*env) return cc::kDefaultPivotTol;
    double tol = parse_double(env, "CORRCOMPLETE_TOL");
    if (!(tol >= 0.0)) throw cc::InvalidInput("CORRCOMPLETE_TOL must be non-negative");
    return tol;
}

cc::MatrixFormat resolve_format(const std::string& flag, const std::string& path,
                                const std::string& text) {
    if (flag == "json") return cc::MatrixFormat::json;
    if (flag == "csv") return cc::MatrixFormat::csv;
    auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == "json") return cc::MatrixFormat::json;
        if (ext == "csv") return cc::MatrixFormat::csv;
    }
    auto pos = text.find_first_not_of(" \t\r\n");
    return (pos != std::string::npos && text[pos] == '{') ? cc::MatrixFormat::json
                                                          : cc::MatrixFormat::csv;
}

cc::RootPolicy parse_root(const std::string& flag) {
    if (flag.empty() || flag == "auto") return cc::RootPolicy::largest();
    if (flag == "index") return cc::RootPolicy::first_index();
    std::vector<cc::Label> labels;
    std::string cur;
    auto push = [&] {
        auto b = cur.find_first_not_of(" \t");
        auto e = cur.find_last_not_of(" \t");
        if (b == std::string::npos) throw cc::InvalidInput("empty label in --root");
        labels.push_back(cur.substr(b, e - b + 1));
        cur.clear();
    };
    for (char ch : flag) {
        if (ch == ',')
            push();
        else
            cur += ch;
    }
    push();
    return cc::RootPolicy::explicit_set(std::move(labels));
}

std::string jq(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string label_array(const std::vector<cc::Label>& labels, const std::vector<int>& idx) {
    std::vector<std::string> parts;
    parts.reserve(idx.size());
    for (int v : idx) parts.push_back(jq(labels[v]));
    return "[" + join(parts, ", ") + "]";
}

std::string fill_object(const std::vector<cc::Label>& labels, const cc::FillEntry& f) {
    return "{\"row\": " + jq(labels[f.i]) + ", \"col\": " + jq(labels[f.j]) +
           ", \"value\": " + cc::format_value(f.value) + "}";
}

std::string label_set(const std::vector<cc::Label>& labels, const std::vector<int>& idx) {
    std::vector<std::string> parts;
    parts.reserve(idx.size());
    for (int v : idx) parts.push_back(labels[v]);
    return "{" + join(parts, ", ") + "}";
}

std::string report_json(const cc::CompletionReport& r) {
    const std::vector<cc::Label>& labels = r.labels;
    std::vector<std::string> parts;

    std::string s = "{\n";
    parts.clear();
    for (const cc::Label& l : labels) parts.push_back(jq(l));
    s += "  \"labels\": [" + join(parts, ", ") + "],\n";
    s += "  \"root\": " + std::to_string(r.root) + ",\n";
    parts.clear();
    for (int c : r.merge_order) parts.push_back(std::to_string(c));
    s += "  \"merge_order\": [" + join(parts, ", ") + "],\n";

    parts.clear();
    for (const cc::Clique& c : r.clique_tree.cliques)
        parts.push_back("    " + label_array(labels, c.vertices));
    s += "  \"cliques\": [\n" + join(parts, ",\n") + "\n  ],\n";

    parts.clear();
    for (const cc::CliqueTreeEdge& e : r.clique_tree.edges)
        parts.push_back("    {\"a\": " + std::to_string(e.a) + ", \"b\": " + std::to_string(e.b) +
                        ", \"separator\": " + label_array(labels, e.separator) + "}");
    s += "  \"tree_edges\": [" + (parts.empty() ? "]" : "\n" + join(parts, ",\n") + "\n  ]") +
         ",\n";

    parts.clear();
    for (const cc::FillEntry& f : r.fill_in) parts.push_back("    " + fill_object(labels, f));
    s += "  \"fill_in\": [" + (parts.empty() ? "]" : "\n" + join(parts, ",\n") + "\n  ]") + ",\n";

    s += "  \"log_det\": " + cc::format_value(r.log_det) + ",\n";
    s += "  \"entropy\": " + cc::format_value(r.entropy) + ",\n";

    parts.clear();
    for (const cc::MergeStep& st : r.steps) {
        std::vector<std::string> fills;
        for (const cc::FillEntry& f : st.filled) fills.push_back(fill_object(labels, f));
        parts.push_back("    {\"clique\": " + label_array(labels, st.new_clique.vertices) +
                        ", \"separator\": " + label_array(labels, st.separator) +
                        ", \"absorbed\": " + label_array(labels, st.absorbed) +
                        ", \"filled\": [" + join(fills, ", ") + "]}");
    }
    s += "  \"steps\": [" + (parts.empty() ? "]" : "\n" + join(parts, ",\n") + "\n  ]") + "\n";
    s += "}\n";
    return s;
}

std::string verification_json(const cc::VerificationResult& v) {
    auto opt = [](const std::optional<double>& x) {
        return x ? cc::format_value(*x) : std::string("null");
    };
    std::string s = "{\n";
    s += std::string("  \"pd\": ") + (v.pd ? "true" : "false") + ",\n";
    s += "  \"max_inverse_residual\": " + opt(v.max_inverse_residual) + ",\n";
    s += "  \"fischer_residual\": " + opt(v.fischer_residual) + ",\n";
    s += "  \"oracle_gap\": " + opt(v.oracle_gap) + ",\n";
    s += "  \"entropy\": " + opt(v.entropy) + "\n";
    s += "}\n";
    return s;
}

std::string dq(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string dot_text(const std::vector<cc::Label>& labels, const cc::PatternGraph& g,
                     const cc::CliqueTree* tree) {
    std::string s = "graph pattern {\n";
    for (int v = 0; v < g.size(); ++v)
        if (g.neighbors(v).empty()) s += "  " + dq(labels[v]) + ";\n";
    for (int i = 0; i < g.size(); ++i)
        for (int j : g.neighbors(i))
            if (i < j) s += "  " + dq(labels[i]) + " -- " + dq(labels[j]) + ";\n";
    s += "}\n";
    if (!tree) return s;

    s += "graph clique_tree {\n";
    for (std::size_t c = 0; c < tree->cliques.size(); ++c)
        s += "  c" + std::to_string(c) + " [label=" +
             dq(label_set(labels, tree->cliques[c].vertices)) + "];\n";
    for (const cc::CliqueTreeEdge& e : tree->edges)
        s += "  c" + std::to_string(e.a) + " -- c" + std::to_string(e.b) +
             " [label=" + dq(label_set(labels, e.separator)) + "];\n";
    s += "}\n";
    return s;
}

struct CompleteArgs {
    std::string input = "-";
    std::string format;
    std::string out_format;
    std::string output = "-";
    std::string report;
    std::string root = "auto";
};

int run_complete(const CompleteArgs& args) {
    const std::string text = read_input(args.input);
    const cc::MatrixFormat in_fmt = resolve_format(args.format, args.input, text);
    const cc::PartialMatrix m = cc::parse_partial(text, in_fmt);
    auto [dense, report] = cc::complete(m, parse_root(args.root), pivot_tolerance());

    const cc::MatrixFormat out_fmt =
        args.out_format.empty() ? in_fmt : resolve_format(args.out_format, "", "");
    write_output(args.output, cc::serialize_dense(dense, out_fmt));
    if (!args.report.empty()) write_output(args.report, report_json(report));
    return kExitOk;
}

struct CheckArgs {
    std::string input = "-";
    std::string format;
    std::string pattern;
    std::string pattern_format;
    bool force_oracle = false;
};

int run_check(const CheckArgs& args) {
    const std::string text = read_input(args.input);
    const cc::PartialMatrix pm =
        cc::parse_partial(text, resolve_format(args.format, args.input, text));
    const cc::DenseCorrMatrix h = cc::to_dense(pm);

    std::optional<cc::PartialMatrix> pattern;
    if (!args.pattern.empty()) {
        const std::string ptext = read_input(args.pattern);
        pattern = cc::parse_partial(ptext,
                                    resolve_format(args.pattern_format, args.pattern, ptext));
    }

    cc::VerificationOptions opts;
    opts.pivot_tol = pivot_tolerance();
    opts.with_oracle =
        args.force_oracle ||
        (pattern &&
         static_cast<int>(pattern->unspecified_pairs().size()) <= kAutoOracleFreeLimit);

    const cc::VerificationResult result = cc::verify_completion(h, pattern, opts);
    write_output("-", verification_json(result));
    if (!result.pd) return kExitNotPd;
    if (pattern &&
        (!result.max_inverse_residual || *result.max_inverse_residual > kCheckResidualTol))
        return kExitCheckFailed;
    return kExitOk;
}

struct ExplainArgs {
    std::string input = "-";
    std::string format;
    std::string dot;
    std::string root = "auto";
};

int run_explain(const ExplainArgs& args) {
    const std::string text = read_input(args.input);
    const cc::PartialMatrix m =
        cc::parse_partial(text, resolve_format(args.format, args.input, text));
    const std::vector<cc::Label>& labels = m.labels();
    const cc::PatternGraph g = cc::build_pattern_graph(m);

    std::string out = "pattern: " + std::to_string(m.size()) + " variables, " +
                      std::to_string(m.specified_count()) + " specified entries, " +
                      std::to_string(m.unspecified_pairs().size()) + " free\n";

    const cc::ChordalityResult chord = cc::is_chordal(g);
    if (!chord.chordal) {
        out += "chordal: no\n";
        std::vector<std::string> cycle;
        for (int v : chord.certificate) cycle.push_back(labels[v]);
        out += "chordless cycle: " + join(cycle, " - ") + "\n";
        write_output("-", out);
        if (!args.dot.empty()) write_output(args.dot, dot_text(labels, g, nullptr));
        return kExitNotChordal;
    }
    out += "chordal: yes\n";

    const cc::EliminationOrder ord = cc::maximum_cardinality_search(g);
    const cc::CliqueTree tree = cc::build_clique_tree(cc::maximal_cliques(g, ord));
    out += "cliques:\n";
    for (std::size_t c = 0; c < tree.cliques.size(); ++c)
        out += "  " + std::to_string(c) + ": " +
               label_set(labels, tree.cliques[c].vertices) + "\n";
    out += "clique tree edges:\n";
    if (tree.edges.empty()) out += "  (none)\n";
    for (const cc::CliqueTreeEdge& e : tree.edges)
        out += "  " + std::to_string(e.a) + " -- " + std::to_string(e.b) + "  separator " +
               label_set(labels, e.separator) + "\n";

    const int root = cc::choose_root(tree, parse_root(args.root), labels);
    const std::vector<int> order = cc::clique_order(tree, root);
    out += "root: " + std::to_string(root) + " " +
           label_set(labels, tree.cliques[root].vertices) + "\n";
    out += "merge order:\n";
    for (const cc::PlanStep& step : cc::derive_merge_plan(tree, order)) {
        out += "  " + std::to_string(step.clique) + ": " +
               label_set(labels, tree.cliques[step.clique].vertices);
        if (!step.separator.empty())
            out += "  separator " + label_set(labels, step.separator);
        out += "\n";
    }
    write_output("-", out);
    if (!args.dot.empty()) write_output(args.dot, dot_text(labels, g, &tree));
    return kExitOk;
}

struct GenArgs {
    std::string output = "-";
    std::string format = "json";
    // xccy
    std::string params;
    // ncurrency
    int count = 0;
    std::string params_file;
    // random
    int n = 0;
    std::uint64_t seed = 0;
    double edge_prob = 0.3;
};

cc::MatrixFormat gen_format(const GenArgs& args) {
    return resolve_format(args.format, args.output, "");
}

int run_gen_xccy(const GenArgs& args) {
    std::vector<double> values;
    std::string cur;
    for (char ch : args.params + ",") {
        if (ch == ',') {
            values.push_back(parse_double(cur, "--params"));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (values.size() != 6)
        throw cc::InvalidInput("--params needs 6 comma-separated values "
                               "(e_nuE,a_nuA,e_a,e_x,a_x,x_nuX), got " +
                               std::to_string(values.size()));
    cc::XccyParams p{values[0], values[1], values[2], values[3], values[4], values[5]};
    write_output(args.output, cc::serialize_partial(cc::xccy_pattern(p), gen_format(args)));
    return kExitOk;
}

cc::NCurrencyParams read_ncurrency_params(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_input(path));
    } catch (const nlohmann::json::exception& e) {
        throw cc::InvalidInput(std::string("malformed params file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("e_nuE") || !j.contains("legs") || !j["legs"].is_array())
        throw cc::InvalidInput("params file must be an object with e_nuE and a legs array");
    cc::NCurrencyParams p;
    if (j.contains("domestic")) {
        if (!j["domestic"].is_string())
            throw cc::InvalidInput("params file: domestic must be a string");
        p.domestic = j["domestic"].get<std::string>();
    }
    if (!j["e_nuE"].is_number()) throw cc::InvalidInput("params file: e_nuE must be a number");
    p.e_nuE = j["e_nuE"].get<double>();
    for (const auto& leg : j["legs"]) {
        const char* fields[] = {"k_nuK", "e_k", "e_x", "k_x", "x_nuX"};
        double v[5];
        for (int f = 0; f < 5; ++f) {
            if (!leg.is_object() || !leg.contains(fields[f]) || !leg[fields[f]].is_number())
                throw cc::InvalidInput(std::string("params file: each leg needs numeric ") +
                                       fields[f]);
            v[f] = leg[fields[f]].get<double>();
        }
        p.legs.push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    return p;
}

int run_gen_ncurrency(const GenArgs& args) {
    cc::NCurrencyParams p;
    if (!args.params_file.empty()) {
        p = read_ncurrency_params(args.params_file);
        if (args.count > 0 && args.count != static_cast<int>(p.legs.size()))
            throw cc::InvalidInput("--count " + std::to_string(args.count) +
                                   " does not match the " + std::to_string(p.legs.size()) +
                                   " legs in the params file");
    } else {
        if (args.count < 1) throw cc::InvalidInput("--count must be at least 1");
        p.e_nuE = 0.2;
        p.legs.assign(static_cast<std::size_t>(args.count), {0.3, 0.4, 0.5, 0.6, 0.7});
    }
    write_output(args.output, cc::serialize_partial(cc::n_currency_pattern(p), gen_format(args)));
    return kExitOk;
}

int run_gen_random(const GenArgs& args) {
    cc::RandomInstance inst = cc::random_chordal_instance(args.n, args.seed, args.edge_prob);
    write_output(args.output, cc::serialize_partial(inst.pattern, gen_format(args)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum-determinant completion of partially specified correlation matrices"};
    app.require_subcommand(1);
    const auto format_check = CLI::IsMember({"json", "csv"});

    CompleteArgs complete_args;
    CLI::App* cmd_complete =
        app.add_subcommand("complete", "fill the unspecified entries of a matrix");
    cmd_complete->add_option("--input,-i", complete_args.input,
                             "partial matrix file, or - for stdin");
    cmd_complete->add_option("--format", complete_args.format,
                             "input format (default: by file extension, then content)")
        ->check(format_check);
    cmd_complete->add_option("--out-format", complete_args.out_format,
                             "output format (default: same as input)")
        ->check(format_check);
    cmd_complete->add_option("--output,-o", complete_args.output,
                             "completed matrix file, or - for stdout");
    cmd_complete->add_option("--report", complete_args.report,
                             "write a JSON completion report to this file");
    cmd_complete->add_option(
        "--root", complete_args.root,
        "merge root: auto (largest clique), index (first clique), or a "
        "comma-separated label set naming one maximal clique");

    CheckArgs check_args;
    CLI::App* cmd_check = app.add_subcommand(
        "check", "verify a dense matrix: positive definiteness and, given the original "
                 "pattern, the completion optimality conditions");
    cmd_check->add_option("--input,-i", check_args.input, "dense matrix file, or - for stdin");
    cmd_check->add_option("--format", check_args.format, "input format")->check(format_check);
    cmd_check->add_option("--pattern", check_args.pattern,
                          "the partial matrix this is claimed to complete");
    cmd_check->add_option("--pattern-format", check_args.pattern_format, "pattern file format")
        ->check(format_check);
    cmd_check->add_flag("--oracle", check_args.force_oracle,
                        "run the numeric maximizer even above " +
                            std::to_string(kAutoOracleFreeLimit) + " free entries");

    ExplainArgs explain_args;
    CLI::App* cmd_explain = app.add_subcommand(
        "explain", "show the pattern graph analysis: chordality, cliques, tree, merge plan");
    cmd_explain->add_option("--input,-i", explain_args.input,
                            "partial matrix file, or - for stdin");
    cmd_explain->add_option("--format", explain_args.format, "input format")->check(format_check);
    cmd_explain->add_option("--dot", explain_args.dot,
                            "also write pattern graph and clique tree in DOT format");
    cmd_explain->add_option("--root", explain_args.root, "root policy, as in complete");

    GenArgs gen_args;
    CLI::App* cmd_gen = app.add_subcommand("gen", "generate example patterns");
    cmd_gen->require_subcommand(1);
    CLI::App* gen_xccy = cmd_gen->add_subcommand(
        "xccy", "two-economy pattern: 6 variables, 6 specified entries");
    gen_xccy->add_option("--params", gen_args.params,
                         "e_nuE,a_nuA,e_a,e_x,a_x,x_nuX")
        ->required();
    CLI::App* gen_ncur = cmd_gen->add_subcommand(
        "ncurrency", "many-economy pattern: 2 + 4N variables");
    gen_ncur->add_option("--count", gen_args.count, "number of foreign currencies");
    gen_ncur->add_option("--params-file", gen_args.params_file,
                         "JSON file: {\"domestic\", \"e_nuE\", \"legs\": [{\"k_nuK\", \"e_k\", "
                         "\"e_x\", \"k_x\", \"x_nuX\"}, ...]} (default: 0.2 and "
                         "0.3,0.4,0.5,0.6,0.7 per leg)");
    CLI::App* gen_random = cmd_gen->add_subcommand(
        "random", "random chordal pattern masked from a random PD matrix");
    gen_random->add_option("--n", gen_args.n, "number of variables")->required();
    gen_random->add_option("--seed", gen_args.seed, "RNG seed (default 0)");
    gen_random->add_option("--edge-prob", gen_args.edge_prob,
                           "base edge probability before chordal fill (default 0.3)");
    for (CLI::App* sub : {gen_xccy, gen_ncur, gen_random}) {
        sub->add_option("--output,-o", gen_args.output, "pattern file, or - for stdout");
        sub->add_option("--format", gen_args.format, "output format (default json)")
            ->check(format_check);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (cmd_complete->parsed()) return run_complete(complete_args);
        if (cmd_check->parsed()) return run_check(check_args);
        if (cmd_explain->parsed()) return run_explain(explain_args);
        if (cmd_gen->parsed()) {
            if (gen_xccy->parsed()) return run_gen_xccy(gen_args);
            if (gen_ncur->parsed()) return run_gen_ncurrency(gen_args);
            if (gen_random->parsed()) return run_gen_random(gen_args);
        }
        std::cerr << "error: no command\n";
        return kExitInvalidInput;
    } catch (const cc::NotChordal& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotChordal;
    } catch (const cc::CliqueBlockNotPD& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotPd;
    } catch (const cc::NotPositiveDefinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotPd;
    } catch (const cc::NoFeasiblePoint& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotPd;
    } catch (const cc::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const cc::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
