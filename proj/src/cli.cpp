#include "pdab/cli.hpp"

#include "pdab/bisim.hpp"
#include "pdab/counters.hpp"
#include "pdab/dtm.hpp"
#include "pdab/lts.hpp"
#include "pdab/macros.hpp"
#include "pdab/reduction.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pdab {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out << text;
}

struct Report {
    std::vector<std::string> argv;
    std::map<std::string, std::string> inputs;  // path -> content digest
    std::string outcome;

    void note_input(const std::string& path, const std::string& content) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                      static_cast<unsigned long long>(fnv1a(content)));
        inputs[path] = buf;
    }
};

int verdict_code(Verdict::Kind k) {
    switch (k) {
        case Verdict::Bisimilar: return 0;
        case Verdict::NotBisimilar: return 1;
        default: return 2;
    }
}

std::string join_word(const std::vector<std::string>& word) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += ' ';
        out += word[i];
    }
    return out;
}

std::string bits_string(const std::vector<int>& bits) {
    std::string out;
    for (int b : bits) out += static_cast<char>('0' + b);
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"pushdown-system bisimilarity workbench"};
    app.require_subcommand(1);
    app.fallthrough();  // let global options appear after the subcommand too

    CheckOptions opts;
    std::uint64_t seed = 0;
    std::string report_path;
    app.add_option("--cap", opts.stack_cap, "stack height cap for explorations")
        ->capture_default_str();
    app.add_option("--rounds", opts.max_rounds, "round bound for the game search")
        ->capture_default_str();
    app.add_option("--budget", opts.node_budget, "node budget per solver stage")
        ->capture_default_str();
    app.add_option("--seed", seed, "random seed (reserved; all commands are deterministic)");
    app.add_option("--report", report_path, "append a JSON report line to this file");

    // --- expand ---------------------------------------------------------
    auto* cmd_expand = app.add_subcommand("expand", "expand a macro file into a pushdown system");
    std::string expand_in, expand_out;
    cmd_expand->add_option("input", expand_in, "macro file (- for stdin)")->required();
    cmd_expand->add_option("-o,--output", expand_out, "output file (default stdout)");

    // --- reduce ---------------------------------------------------------
    auto* cmd_reduce =
        app.add_subcommand("reduce", "build the bisimilarity instance of a step machine");
    std::string reduce_in, reduce_out;
    int reduce_k = 1, reduce_n = 1;
    bool reduce_normed = false;
    cmd_reduce->add_option("input", reduce_in, "machine file (- for stdin)")->required();
    cmd_reduce->add_option("-k", reduce_k, "counter tower height (>= 1)")->required();
    cmd_reduce->add_option("-n", reduce_n, "base counter width (>= 1)")->required();
    cmd_reduce->add_flag("--normed", reduce_normed, "emit the normed instance variant");
    cmd_reduce->add_option("-o,--output", reduce_out, "output file (default stdout)");

    // --- check ----------------------------------------------------------
    auto* cmd_check = app.add_subcommand("check", "decide bisimilarity of two configurations");
    std::string check_in, check_c1, check_c2;
    cmd_check->add_option("input", check_in, "pushdown system file (- for stdin)")->required();
    cmd_check->add_option("left", check_c1, "left configuration, e.g. 'l:start |'")->required();
    cmd_check->add_option("right", check_c2, "right configuration")->required();

    // --- normed ---------------------------------------------------------
    auto* cmd_normed =
        app.add_subcommand("normed", "check that every reachable configuration can drain");
    std::string normed_in, normed_root;
    cmd_normed->add_option("input", normed_in, "pushdown system file (- for stdin)")->required();
    cmd_normed->add_option("root", normed_root, "root configuration")->required();

    // --- simulate -------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "run a step machine from the all-ones word");
    std::string sim_in;
    std::size_t sim_steps = 1u << 20;
    cmd_sim->add_option("input", sim_in, "machine file (- for stdin)")->required();
    cmd_sim->add_option("--max-steps", sim_steps, "step bound")->capture_default_str();

    // --- dtm-encode -----------------------------------------------------
    auto* cmd_dtm = app.add_subcommand("dtm-encode",
                                       "encode a space-bounded machine as a step machine");
    std::string dtm_in, dtm_out;
    int dtm_k = 1, dtm_n = 1;
    cmd_dtm->add_option("input", dtm_in, "machine description file (- for stdin)")->required();
    cmd_dtm->add_option("-k", dtm_k, "counter tower height")->required();
    cmd_dtm->add_option("-n", dtm_n, "base counter width")->required();
    cmd_dtm->add_option("-o,--output", dtm_out, "output file (default stdout)");

    // --- counter --------------------------------------------------------
    auto* cmd_counter = app.add_subcommand("counter", "counter word utilities");
    cmd_counter->require_subcommand(1);
    auto* cnt_gen = cmd_counter->add_subcommand("gen", "print the canonical counter word");
    int cnt_level = 0, cnt_n = 1;
    std::string cnt_value;
    cnt_gen->add_option("level", cnt_level)->required();
    cnt_gen->add_option("n", cnt_n)->required();
    cnt_gen->add_option("value", cnt_value)->required();
    auto* cnt_val = cmd_counter->add_subcommand("val", "read the value stored in a counter word");
    int cv_level = 0, cv_n = 1;
    std::vector<std::string> cv_word;
    cnt_val->add_option("level", cv_level)->required();
    cnt_val->add_option("n", cv_n)->required();
    cnt_val->add_option("word", cv_word, "counter symbols, top first");
    auto* cnt_len = cmd_counter->add_subcommand("len", "print the counter word length");
    int cl_level = 0, cl_n = 1;
    cnt_len->add_option("level", cl_level)->required();
    cnt_len->add_option("n", cl_n)->required();

    // --- demo -----------------------------------------------------------
    auto* cmd_demo = app.add_subcommand(
        "demo", "reduce and check the two bundled desk-scale machines");

    std::vector<std::string> argv_for_parse;
    argv_for_parse.reserve(args.size());
    for (const std::string& a : args) argv_for_parse.push_back(a);

    Report report;
    report.argv = args;

    try {
        std::vector<std::string> reversed(argv_for_parse.rbegin(), argv_for_parse.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    auto started = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (*cmd_expand) {
            std::string text = read_input(expand_in);
            report.note_input(expand_in, text);
            std::istringstream in(text);
            auto macros = parse_macro_file(in);
            Pda pda;
            ExpandStats st = expand_macros(pda, macros);
            write_output(expand_out, print_pda(pda));
            std::cerr << "expanded " << macros.size() << " macros: " << st.rules_added
                      << " rules, " << st.states_added << " fresh states\n";
            report.outcome = "ok";
        } else if (*cmd_reduce) {
            std::string text = read_input(reduce_in);
            report.note_input(reduce_in, text);
            std::istringstream in(text);
            TransducerMachine tm = parse_machine(in);
            Reduction red = build_reduction(tm, reduce_k, reduce_n, reduce_normed);
            write_output(reduce_out, print_pda(red.pda));
            std::cerr << "instance: states=" << red.stats.states
                      << " symbols=" << red.stats.symbols << " actions=" << red.stats.actions
                      << " rules=" << red.stats.rules << " size=" << red.stats.size
                      << " macros=" << red.stats.macros << "\n"
                      << "roots: '" << red.left_start << " |' vs '" << red.right_start << " |'\n";
            report.outcome = "ok";
        } else if (*cmd_check) {
            std::string text = read_input(check_in);
            report.note_input(check_in, text);
            Pda pda = parse_pda_string(text);
            Config c1 = parse_config(pda, check_c1);
            Config c2 = parse_config(pda, check_c2);
            Verdict v = capped_bisim(pda, c1, c2, opts);
            std::cout << v.to_string() << "\n";
            if (v.kind == Verdict::NotBisimilar && !v.witness.moves.empty())
                std::cout << "witness: " << v.witness.to_string() << "\n";
            report.outcome = v.to_string();
            code = verdict_code(v.kind);
        } else if (*cmd_normed) {
            std::string text = read_input(normed_in);
            report.note_input(normed_in, text);
            Pda pda = parse_pda_string(text);
            Config root = parse_config(pda, normed_root);
            NormedResult r = check_normed(pda, root, opts.stack_cap, opts.node_budget);
            if (r.kind == NormedResult::Normed) {
                std::cout << "Normed\n";
                report.outcome = "Normed";
                code = 0;
            } else if (r.kind == NormedResult::NotNormed) {
                std::cout << "NotNormed";
                if (r.witness) std::cout << " at " << print_config(pda, *r.witness);
                std::cout << "\n";
                report.outcome = "NotNormed";
                code = 1;
            } else {
                std::cout << "Unknown\n";
                report.outcome = "Unknown";
                code = 2;
            }
        } else if (*cmd_sim) {
            std::string text = read_input(sim_in);
            report.note_input(sim_in, text);
            std::istringstream in(text);
            TransducerMachine tm = parse_machine(in);
            MachineRun run = simulate_machine(tm, sim_steps);
            for (const auto& w : run.words) std::cout << bits_string(w) << "\n";
            std::cout << (run.dead_end ? "dead-end" : "step-bound") << "\n";
            report.outcome = run.dead_end ? "dead-end" : "step-bound";
        } else if (*cmd_dtm) {
            std::string text = read_input(dtm_in);
            report.note_input(dtm_in, text);
            std::istringstream in(text);
            DtmSpec spec = parse_dtm(in);
            DtmEncoding enc = encode_dtm(spec, dtm_k, dtm_n);
            write_output(dtm_out, print_machine(enc.machine));
            std::cerr << "encoded: block_bits=" << enc.block_bits << " cells=" << enc.cells
                      << " width=" << enc.machine.ell << " t1_states=" << enc.machine.t1.num_states()
                      << " t2_states=" << enc.machine.t2.num_states() << "\n";
            report.outcome = "ok";
        } else if (*cnt_gen) {
            BigInt value(cnt_value);
            std::cout << join_word(canonical_counter(cnt_level, cnt_n, value)) << "\n";
            report.outcome = "ok";
        } else if (*cnt_val) {
            std::cout << counter_value(cv_word, cv_level, cv_n).str() << "\n";
            report.outcome = "ok";
        } else if (*cnt_len) {
            std::cout << counter_length(cl_level, cl_n).str() << "\n";
            report.outcome = "ok";
        } else if (*cmd_demo) {
            struct Case {
                const char* label;
                TransducerMachine tm;
                Verdict::Kind expect;
            };
            std::vector<Case> cases = {
                {"bisimilar-instance", toy_machine_bisimilar(), Verdict::Bisimilar},
                {"non-bisimilar-instance", toy_machine_nonbisimilar(), Verdict::NotBisimilar},
            };
            bool unknown = false, wrong = false;
            std::string outcomes;
            for (Case& c : cases) {
                Reduction red = build_reduction(c.tm, 1, 1, false);
                Config c1 = {*red.pda.find_state(red.left_start), {}};
                Config c2 = {*red.pda.find_state(red.right_start), {}};
                Verdict v = capped_bisim(red.pda, c1, c2, opts);
                std::cout << c.label << ": " << v.to_string() << "\n";
                if (!outcomes.empty()) outcomes += "; ";
                outcomes += std::string(c.label) + "=" + v.to_string();
                if (v.kind == Verdict::Unknown) unknown = true;
                else if (v.kind != c.expect) wrong = true;
            }
            report.outcome = outcomes;
            code = wrong ? 1 : (unknown ? 2 : 0);
        }
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        report.outcome = std::string("budget error: ") + e.what();
        code = 70;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        report.outcome = std::string("error: ") + e.what();
        code = 65;
    }

    if (!report_path.empty()) {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        nlohmann::json j;
        j["argv"] = report.argv;
        j["inputs"] = report.inputs;
        j["outcome"] = report.outcome;
        j["elapsed_ms"] = elapsed;
        j["seed"] = seed;
        std::ofstream rep(report_path, std::ios::app);
        if (rep) rep << j.dump() << "\n";
    }
    return code;
}

}  // namespace pdab
