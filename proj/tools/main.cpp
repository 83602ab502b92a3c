// Command-line front end: builds the counterexample models, runs the exact
// verification suites, and emits CSV/JSON reports.
#include <CLI11.hpp>

#include <hedgelab/blocks.hpp>
#include <hedgelab/continuous.hpp>
#include <hedgelab/pasting.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

using namespace hedgelab;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "."
                                                                   : path.parent_path());
    std::ofstream os(path);
    os << text;
    if (!os) throw std::runtime_error("cannot write " + path.string());
}

std::string block_report_csv(const BlockParams& params, const BlockReport& report) {
    std::ostringstream os;
    os << "eps,M,a,b,cost,M_over_16,M_over_24,max_u_corr,eps_M,max_v_corr,"
          "eps_M_8,eps_M_12,pass\n";
    os << rat_str(params.epsilon) << ',' << rat_str(params.M) << ',' << rat_str(params.a)
       << ',' << rat_str(params.b) << ',' << rat_str(report.cost) << ','
       << rat_str(params.M / 16) << ',' << rat_str(params.M / 24) << ','
       << rat_str(report.max_u_corr) << ',' << rat_str(params.epsilon * params.M) << ','
       << rat_str(report.max_v_corr) << ',' << rat_str(8 * params.epsilon * params.M) << ','
       << rat_str(12 * params.epsilon * params.M) << ',' << (report.pass ? 1 : 0) << '\n';
    return os.str();
}

nlohmann::json report_to_json(const BlockReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& item : report.items)
        checks.push_back({{"name", item.name},
                          {"pass", item.pass},
                          {"hard", item.hard},
                          {"detail", item.detail}});
    return {{"cost", rat_str(report.cost)},
            {"max_u_corr", rat_str(report.max_u_corr)},
            {"max_v_corr", rat_str(report.max_v_corr)},
            {"pass", report.pass},
            {"checks", checks}};
}

struct BlockArgs {
    std::string eps = "1/2", m = "2", a = "2", b = "3";
    std::string out = ".";
    std::string format = "csv";

    BlockParams params() const {
        return {parse_rat(eps), parse_rat(m), parse_rat(a), parse_rat(b)};
    }
};

int cmd_block(const BlockArgs& args) {
    BlockParams params = args.params();  // throws InvalidParams -> usage error
    BlockModel block = build_block(params);
    BlockReport report = verify_block(block);
    for (const auto& item : report.items)
        std::cout << (item.pass ? "[ ok ] " : (item.hard ? "[FAIL] " : "[soft] "))
                  << item.name << (item.detail.empty() ? "" : "  (" + item.detail + ")")
                  << '\n';
    std::filesystem::path dir(args.out);
    if (args.format == "json")
        write_text(dir / "block_report.json", report_to_json(report).dump(2) + "\n");
    else
        write_text(dir / "block_report.csv", block_report_csv(params, report));
    return report.pass ? 0 : kExitCheckFailed;
}

struct PasteArgs {
    int depth = 4;
    std::string p_list = "1,2";
    int m_max = -1;  // default: depth - 1
    bool divergence_only = false;
    bool convergence_only = false;
    std::string out = ".";
    std::string format = "csv";
};

int cmd_paste(const PasteArgs& args) {
    if (args.depth < 1) throw InvalidDepth("depth must be >= 1");
    bool ok = true;
    std::filesystem::path dir(args.out);
    nlohmann::json jout;

    if (!args.divergence_only) {
        PastedModel model = paste(default_schedule(), args.depth);
        int m_max = args.m_max < 0 ? args.depth - 1 : args.m_max;
        std::ostringstream csv;
        csv << "m,p,computed,closed_form,equal\n";
        nlohmann::json jrows = nlohmann::json::array();
        for (int p : parse_int_list(args.p_list)) {
            for (const auto& row : convergence_table(model, p, m_max)) {
                ok = ok && row.equal;
                csv << row.m << ',' << row.p << ',' << rat_str(row.computed) << ','
                    << rat_str(row.closed_form) << ',' << (row.equal ? 1 : 0) << '\n';
                jrows.push_back({{"m", row.m},
                                 {"p", row.p},
                                 {"computed", rat_str(row.computed)},
                                 {"closed_form", rat_str(row.closed_form)},
                                 {"equal", row.equal}});
            }
        }
        std::cout << csv.str();
        if (args.format == "json")
            jout["convergence"] = jrows;
        else
            write_text(dir / "convergence.csv", csv.str());

        // Reconstruction of every g_m stays exact (throws otherwise).
        for (int m = 0; m <= args.depth; ++m) g_partial_decomposition(model, m);
    }

    if (!args.convergence_only) {
        std::ostringstream csv;
        csv << "N,global_cost,sum_block_costs,N_over_24,N_over_16,decoupled,pass24\n";
        nlohmann::json jrows = nlohmann::json::array();
        for (int depth = 1; depth <= args.depth; ++depth) {
            DivergenceRow row = divergence_check(paste(default_schedule(), depth));
            ok = ok && row.decoupled && row.pass24;
            csv << row.depth << ',' << rat_str(row.global_cost) << ','
                << rat_str(row.sum_block_costs) << ',' << rat_str(row.bound24) << ','
                << rat_str(row.bound16) << ',' << (row.decoupled ? 1 : 0) << ','
                << (row.pass24 ? 1 : 0) << '\n';
            jrows.push_back({{"N", row.depth},
                             {"global_cost", rat_str(row.global_cost)},
                             {"sum_block_costs", rat_str(row.sum_block_costs)},
                             {"decoupled", row.decoupled},
                             {"pass24", row.pass24}});
        }
        std::cout << csv.str();
        if (args.format == "json")
            jout["divergence"] = jrows;
        else
            write_text(dir / "divergence.csv", csv.str());
    }
    if (args.format == "json") write_text(dir / "paste_report.json", jout.dump(2) + "\n");
    return ok ? 0 : kExitCheckFailed;
}

struct ContinuousArgs {
    double eps = 0.5, m = 2.0, a = 2.0, b = 3.0;
    long long n = 100000;
    std::uint64_t seed = 1;
    double grid_step = 0;  // 0 = automatic
    long long paths = 0;
    std::string out = ".";
    std::string format = "csv";
};

int cmd_continuous(const ContinuousArgs& args) {
    ContinuousBlockParams params{args.eps, args.m, args.a, args.b};
    params.validate();
    if (args.n < 10000) throw InsufficientSamples("need --n of at least 10^4");

    std::vector<TestStrategy> strategies = {{1.0, 0.0}, {0.0, 0.0}, {-2.0, 1.0}, {0.5, -1.5}};
    McReport report = mc_verify(params, args.n, args.seed, strategies);

    std::ostringstream csv;
    csv << "check,estimate,target,tolerance,pass\n";
    csv.precision(17);
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& check : report.checks) {
        csv << '"' << check.name << "\"," << check.estimate << ',' << check.target << ','
            << check.tolerance << ',' << (check.pass ? 1 : 0) << '\n';
        jrows.push_back({{"check", check.name},
                         {"estimate", check.estimate},
                         {"target", check.target},
                         {"tolerance", check.tolerance},
                         {"pass", check.pass}});
    }
    bool ok = report.pass;
    if (args.paths > 0) {
        double step = args.grid_step > 0 ? args.grid_step : default_grid_step(params);
        auto counts = path_terminal_counts_parallel(params, step, args.paths, args.seed);
        auto probs = category_probs(params);
        double n = static_cast<double>(args.paths);
        for (int cat = 0; cat < 8; ++cat) {
            double est = counts[cat] / n;
            double se = std::sqrt(probs[cat] * (1 - probs[cat]) / n);
            bool pass = std::abs(est - probs[cat]) <= 4 * se;
            ok = ok && pass;
            csv << "\"path law, category " << cat << "\"," << est << ',' << probs[cat] << ','
                << 4 * se << ',' << (pass ? 1 : 0) << '\n';
        }
    }
    std::cout << csv.str();
    std::filesystem::path dir(args.out);
    if (args.format == "json")
        write_text(dir / "mc_report.json",
                   nlohmann::json{{"n", args.n}, {"seed", args.seed}, {"checks", jrows}}
                           .dump(2) +
                       "\n");
    else
        write_text(dir / "mc_report.csv", csv.str());
    return ok ? 0 : kExitCheckFailed;
}

struct DumpArgs {
    std::string type = "block";
    std::string eps = "1/2", m = "2", a = "2", b = "3";
    int depth = 3;
    std::string out = "model.json";
};

int cmd_dump(const DumpArgs& args) {
    nlohmann::json j;
    if (args.type == "block") {
        j = block_to_json(build_block(
            {parse_rat(args.eps), parse_rat(args.m), parse_rat(args.a), parse_rat(args.b)}));
    } else if (args.type == "paste") {
        j = pasted_to_json(paste(default_schedule(), args.depth));
    } else {
        throw CLI::ValidationError("--type must be block or paste");
    }
    write_text(args.out, j.dump(2) + "\n");
    std::cout << "wrote " << args.out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification lab for semi-static hedging counterexamples"};
    app.require_subcommand(1);

    BlockArgs block_args;
    auto* block = app.add_subcommand("block", "verify one discrete block");
    block->add_option("--eps", block_args.eps, "epsilon as num/den, in (0, 1/2]");
    block->add_option("--M", block_args.m, "payoff scale M > 0, num/den");
    block->add_option("--a", block_args.a, "terminal level a in [2,3], num/den");
    block->add_option("--b", block_args.b, "terminal level b in [2,3], num/den");
    block->add_option("--out", block_args.out, "output directory");
    block->add_option("--format", block_args.format)->check(CLI::IsMember({"csv", "json"}));

    PasteArgs paste_args;
    auto* paste_cmd = app.add_subcommand("paste", "convergence and divergence tables");
    paste_cmd->add_option("--depth", paste_args.depth, "truncation depth N >= 1");
    paste_cmd->add_option("--p", paste_args.p_list, "comma-separated moment orders");
    paste_cmd->add_option("--m-max", paste_args.m_max, "largest m in the table");
    paste_cmd->add_flag("--divergence-only", paste_args.divergence_only);
    paste_cmd->add_flag("--convergence-only", paste_args.convergence_only);
    paste_cmd->add_option("--out", paste_args.out, "output directory");
    paste_cmd->add_option("--format", paste_args.format)
        ->check(CLI::IsMember({"csv", "json"}));

    ContinuousArgs cont_args;
    auto* cont = app.add_subcommand("continuous", "Monte Carlo checks of the Brownian block");
    cont->add_option("--eps", cont_args.eps);
    cont->add_option("--M", cont_args.m);
    cont->add_option("--a", cont_args.a);
    cont->add_option("--b", cont_args.b);
    cont->add_option("--n", cont_args.n, "outcome samples, >= 10^4");
    cont->add_option("--seed", cont_args.seed, "RNG seed; same seed, same report");
    cont->add_option("--grid-step", cont_args.grid_step, "time step for path simulation");
    cont->add_option("--paths", cont_args.paths, "also simulate this many walk paths");
    cont->add_option("--out", cont_args.out, "output directory");
    cont->add_option("--format", cont_args.format)->check(CLI::IsMember({"csv", "json"}));

    DumpArgs dump_args;
    auto* dump = app.add_subcommand("dump-model", "JSON dump of a model");
    dump->add_option("--type", dump_args.type, "block or paste");
    dump->add_option("--eps", dump_args.eps);
    dump->add_option("--M", dump_args.m);
    dump->add_option("--a", dump_args.a);
    dump->add_option("--b", dump_args.b);
    dump->add_option("--depth", dump_args.depth);
    dump->add_option("--out", dump_args.out, "output file");

    try {
        app.parse(argc, argv);
        if (block->parsed()) return cmd_block(block_args);
        if (paste_cmd->parsed()) return cmd_paste(paste_args);
        if (cont->parsed()) return cmd_continuous(cont_args);
        if (dump->parsed()) return cmd_dump(dump_args);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    } catch (const InvalidParams& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidDepth& e) {
        std::cerr << "invalid depth: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InsufficientSamples& e) {
        std::cerr << "invalid sample count: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}
