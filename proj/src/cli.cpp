#include "nmfz/cli.hpp"

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "nmfz/dataset.hpp"
#include "nmfz/experiment.hpp"
#include "nmfz/factorize.hpp"
#include "nmfz/io.hpp"

namespace nmfz::cli {

namespace {

constexpr int kOrlDownscaleFactor = 4; // 112x92 -> 28x23

struct DatasetFlags {
    std::string orl_dir;
    std::string synthetic;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& flags) {
    auto* orl = cmd->add_option("--orl-dir", flags.orl_dir,
                                "ORL tree root (s1..s40 subdirectories of 1..10.pgm)");
    auto* syn = cmd->add_option("--synthetic", flags.synthetic,
                                "synthetic dataset spec: classes=C,p=P,n-per-class=N,noise=X"
                                "[,seed=S]");
    orl->excludes(syn);
    syn->excludes(orl);
}

LabeledDataset load_dataset(const DatasetFlags& flags) {
    if (!flags.orl_dir.empty()) {
        return load_orl(flags.orl_dir, kOrlDownscaleFactor);
    }
    if (flags.synthetic.empty()) {
        throw std::invalid_argument("one of --orl-dir or --synthetic is required");
    }

    std::map<std::string, std::string> kv;
    std::stringstream ss(flags.synthetic);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--synthetic: expected key=value, got '" + item + "'");
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    auto take = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument(std::string("--synthetic: missing ") + key + "=");
        }
        std::string value = it->second;
        kv.erase(it);
        return value;
    };
    auto take_or = [&](const char* key, const std::string& fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string value = it->second;
        kv.erase(it);
        return value;
    };
    const std::size_t classes = std::stoull(take("classes"));
    const std::size_t p = std::stoull(take("p"));
    const std::size_t n_per_class = std::stoull(take("n-per-class"));
    const double noise = std::stod(take_or("noise", "0"));
    const std::uint64_t seed = std::stoull(take_or("seed", "0"));
    if (!kv.empty()) {
        throw std::invalid_argument("--synthetic: unknown key '" + kv.begin()->first + "'");
    }
    return synthetic_parts(p, n_per_class, classes, noise, seed);
}

std::string dataset_echo(const DatasetFlags& flags) {
    if (!flags.orl_dir.empty()) return "--orl-dir " + flags.orl_dir;
    return "--synthetic " + flags.synthetic;
}

// Plain decimal literal -> integer scaled by 10^decimals. Range endpoints go
// through this so every grid point is exactly the double the same literal
// would parse to (0.4:0.6:0.05 yields 0.45, not 0.45000000000000007).
void parse_decimal(const std::string& s, long long& scaled, int& decimals) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
    long long value = 0;
    int digits = 0, frac = 0;
    bool seen_dot = false;
    for (; pos < s.size(); ++pos) {
        if (s[pos] == '.') {
            if (seen_dot) throw std::invalid_argument("bad number '" + s + "'");
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(s[pos]))) {
            throw std::invalid_argument("bad number '" + s + "' in range");
        }
        value = value * 10 + (s[pos] - '0');
        ++digits;
        if (seen_dot) ++frac;
        if (digits > 15) throw std::invalid_argument("number '" + s + "' has too many digits");
    }
    if (digits == 0) throw std::invalid_argument("bad number '" + s + "'");
    scaled = negative ? -value : value;
    decimals = frac;
}

long long pow10_ll(int e) {
    long long v = 1;
    for (int i = 0; i < e; ++i) v *= 10;
    return v;
}

// One list item: either a scalar or an inclusive start:stop:step range.
void expand_item(const std::string& item, std::vector<double>& out) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(item));
        return;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        throw std::invalid_argument("range '" + item + "' must be start:stop:step");
    }
    long long start, stop, step;
    int d_start, d_stop, d_step;
    parse_decimal(item.substr(0, c1), start, d_start);
    parse_decimal(item.substr(c1 + 1, c2 - c1 - 1), stop, d_stop);
    parse_decimal(item.substr(c2 + 1), step, d_step);
    const int d = std::max({d_start, d_stop, d_step});
    start *= pow10_ll(d - d_start);
    stop *= pow10_ll(d - d_stop);
    step *= pow10_ll(d - d_step);
    if (step <= 0) throw std::invalid_argument("range '" + item + "': step must be > 0");
    if (stop < start) throw std::invalid_argument("range '" + item + "': stop < start");
    const double denom = static_cast<double>(pow10_ll(d));
    for (long long v = start; v <= stop; v += step) {
        out.push_back(static_cast<double>(v) / denom);
    }
}

std::vector<double> parse_value_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) expand_item(item, out);
    }
    if (out.empty()) throw std::invalid_argument("empty value list '" + s + "'");
    return out;
}

std::vector<std::size_t> parse_rank_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    if (out.empty()) throw std::invalid_argument("empty rank list '" + s + "'");
    return out;
}

std::filesystem::path aggregate_path(std::filesystem::path detail) {
    const std::filesystem::path ext = detail.extension();
    detail.replace_extension();
    detail += ".agg";
    detail += ext;
    return detail;
}

} // namespace

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("nmfz");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    CLI::App app{"nonnegative matrix factorization toolkit (plain, CNMF, ZNMF) with a "
                 "recognition benchmark harness"};
    app.require_subcommand(1);

    // ---- inspect ----
    auto* inspect = app.add_subcommand("inspect", "load a dataset and print its shape");
    DatasetFlags inspect_ds;
    add_dataset_flags(inspect, inspect_ds);

    // ---- factorize ----
    auto* factorize = app.add_subcommand("factorize", "run one factorization and write W, H "
                                                      "and the objective trace as CSV");
    DatasetFlags fact_ds;
    add_dataset_flags(factorize, fact_ds);
    std::string fact_kind = "none";
    std::size_t fact_rank = 0;
    double fact_alpha = 0.0, fact_beta = 0.0;
    std::optional<double> fact_g;
    std::size_t fact_max_iters = 500;
    double fact_rel_tol = 1e-5;
    std::uint64_t fact_seed = 0;
    std::string fact_out;
    factorize->add_option("--kind", fact_kind, "none|cnmf|znmf")->default_str("none");
    factorize->add_option("--rank", fact_rank, "factorization rank q")->required();
    factorize->add_option("--alpha", fact_alpha, "penalty weight on J1(W)");
    factorize->add_option("--beta", fact_beta, "penalty weight on J2(H)");
    factorize->add_option("--g", fact_g, "Zellner scale (default max(n, p^2))");
    factorize->add_option("--max-iters", fact_max_iters, "iteration cap");
    factorize->add_option("--rel-tol", fact_rel_tol, "windowed relative stopping tolerance");
    factorize->add_option("--seed", fact_seed, "initialization seed");
    factorize->add_option("--out", fact_out, "output prefix for .w.csv/.h.csv/.trace.csv")
        ->required();

    // ---- evaluate ----
    auto* evaluate = app.add_subcommand("evaluate", "replicate split/train/classify at one "
                                                    "parameter point and write rate CSVs");
    DatasetFlags eval_ds;
    add_dataset_flags(evaluate, eval_ds);
    std::string eval_kind = "none";
    std::size_t eval_rank = 0;
    double eval_alpha = 0.0;
    double eval_beta = 0.0;
    std::optional<double> eval_g;
    std::size_t eval_reps = 1;
    std::uint64_t eval_seed = 0;
    std::size_t eval_pct = 5;
    std::size_t eval_max_iters = 500;
    double eval_rel_tol = 1e-5;
    std::size_t eval_feat_iters = 200;
    std::size_t eval_workers = 1;
    std::string eval_out;
    evaluate->add_option("--kind", eval_kind, "none|cnmf|znmf")->default_str("none");
    evaluate->add_option("--rank", eval_rank, "factorization rank q")->required();
    evaluate->add_option("--alpha", eval_alpha, "penalty weight on J1(W)");
    auto* eval_beta_opt = evaluate->add_option("--beta", eval_beta,
                                               "penalty weight on J2(H); defaults to alpha");
    evaluate->add_option("--g", eval_g, "Zellner scale (default max(n, p^2))");
    evaluate->add_option("--replications", eval_reps, "independent split/train/test runs");
    evaluate->add_option("--seed", eval_seed, "base seed");
    evaluate->add_option("--per-class-train", eval_pct, "training images per class");
    evaluate->add_option("--max-iters", eval_max_iters, "iteration cap");
    evaluate->add_option("--rel-tol", eval_rel_tol, "stopping tolerance");
    evaluate->add_option("--feature-iters", eval_feat_iters, "fixed-basis feature iterations");
    evaluate->add_option("--workers", eval_workers, "parallel cells");
    evaluate->add_option("--out", eval_out, "detail CSV path (aggregate goes to *.agg.csv)")
        ->required();

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "grid of ranks x alphas (x g) with replications");
    DatasetFlags sweep_ds;
    add_dataset_flags(sweep, sweep_ds);
    std::string sweep_kind = "none";
    std::string sweep_ranks;
    std::string sweep_alphas;
    std::string sweep_regime = "equal";
    std::string sweep_g;
    std::size_t sweep_reps = 1;
    std::uint64_t sweep_seed = 0;
    std::size_t sweep_pct = 5;
    std::size_t sweep_max_iters = 500;
    double sweep_rel_tol = 1e-5;
    std::size_t sweep_feat_iters = 200;
    std::size_t sweep_workers = 1;
    std::string sweep_out;
    sweep->add_option("--kind", sweep_kind, "none|cnmf|znmf")->default_str("none");
    sweep->add_option("--ranks", sweep_ranks, "comma list of ranks, e.g. 16,25,36")->required();
    sweep->add_option("--alphas", sweep_alphas,
                      "comma list of alphas; items may be start:stop:step ranges")
        ->required();
    sweep->add_option("--regime", sweep_regime, "equal (beta=alpha) | complement (beta=1-alpha)");
    sweep->add_option("--g", sweep_g, "comma list / start:stop:step of Zellner scales");
    sweep->add_option("--replications", sweep_reps, "replications per cell");
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--per-class-train", sweep_pct, "training images per class");
    sweep->add_option("--max-iters", sweep_max_iters, "iteration cap");
    sweep->add_option("--rel-tol", sweep_rel_tol, "stopping tolerance");
    sweep->add_option("--feature-iters", sweep_feat_iters, "fixed-basis feature iterations");
    sweep->add_option("--workers", sweep_workers, "parallel cells");
    sweep->add_option("--out", sweep_out, "detail CSV path (aggregate goes to *.agg.csv)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (inspect->parsed()) {
            const LabeledDataset ds = load_dataset(inspect_ds);
            std::map<int, std::size_t> counts;
            for (int label : ds.labels) ++counts[label];
            std::cout << "p=" << ds.x.rows() << " n=" << ds.x.cols()
                      << " classes=" << counts.size() << "\n";
            std::cout << "image=" << ds.image_height << "x" << ds.image_width << "\n";
            std::cout << "per-class:";
            for (const auto& [label, count] : counts) std::cout << " " << label << ":" << count;
            std::cout << "\n";
            std::cout << "range=[" << format_number(min_entry(ds.x)) << ","
                      << format_number(max_entry(ds.x)) << "]\n";
            return 0;
        }

        if (factorize->parsed()) {
            const LabeledDataset ds = load_dataset(fact_ds);
            FactorizationConfig config;
            config.kind = penalty_kind_from_name(fact_kind);
            config.rank_q = fact_rank;
            config.params.alpha = fact_alpha;
            config.params.beta = fact_beta;
            config.g_override = fact_g;
            config.max_iters = fact_max_iters;
            config.rel_tol = fact_rel_tol;
            config.seed = fact_seed;
            if (fact_g && config.kind != PenaltyKind::Zellner) {
                throw std::invalid_argument("--g only applies to --kind znmf");
            }
            const FactorizationResult result = nmfz::run(ds.x, config);

            std::ostringstream inv;
            inv << "invocation: factorize " << dataset_echo(fact_ds) << " --kind " << fact_kind
                << " --rank " << fact_rank << " --alpha " << format_number(fact_alpha)
                << " --beta " << format_number(fact_beta);
            if (fact_g) inv << " --g " << format_number(*fact_g);
            inv << " --max-iters " << fact_max_iters << " --rel-tol "
                << format_number(fact_rel_tol) << " --seed " << fact_seed;
            std::vector<std::string> comments{inv.str()};
            if (config.kind == PenaltyKind::Zellner) {
                comments.push_back("g: " + format_number(result.g));
            }

            write_matrix_csv(result.w, fact_out + ".w.csv", comments);
            write_matrix_csv(result.h, fact_out + ".h.csv", comments);
            std::ostringstream trace;
            for (const std::string& c : comments) trace << "# " << c << "\n";
            trace << "iteration,objective\n";
            for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
                trace << i + 1 << ',' << format_number(result.objective_trace[i]) << '\n';
            }
            write_text_file(fact_out + ".trace.csv", trace.str());

            if (config.kind == PenaltyKind::Zellner) {
                std::cout << "g=" << format_number(result.g) << "\n";
            }
            std::cout << "iterations=" << result.iterations
                      << " converged=" << (result.converged ? "true" : "false")
                      << " final_objective=" << format_number(result.objective_trace.back())
                      << "\n";
            return 0;
        }

        if (evaluate->parsed()) {
            const LabeledDataset ds = load_dataset(eval_ds);
            const PenaltyKind kind = penalty_kind_from_name(eval_kind);
            if (eval_g && kind != PenaltyKind::Zellner) {
                throw std::invalid_argument("--g only applies to --kind znmf");
            }
            if (!eval_beta_opt->count()) eval_beta = eval_alpha;

            std::vector<RunDescriptor> descriptors;
            descriptors.reserve(eval_reps);
            for (std::size_t rep = 0; rep < eval_reps; ++rep) {
                RunDescriptor d;
                d.kind = kind;
                d.q = eval_rank;
                d.alpha = eval_alpha;
                d.beta = eval_beta;
                d.g = eval_g;
                d.replication = rep;
                d.seed = descriptor_seed(eval_seed, kind, eval_rank, eval_alpha, eval_beta,
                                         eval_g, rep);
                d.per_class_train = eval_pct;
                d.max_iters = eval_max_iters;
                d.rel_tol = eval_rel_tol;
                d.feature_iters = eval_feat_iters;
                descriptors.push_back(d);
            }
            const RecognitionReport report = run_cells(ds, descriptors, eval_reps, eval_workers);

            std::ostringstream inv;
            inv << "invocation: evaluate " << dataset_echo(eval_ds) << " --kind " << eval_kind
                << " --rank " << eval_rank << " --alpha " << format_number(eval_alpha)
                << " --beta " << format_number(eval_beta);
            if (eval_g) inv << " --g " << format_number(*eval_g);
            inv << " --replications " << eval_reps << " --seed " << eval_seed
                << " --per-class-train " << eval_pct << " --max-iters " << eval_max_iters
                << " --rel-tol " << format_number(eval_rel_tol) << " --feature-iters "
                << eval_feat_iters;
            write_csv(report, eval_out, aggregate_path(eval_out), {inv.str()});

            std::cout << "cells=" << report.rows.size()
                      << " mean_rate=" << format_fixed(report.aggregates.front().mean_rate, 6)
                      << "\n";
            return 0;
        }

        if (sweep->parsed()) {
            const LabeledDataset ds = load_dataset(sweep_ds);
            SweepConfig config;
            config.kind = penalty_kind_from_name(sweep_kind);
            config.ranks = parse_rank_list(sweep_ranks);
            config.regime = regime_from_name(sweep_regime);
            config.alpha_values = parse_value_list(sweep_alphas);
            if (!sweep_g.empty()) {
                if (config.kind != PenaltyKind::Zellner) {
                    throw std::invalid_argument("--g only applies to --kind znmf");
                }
                config.g_values = parse_value_list(sweep_g);
            }
            config.replications = sweep_reps;
            config.per_class_train = sweep_pct;
            config.base_seed = sweep_seed;
            config.max_iters = sweep_max_iters;
            config.rel_tol = sweep_rel_tol;
            config.feature_iters = sweep_feat_iters;
            const RecognitionReport report = run_sweep(ds, config, sweep_workers);

            std::ostringstream inv;
            inv << "invocation: sweep " << dataset_echo(sweep_ds) << " --kind " << sweep_kind
                << " --ranks " << sweep_ranks << " --alphas " << sweep_alphas << " --regime "
                << sweep_regime;
            if (!sweep_g.empty()) inv << " --g " << sweep_g;
            inv << " --replications " << sweep_reps << " --seed " << sweep_seed
                << " --per-class-train " << sweep_pct << " --max-iters " << sweep_max_iters
                << " --rel-tol " << format_number(sweep_rel_tol) << " --feature-iters "
                << sweep_feat_iters;
            write_csv(report, sweep_out, aggregate_path(sweep_out), {inv.str()});

            std::cout << "cells=" << report.rows.size()
                      << " aggregates=" << report.aggregates.size() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace nmfz::cli
