#include "nmfz/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nmfz/factorize.hpp"
#include "nmfz/features.hpp"
#include "nmfz/io.hpp"
#include "nmfz/rng.hpp"

namespace nmfz {

namespace {

// Phase tags keep the split, the factorization init and the feature init on
// independent streams derived from one descriptor seed.
constexpr std::uint64_t kPhaseSplit = 1;
constexpr std::uint64_t kPhaseFactorize = 2;
constexpr std::uint64_t kPhaseFeatures = 3;

std::string optional_g_str(const std::optional<double>& g) {
    return g ? format_number(*g) : std::string();
}

} // namespace

const char* regime_name(AlphaBetaRegime regime) {
    return regime == AlphaBetaRegime::Equal ? "equal" : "complement";
}

AlphaBetaRegime regime_from_name(const std::string& name) {
    if (name == "equal") return AlphaBetaRegime::Equal;
    if (name == "complement") return AlphaBetaRegime::Complement;
    throw std::invalid_argument("unknown regime '" + name + "' (expected equal|complement)");
}

std::string describe(const RunDescriptor& d) {
    std::ostringstream out;
    out << "kind=" << penalty_kind_name(d.kind) << " q=" << d.q
        << " alpha=" << format_number(d.alpha) << " beta=" << format_number(d.beta);
    if (d.g) out << " g=" << format_number(*d.g);
    out << " rep=" << d.replication << " seed=" << d.seed;
    return out.str();
}

std::uint64_t descriptor_seed(std::uint64_t base_seed, PenaltyKind kind, std::size_t q,
                              double alpha, double beta, std::optional<double> g,
                              std::size_t replication) {
    return mix_seed(base_seed, {static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(q),
                                std::bit_cast<std::uint64_t>(alpha),
                                std::bit_cast<std::uint64_t>(beta),
                                std::bit_cast<std::uint64_t>(g ? *g : 0.0),
                                static_cast<std::uint64_t>(replication)});
}

std::vector<RunDescriptor> expand_grid(const SweepConfig& config) {
    if (config.ranks.empty()) throw std::invalid_argument("expand_grid: ranks must be nonempty");
    if (config.alpha_values.empty()) {
        throw std::invalid_argument("expand_grid: alpha_values must be nonempty");
    }
    if (config.replications == 0) {
        throw std::invalid_argument("expand_grid: replications must be >= 1");
    }

    // One pass through the g axis even when it is not applicable.
    std::vector<std::optional<double>> g_axis;
    if (config.kind == PenaltyKind::Zellner && !config.g_values.empty()) {
        for (double g : config.g_values) g_axis.emplace_back(g);
    } else {
        g_axis.emplace_back(std::nullopt);
    }

    std::vector<RunDescriptor> descriptors;
    descriptors.reserve(config.ranks.size() * config.alpha_values.size() * g_axis.size() *
                        config.replications);
    for (std::size_t q : config.ranks) {
        for (double alpha : config.alpha_values) {
            const double beta =
                config.regime == AlphaBetaRegime::Equal ? alpha : 1.0 - alpha;
            for (const auto& g : g_axis) {
                for (std::size_t rep = 0; rep < config.replications; ++rep) {
                    RunDescriptor d;
                    d.kind = config.kind;
                    d.q = q;
                    d.alpha = alpha;
                    d.beta = beta;
                    d.g = g;
                    d.replication = rep;
                    d.seed = descriptor_seed(config.base_seed, config.kind, q, alpha, beta, g,
                                             rep);
                    d.per_class_train = config.per_class_train;
                    d.max_iters = config.max_iters;
                    d.rel_tol = config.rel_tol;
                    d.feature_iters = config.feature_iters;
                    d.guard_eps = config.guard_eps;
                    descriptors.push_back(d);
                }
            }
        }
    }
    return descriptors;
}

double run_cell(const LabeledDataset& ds, const RunDescriptor& d) {
    const TrainTestSplit split =
        random_split(ds, d.per_class_train, mix_seed(d.seed, {kPhaseSplit}));
    const DenseMatrix x_train = select_columns(ds.x, split.train_cols);
    const DenseMatrix x_test = select_columns(ds.x, split.test_cols);

    std::vector<int> labels_train, labels_test;
    labels_train.reserve(split.train_cols.size());
    labels_test.reserve(split.test_cols.size());
    for (std::size_t c : split.train_cols) labels_train.push_back(ds.labels[c]);
    for (std::size_t c : split.test_cols) labels_test.push_back(ds.labels[c]);

    FactorizationConfig config;
    config.kind = d.kind;
    config.rank_q = d.q;
    config.params.alpha = d.alpha;
    config.params.beta = d.beta;
    config.g_override = d.g;
    config.max_iters = d.max_iters;
    config.rel_tol = d.rel_tol;
    config.guard_eps = d.guard_eps;
    config.seed = mix_seed(d.seed, {kPhaseFactorize});
    const FactorizationResult trained = run(x_train, config);

    const DenseMatrix test_features =
        extract_features(trained.w, x_test, d.feature_iters, mix_seed(d.seed, {kPhaseFeatures}),
                         d.guard_eps);
    const std::vector<int> predicted =
        nearest_neighbor(FeatureSet{trained.h, labels_train}, test_features);
    return recognition_rate(predicted, labels_test);
}

RecognitionReport run_cells(const LabeledDataset& ds,
                            const std::vector<RunDescriptor>& descriptors,
                            std::size_t replications, std::size_t workers) {
    if (replications == 0 || descriptors.size() % replications != 0) {
        throw std::invalid_argument("run_cells: descriptor count " +
                                    std::to_string(descriptors.size()) +
                                    " is not a multiple of replications " +
                                    std::to_string(replications));
    }
    std::vector<double> rates(descriptors.size(), 0.0);

    std::mutex error_mutex;
    std::string first_error;
    auto run_one = [&](std::size_t i) {
        try {
            rates[i] = run_cell(ds, descriptors[i]);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty()) {
                first_error = "cell failed (" + describe(descriptors[i]) + "): " + e.what();
            }
        }
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < descriptors.size() && first_error.empty(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t count = std::min(workers, descriptors.size());
        pool.reserve(count);
        for (std::size_t t = 0; t < count; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= descriptors.size()) return;
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error.empty()) return;
                    }
                    run_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw std::runtime_error("run_sweep: " + first_error);

    RecognitionReport report;
    report.rows.reserve(descriptors.size());
    const std::size_t n_classes = [&] {
        std::vector<int> classes = ds.labels;
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        return classes.size();
    }();

    for (std::size_t i = 0; i < descriptors.size(); ++i) {
        const RunDescriptor& d = descriptors[i];
        ReportRow row;
        row.kind = d.kind;
        row.q = d.q;
        row.alpha = d.alpha;
        row.beta = d.beta;
        // Report the scale actually used: the benchmark-prior default is
        // resolved against the training-matrix shape.
        row.g = d.kind == PenaltyKind::Zellner
                    ? std::optional<double>(
                          d.g ? *d.g : default_g(d.per_class_train * n_classes, ds.x.rows()))
                    : std::nullopt;
        row.replication = d.replication;
        row.seed = d.seed;
        row.rate = rates[i];
        report.rows.push_back(row);
    }

    // Replications of one cell are adjacent.
    for (std::size_t start = 0; start < report.rows.size(); start += replications) {
        const ReportRow& first = report.rows[start];
        double sum = 0.0;
        for (std::size_t r = 0; r < replications; ++r) sum += report.rows[start + r].rate;
        const double mean = sum / static_cast<double>(replications);
        double var = 0.0;
        for (std::size_t r = 0; r < replications; ++r) {
            const double dev = report.rows[start + r].rate - mean;
            var += dev * dev;
        }
        AggregateRow agg;
        agg.kind = first.kind;
        agg.q = first.q;
        agg.alpha = first.alpha;
        agg.beta = first.beta;
        agg.g = first.g;
        agg.mean_rate = mean;
        agg.std_rate =
            replications > 1 ? std::sqrt(var / static_cast<double>(replications - 1)) : 0.0;
        agg.n = replications;
        report.aggregates.push_back(agg);
    }
    return report;
}

RecognitionReport run_sweep(const LabeledDataset& ds, const SweepConfig& config,
                            std::size_t workers) {
    return run_cells(ds, expand_grid(config), config.replications, workers);
}

void write_csv(const RecognitionReport& report, const std::filesystem::path& detail_path,
               const std::filesystem::path& aggregate_path,
               const std::vector<std::string>& comments) {
    std::ostringstream detail;
    for (const std::string& c : comments) detail << "# " << c << "\n";
    detail << "kind,q,alpha,beta,g,replication,seed,rate\n";
    for (const ReportRow& row : report.rows) {
        detail << penalty_kind_name(row.kind) << ',' << row.q << ','
               << format_number(row.alpha) << ',' << format_number(row.beta) << ','
               << optional_g_str(row.g) << ',' << row.replication << ',' << row.seed << ','
               << format_fixed(row.rate, 6) << '\n';
    }
    write_text_file(detail_path, detail.str());

    std::ostringstream agg;
    for (const std::string& c : comments) agg << "# " << c << "\n";
    agg << "kind,q,alpha,beta,g,mean_rate,std_rate,n\n";
    for (const AggregateRow& row : report.aggregates) {
        agg << penalty_kind_name(row.kind) << ',' << row.q << ',' << format_number(row.alpha)
            << ',' << format_number(row.beta) << ',' << optional_g_str(row.g) << ','
            << format_fixed(row.mean_rate, 6) << ',' << format_fixed(row.std_rate, 6) << ','
            << row.n << '\n';
    }
    write_text_file(aggregate_path, agg.str());
}

} // namespace nmfz
