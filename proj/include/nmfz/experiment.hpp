#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nmfz/dataset.hpp"
#include "nmfz/objective.hpp"

namespace nmfz {

/// The two couplings that collapse the (alpha, beta) plane to one axis.
enum class AlphaBetaRegime { Equal, Complement };

const char* regime_name(AlphaBetaRegime regime);
AlphaBetaRegime regime_from_name(const std::string& name);

struct SweepConfig {
    PenaltyKind kind = PenaltyKind::None;
    std::vector<std::size_t> ranks;
    AlphaBetaRegime regime = AlphaBetaRegime::Equal;
    std::vector<double> alpha_values;
    /// Zellner only; empty means the benchmark-prior default max(n, p^2).
    std::vector<double> g_values;
    std::size_t replications = 1;
    std::size_t per_class_train = 5;
    std::uint64_t base_seed = 0;
    std::size_t max_iters = 500;
    double rel_tol = 1e-5;
    std::size_t feature_iters = 200;
    double guard_eps = 1e-12;
};

/// One factorize-train/classify-test execution: everything run_cell needs.
struct RunDescriptor {
    PenaltyKind kind = PenaltyKind::None;
    std::size_t q = 2;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> g; // empty: non-Zellner, or Zellner default
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    std::size_t per_class_train = 5;
    std::size_t max_iters = 500;
    double rel_tol = 1e-5;
    std::size_t feature_iters = 200;
    double guard_eps = 1e-12;
};

std::string describe(const RunDescriptor& d);

struct ReportRow {
    PenaltyKind kind;
    std::size_t q;
    double alpha;
    double beta;
    std::optional<double> g;
    std::size_t replication;
    std::uint64_t seed;
    double rate;
};

struct AggregateRow {
    PenaltyKind kind;
    std::size_t q;
    double alpha;
    double beta;
    std::optional<double> g;
    double mean_rate;
    double std_rate; // sample standard deviation; 0 for a single replication
    std::size_t n;
};

struct RecognitionReport {
    std::vector<ReportRow> rows;
    std::vector<AggregateRow> aggregates;
};

/// Derives the per-run seed from the base seed and the cell's parameter
/// values plus the replication index. Hashing values rather than grid
/// positions keeps every cell's seed independent of what else the grid
/// contains.
std::uint64_t descriptor_seed(std::uint64_t base_seed, PenaltyKind kind, std::size_t q,
                              double alpha, double beta, std::optional<double> g,
                              std::size_t replication);

/// Cartesian product ranks x alpha_values x g_values x replications, with
/// beta derived from alpha by the regime. Descriptors come out in grid
/// order: rank-major, then alpha, then g, then replication.
std::vector<RunDescriptor> expand_grid(const SweepConfig& config);

/// split -> factorize train columns -> extract test features against the
/// trained basis -> 1-NN against the training coefficients -> rate.
double run_cell(const LabeledDataset& ds, const RunDescriptor& d);

/// Executes the given descriptors (cells are independent; `workers` > 1
/// fans them out across threads) and aggregates mean/std per parameter
/// cell; each cell's `replications` descriptors must be adjacent. Report
/// order follows descriptor order regardless of execution order.
RecognitionReport run_cells(const LabeledDataset& ds,
                            const std::vector<RunDescriptor>& descriptors,
                            std::size_t replications, std::size_t workers = 1);

/// expand_grid + run_cells.
RecognitionReport run_sweep(const LabeledDataset& ds, const SweepConfig& config,
                            std::size_t workers = 1);

/// Detail rows to `detail_path`, aggregates to `aggregate_path`. Rates are
/// printed with 6 decimals; an absent g becomes an empty field. The comment
/// lines are echoed at the top of both files prefixed with "# ".
void write_csv(const RecognitionReport& report, const std::filesystem::path& detail_path,
               const std::filesystem::path& aggregate_path,
               const std::vector<std::string>& comments = {});

} // namespace nmfz
