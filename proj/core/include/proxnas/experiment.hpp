#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "proxnas/nas.hpp"

namespace proxnas {

// The four experiment families plus the shared-cell variant:
//   sparse          exact-sparse signed data, 4-op space, per-layer cells
//   search-space-8  same data, 8-op space
//   looped          same data, one shared cell for every layer
//   planted         targets planted by a chosen operator, looped, 8-op space
//   signed          positive/negative sparse data, shrink excluded, looped
enum class ExperimentKind { Sparse, SearchSpace8, Looped, Planted, SignedSparse };

std::string experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(std::string_view name);

std::vector<std::string> default_ops_for(ExperimentKind kind, std::string_view variant);
ArchMode default_mode_for(ExperimentKind kind);
SignMode default_sign_mode_for(ExperimentKind kind);

// Fully resolved experiment description. parse_config() builds one of these
// from a flat key=value document; every field has a definite value so the
// echoed form reproduces the run exactly.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Sparse;
    // dataset
    std::size_t m = 50;
    std::size_t n = 200;
    std::size_t s = 4;
    std::size_t samples = 12500;  // key N
    SignMode sign_mode = SignMode::Signed;
    double scale = 10.0;
    std::uint64_t data_seed = 1;
    std::string dataset_dir;  // optional: load instead of generating
    // planted targets
    std::string planted_op;
    std::size_t plant_iters = 10000;
    // model
    std::size_t layers = 6000;  // key K
    ArchMode mode = ArchMode::PerLayer;
    std::vector<std::string> ops;
    std::string variant = "relu";  // signed kind: relu | elu
    std::optional<double> eta_override;     // "auto" -> 1/c
    std::optional<double> lambda_override;  // "auto" -> 0.01/c
    // training
    double lr = 0.05;
    std::size_t epochs = 2000;
    std::size_t batch_size = 128;
    std::uint64_t train_seed = 1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::string out_dir;  // optional

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ExperimentReport {
    std::vector<std::string> op_names;
    std::vector<TraceRecord> trace;
    std::vector<double> final_summary;
    std::string winner;                        // argmax of the final summary
    std::vector<std::size_t> winner_histogram; // per-layer argmax counts after binarization
    double eta = 0.0;
    double lambda = 0.0;
    double c = 0.0;
    std::size_t train_size = 0;
    std::size_t val_size = 0;
    double final_train_loss = 0.0;
    double final_val_loss = 0.0;
    double binarized_val_mse = 0.0;
    double ista_val_mse = 0.0;
    double fista_val_mse = 0.0;
    double plant_displacement = 0.0;  // planted datasets only
};

// Generates (or loads) the dataset, trains, and writes into out_dir:
// trace.csv, report.txt, dataset.manifest and checkpoint/. The SVG chart and
// config echo are the harness's job (see harness.hpp).
ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Dataset resolution used by run_experiment, exposed for tests and the CLI.
SparseDataset build_dataset(const ExperimentConfig& cfg, double* displacement_out = nullptr);

}  // namespace proxnas
