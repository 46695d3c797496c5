#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxnas/activations.hpp"
#include "proxnas/datagen.hpp"
#include "proxnas/matrix.hpp"

namespace proxnas {

enum class ArchMode { PerLayer, Looped };
std::string arch_mode_name(ArchMode mode);
ArchMode arch_mode_from_name(std::string_view name);

// Architecture weights for the searchable activation slot: one row of alpha
// per layer, or a single shared row in looped mode. softmax(row) gives the
// layer's mixture weights over `ops`.
struct ArchParams {
    ArchMode mode = ArchMode::PerLayer;
    std::vector<ActivationKind> ops;  // J >= 2, ordered
    Matrix alpha;                     // K x J (per-layer) or 1 x J (looped)

    std::size_t op_count() const noexcept { return ops.size(); }
};

// K iterations of: gradient step on ||W z - x||^2 (step eta, gradient taken
// as W^T(Wz - x)), then the softmax-weighted mixture of candidate operators.
// Only alpha is trainable; W, eta and lambda are fixed at construction.
struct UnrolledModel {
    Dictionary dict;
    std::size_t layers = 0;  // K
    double eta = 0.0;        // default 1/c
    double lambda = 0.0;     // shrink threshold, default 0.01/c
    ArchParams arch;
};

// Builds a model with alpha initialized to all ones (uniform mixture after
// softmax). Any "shrink" in `op_names` is bound to the model's lambda.
UnrolledModel make_model(Dictionary dict, std::size_t layers, ArchMode mode,
                         std::span<const std::string> op_names,
                         std::optional<double> eta = std::nullopt,
                         std::optional<double> lambda = std::nullopt);

std::vector<std::string> op_names_of(const ArchParams& arch);

// Reverse-mode storage for one forward pass over a block of samples
// (columns). Holds the pre-activations u_k and mixture weights p_k; the
// per-operator outputs are recomputed during backward, so memory stays
// K*(n*B + J) no matter how many operators are searched.
struct ForwardCache {
    std::vector<Matrix> pre_act;  // K entries, each n x B
    Matrix mix;                   // K x J
    Matrix output;                // n x B final codes z_K

    std::size_t layer_count() const noexcept { return pre_act.size(); }
    std::size_t batch() const noexcept { return output.cols(); }

    // scratch reused across calls
    Matrix r_scratch;   // m x B
    Matrix g_scratch;   // n x B
    Vector phi_scratch;
};

// u = z - eta * W^T (W z - x)
Vector gradient_step(std::span<const double> z, std::span<const double> x,
                     const Dictionary& dict, double eta);

// out_i = sum_j p_j * act(ops_j, u_i); p must sum to 1 within 1e-9.
Vector mixed_activation(std::span<const double> u, std::span<const double> p,
                        std::span<const ActivationKind> ops);

// Forward pass over a block of signals (one per column), z_0 = 0.
void forward(const UnrolledModel& model, const Matrix& x_block, ForwardCache& cache);
// Single-signal convenience form.
Vector forward(const UnrolledModel& model, std::span<const double> x);

// (1/n) * sum_i (pred_i - target_i)^2
double mse_loss(std::span<const double> pred, std::span<const double> target);
// Mean per-sample MSE over a block.
double mse_block(const Matrix& pred, const Matrix& target);

struct BackwardScratch {
    Matrix layer_rows;  // K x J per-layer alpha-gradient rows
    Matrix grad_z;      // n x B running dL/dz
    Matrix chain;       // n x B sum_j p_j * act'(ops_j, u)
    Matrix r;           // m x B
    Matrix h;           // n x B
    Vector phi;
    Vector dphi;
};

// Exact gradient of the (batch-mean) MSE loss against alpha, using the
// declared subgradients. In looped mode the single row receives the sum of
// the per-layer contributions (ascending layer order).
void backward(const UnrolledModel& model, const ForwardCache& cache, const Matrix& targets,
              Matrix& grad_alpha, BackwardScratch& scratch);
// Single-sample convenience form: gradient of mse_loss(z_K, target).
Matrix backward(const UnrolledModel& model, const ForwardCache& cache,
                std::span<const double> target);

// Saturates each alpha row to +/-B at the row argmax (ties to the lowest
// operator index), making every layer's mixture one-hot to 64-bit precision.
ArchParams binarize(const ArchParams& arch);
inline constexpr double kBinarizeMagnitude = 100.0;

// Checkpoint: flat manifest (mode, K, J, ops, eta, lambda, dictionary
// reference) plus alpha.mat in the matrix text format.
void save_checkpoint(const UnrolledModel& model, const std::filesystem::path& dir,
                     std::string_view dictionary_ref);
UnrolledModel load_checkpoint(const std::filesystem::path& dir, Dictionary dict);

}  // namespace proxnas
