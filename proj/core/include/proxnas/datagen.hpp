#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

#include "proxnas/activations.hpp"
#include "proxnas/matrix.hpp"
#include "proxnas/rng.hpp"

namespace proxnas {

// Measurement/dictionary matrix with its squared Frobenius norm cached; the
// norm sets the model's gradient step (1/c) and shrinkage threshold (0.01/c).
struct Dictionary {
    Matrix w;             // m x n
    double c = 0.0;       // frobenius_sq(w)
    std::uint64_t seed = 0;
    double scale = 0.0;

    std::size_t signal_dim() const noexcept { return w.rows(); }
    std::size_t code_dim() const noexcept { return w.cols(); }
};

enum class SignMode { Signed, Positive, Negative };
std::string sign_mode_name(SignMode mode);
SignMode sign_mode_from_name(std::string_view name);

enum class Provenance { ExactSparse, Planted };

// Paired signals X (one per column) and target codes Z with generation
// metadata. Exact-sparse data satisfies X = W*Z with s-sparse columns of Z;
// planted data replaces Z by the fixed point of an operator iteration.
struct SparseDataset {
    Dictionary dict;
    Matrix x;  // m x N
    Matrix z;  // n x N
    std::size_t s = 0;
    SignMode sign_mode = SignMode::Signed;
    Provenance provenance = Provenance::ExactSparse;
    std::string planted_kind;       // canonical op name; empty for exact-sparse
    std::size_t planted_iters = 0;
    double planted_eta = 0.0;
    std::uint64_t seed = 0;

    std::size_t sample_count() const noexcept { return x.cols(); }
};

// Uniform [0,1) entries, unit-L2 columns, then a global scale. With the
// defaults every column norm is `scale` and c = n * scale^2.
Dictionary make_dictionary(std::uint64_t seed, std::size_t m = 50, std::size_t n = 200,
                           double scale = 10.0);

// One size-s support per column, chosen uniformly without replacement; the
// nonzero values are uniform on (-1,1) / (0,1) / (-1,0) by mode, with exact
// zeros (and the closed endpoint) rejected and redrawn. Each column draws
// from its own split of the seed, so columns are independent of ordering.
Matrix sample_codes(std::uint64_t seed, std::size_t n, std::size_t s, std::size_t count,
                    SignMode mode);

// X = W * Z, one signal per column.
Matrix synthesize(const Dictionary& dict, const Matrix& z);

struct PlantResult {
    Matrix z;                      // n x N final iterates
    double max_displacement = 0.0; // max per-column ||z_it - z_{it-1}||_inf
};

// Fixed-point iteration z <- act(z - eta * W^T (W z - x)) run for exactly
// `iters` steps per column. The final-step displacement is reported so a
// caller can judge convergence; it is not enforced.
PlantResult plant_targets(const Dictionary& dict, const Matrix& x, const ActivationKind& kind,
                          std::size_t iters = 10000, double eta = 0.0 /* 0 => 1/c */);

// Seeded random partition of the columns: train gets floor(train_frac * N).
std::pair<SparseDataset, SparseDataset> split(const SparseDataset& ds, double train_frac,
                                              std::uint64_t seed);

// Full exact-sparse generation: dictionary, codes, signals.
SparseDataset make_sparse_dataset(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t s,
                                  std::size_t count, SignMode mode, double scale = 10.0);

// Exact-sparse generation followed by operator planting; the sparse codes
// are discarded and replaced by the planted targets.
SparseDataset make_planted_dataset(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t s,
                                   std::size_t count, SignMode mode, double scale,
                                   const ActivationKind& kind, std::size_t iters,
                                   double* displacement_out = nullptr);

// Directory layout: W.mat, X.mat, Z.mat plus a flat key=value manifest
// (seed, m, n, s, N, sign_mode, scale, provenance, kind, iters, eta).
void save_dataset(const SparseDataset& ds, const std::filesystem::path& dir);
SparseDataset load_dataset(const std::filesystem::path& dir);

}  // namespace proxnas
