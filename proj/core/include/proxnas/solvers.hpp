#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "proxnas/datagen.hpp"
#include "proxnas/matrix.hpp"

namespace proxnas {

// ||x - W z||_2^2 + lambda * ||z||_1
double lasso_objective(std::span<const double> z, std::span<const double> x,
                       const Dictionary& dict, double lambda);

struct SolveTracePoint {
    std::size_t iter = 0;
    double objective = 0.0;
    double residual_norm = 0.0;  // ||W z - x||_2
    double l1_norm = 0.0;        // ||z||_1
};

// Per-iteration trace; records iteration 0 (z = 0), every `stride`-th
// iteration after that, and always the final one.
struct SolveTrace {
    double lambda = 0.0;  // objective weight used for the recorded points
    std::size_t stride = 1;
    std::vector<SolveTracePoint> points;
};

// Proximal-gradient iteration for the objective above, started at z = 0:
//   z <- S_thr(z - eta * W^T (W z - x)),  thr = eta * lambda / 2.
// `lambda` is the L1 weight of the objective; the shrinkage threshold is
// derived from it so that the fixed point minimizes the stated objective.
// With eta <= 1/c the objective sequence is non-increasing.
Vector ista(std::span<const double> x, const Dictionary& dict, double lambda, double eta,
            std::size_t iters, SolveTrace* trace = nullptr);

// Accelerated variant with the standard momentum sequence
//   t_1 = 1, t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2,
//   y_{k+1} = z_k + ((t_k - 1)/t_{k+1}) (z_k - z_{k-1}),
// shrinkage applied at the extrapolated point. First step equals ista's.
Vector fista(std::span<const double> x, const Dictionary& dict, double lambda, double eta,
             std::size_t iters, SolveTrace* trace = nullptr);

// Column-wise batch forms (one signal per column, no trace).
Matrix ista_block(const Matrix& x, const Dictionary& dict, double lambda, double eta,
                  std::size_t iters);
Matrix fista_block(const Matrix& x, const Dictionary& dict, double lambda, double eta,
                   std::size_t iters);

struct CdResult {
    Vector z;
    bool converged = false;
    std::size_t sweeps = 0;
};

// Independent oracle: cyclic coordinate descent on the same objective,
//   z_i <- S_{lambda/(2 ||w_i||^2)} ( w_i^T r_{-i} / ||w_i||^2 ),
// stopping when the largest coordinate change in a sweep is <= tol.
CdResult lasso_cd(std::span<const double> x, const Dictionary& dict, double lambda,
                  double tol = 1e-10, std::size_t max_sweeps = 100000,
                  SolveTrace* trace = nullptr);

}  // namespace proxnas
