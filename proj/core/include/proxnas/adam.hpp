#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "proxnas/errors.hpp"

namespace proxnas {

// Adam with bias correction. Moments live alongside the caller's parameter
// vector; t counts completed updates.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState for_size(std::size_t n, double beta1 = 0.9, double beta2 = 0.999,
                              double eps = 1e-8) {
        AdamState s;
        s.m.assign(n, 0.0);
        s.v.assign(n, 0.0);
        s.beta1 = beta1;
        s.beta2 = beta2;
        s.eps = eps;
        return s;
    }
};

// One Adam step:
//   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
//   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void adam_update(AdamState& state, std::span<double> params, std::span<const double> grads,
                 double lr);

}  // namespace proxnas
