#include "proxnas/adam.hpp"

#include <cmath>
#include <string>

namespace proxnas {

void adam_update(AdamState& state, std::span<double> params, std::span<const double> grads,
                 double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size())
        throw ContractViolation("adam_update: params, grads and moments must have equal length");
    if (!(lr > 0.0)) throw ContractViolation("adam_update: requires lr > 0");
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i]))
            throw NumericError("adam_update: non-finite gradient at parameter index " +
                               std::to_string(i));
    }

    state.t += 1;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

}  // namespace proxnas
