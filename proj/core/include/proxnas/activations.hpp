#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "proxnas/errors.hpp"

namespace proxnas {

// Candidate pointwise operators for the searchable activation slot. Each is
// a proximal-operator candidate: total, finite value and derivative for all
// finite inputs. `param` carries shrink's threshold or elu's alpha.
enum class OpTag {
    Shrink,
    Relu,
    Gelu,
    Identity,
    Tanh,
    Sigmoid,
    LogSigmoid,
    TanhShrink,
    Elu,
};

struct ActivationKind {
    OpTag tag = OpTag::Identity;
    double param = 0.0;

    static ActivationKind shrink(double lambda) {
        if (!(lambda >= 0.0)) throw ContractViolation("shrink: requires lambda >= 0");
        return {OpTag::Shrink, lambda};
    }
    static ActivationKind relu() { return {OpTag::Relu, 0.0}; }
    static ActivationKind gelu() { return {OpTag::Gelu, 0.0}; }
    static ActivationKind identity() { return {OpTag::Identity, 0.0}; }
    static ActivationKind tanh() { return {OpTag::Tanh, 0.0}; }
    static ActivationKind sigmoid() { return {OpTag::Sigmoid, 0.0}; }
    static ActivationKind log_sigmoid() { return {OpTag::LogSigmoid, 0.0}; }
    static ActivationKind tanh_shrink() { return {OpTag::TanhShrink, 0.0}; }
    static ActivationKind elu(double a = 1.0) {
        if (!(a > 0.0)) throw ContractViolation("elu: requires a > 0");
        return {OpTag::Elu, a};
    }

    friend bool operator==(const ActivationKind&, const ActivationKind&) = default;
};

// Canonical lowercase name used in config files, CSV headers and manifests.
std::string op_name(const ActivationKind& kind);
bool is_op_name(std::string_view name);
// Builds a kind from its canonical name; shrink/elu get the given parameters.
ActivationKind op_from_name(std::string_view name, double shrink_lambda, double elu_a = 1.0);

double act(const ActivationKind& kind, double v);
// Pointwise derivative with the fixed subgradient choices: shrink is 0 on
// [-lambda, lambda] inclusive; relu and elu are 0 at the origin.
double act_deriv(const ActivationKind& kind, double v);

// Input locations where the operator is not differentiable (kink points).
std::vector<double> op_kinks(const ActivationKind& kind);

// Block kernels; the per-op dispatch is hoisted out of the loop.
void apply_act(const ActivationKind& kind, const double* in, double* out, std::size_t n);
void apply_act_deriv(const ActivationKind& kind, const double* in, double* out, std::size_t n);
// Value and derivative in one pass, sharing the transcendental evaluations.
void apply_act_both(const ActivationKind& kind, const double* in, double* val, double* deriv,
                    std::size_t n);

}  // namespace proxnas
