#include "proxnas/activations.hpp"

#include <cmath>

namespace proxnas {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)

inline double shrink_val(double v, double lambda) {
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
}

inline double normal_cdf(double v) { return 0.5 * (1.0 + std::erf(v * M_SQRT1_2)); }

inline double sigmoid_val(double v) {
    if (v >= 0.0) {
        return 1.0 / (1.0 + std::exp(-v));
    }
    const double t = std::exp(v);
    return t / (1.0 + t);
}

inline double log_sigmoid_val(double v) {
    // -log(1 + e^-v), split to keep the exponent argument non-positive.
    if (v >= 0.0) return -std::log1p(std::exp(-v));
    return v - std::log1p(std::exp(v));
}

}  // namespace

std::string op_name(const ActivationKind& kind) {
    switch (kind.tag) {
        case OpTag::Shrink: return "shrink";
        case OpTag::Relu: return "relu";
        case OpTag::Gelu: return "gelu";
        case OpTag::Identity: return "identity";
        case OpTag::Tanh: return "tanh";
        case OpTag::Sigmoid: return "sigmoid";
        case OpTag::LogSigmoid: return "logsigmoid";
        case OpTag::TanhShrink: return "tanhshrink";
        case OpTag::Elu: return "elu";
    }
    throw ContractViolation("op_name: unknown tag");
}

bool is_op_name(std::string_view name) {
    return name == "shrink" || name == "relu" || name == "gelu" || name == "identity" ||
           name == "tanh" || name == "sigmoid" || name == "logsigmoid" ||
           name == "tanhshrink" || name == "elu";
}

ActivationKind op_from_name(std::string_view name, double shrink_lambda, double elu_a) {
    if (name == "shrink") return ActivationKind::shrink(shrink_lambda);
    if (name == "relu") return ActivationKind::relu();
    if (name == "gelu") return ActivationKind::gelu();
    if (name == "identity") return ActivationKind::identity();
    if (name == "tanh") return ActivationKind::tanh();
    if (name == "sigmoid") return ActivationKind::sigmoid();
    if (name == "logsigmoid") return ActivationKind::log_sigmoid();
    if (name == "tanhshrink") return ActivationKind::tanh_shrink();
    if (name == "elu") return ActivationKind::elu(elu_a);
    throw ContractViolation("unknown operator name '" + std::string(name) + "'");
}

double act(const ActivationKind& kind, double v) {
    switch (kind.tag) {
        case OpTag::Shrink: return shrink_val(v, kind.param);
        case OpTag::Relu: return v > 0.0 ? v : 0.0;
        case OpTag::Gelu: return v * normal_cdf(v);
        case OpTag::Identity: return v;
        case OpTag::Tanh: return std::tanh(v);
        case OpTag::Sigmoid: return sigmoid_val(v);
        case OpTag::LogSigmoid: return log_sigmoid_val(v);
        case OpTag::TanhShrink: return v - std::tanh(v);
        case OpTag::Elu: return v > 0.0 ? v : kind.param * std::expm1(v);
    }
    throw ContractViolation("act: unknown tag");
}

double act_deriv(const ActivationKind& kind, double v) {
    switch (kind.tag) {
        case OpTag::Shrink: return std::abs(v) > kind.param ? 1.0 : 0.0;
        case OpTag::Relu: return v > 0.0 ? 1.0 : 0.0;
        case OpTag::Gelu:
            return normal_cdf(v) + v * kInvSqrt2Pi * std::exp(-0.5 * v * v);
        case OpTag::Identity: return 1.0;
        case OpTag::Tanh: {
            const double t = std::tanh(v);
            return 1.0 - t * t;
        }
        case OpTag::Sigmoid: {
            const double s = sigmoid_val(v);
            return s * (1.0 - s);
        }
        case OpTag::LogSigmoid: return sigmoid_val(-v);
        case OpTag::TanhShrink: {
            const double t = std::tanh(v);
            return t * t;
        }
        case OpTag::Elu:
            if (v > 0.0) return 1.0;
            if (v < 0.0) return kind.param * std::exp(v);
            return 0.0;
    }
    throw ContractViolation("act_deriv: unknown tag");
}

std::vector<double> op_kinks(const ActivationKind& kind) {
    switch (kind.tag) {
        case OpTag::Shrink: return {-kind.param, kind.param};
        case OpTag::Relu:
        case OpTag::Elu: return {0.0};
        default: return {};
    }
}

void apply_act(const ActivationKind& kind, const double* in, double* out, std::size_t n) {
    switch (kind.tag) {
        case OpTag::Shrink: {
            const double lambda = kind.param;
            for (std::size_t i = 0; i < n; ++i) out[i] = shrink_val(in[i], lambda);
            return;
        }
        case OpTag::Relu:
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
            return;
        case OpTag::Gelu:
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * normal_cdf(in[i]);
            return;
        case OpTag::Identity:
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i];
            return;
        case OpTag::Tanh:
            for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(in[i]);
            return;
        case OpTag::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) out[i] = sigmoid_val(in[i]);
            return;
        case OpTag::LogSigmoid:
            for (std::size_t i = 0; i < n; ++i) out[i] = log_sigmoid_val(in[i]);
            return;
        case OpTag::TanhShrink:
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i] - std::tanh(in[i]);
            return;
        case OpTag::Elu: {
            const double a = kind.param;
            for (std::size_t i = 0; i < n; ++i)
                out[i] = in[i] > 0.0 ? in[i] : a * std::expm1(in[i]);
            return;
        }
    }
    throw ContractViolation("apply_act: unknown tag");
}

void apply_act_deriv(const ActivationKind& kind, const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = act_deriv(kind, in[i]);
}

void apply_act_both(const ActivationKind& kind, const double* in, double* val, double* deriv,
                    std::size_t n) {
    switch (kind.tag) {
        case OpTag::Shrink: {
            const double lambda = kind.param;
            for (std::size_t i = 0; i < n; ++i) {
                val[i] = shrink_val(in[i], lambda);
                deriv[i] = std::abs(in[i]) > lambda ? 1.0 : 0.0;
            }
            return;
        }
        case OpTag::Relu:
            for (std::size_t i = 0; i < n; ++i) {
                const bool pos = in[i] > 0.0;
                val[i] = pos ? in[i] : 0.0;
                deriv[i] = pos ? 1.0 : 0.0;
            }
            return;
        case OpTag::Gelu:
            for (std::size_t i = 0; i < n; ++i) {
                const double v = in[i];
                const double cdf = normal_cdf(v);
                val[i] = v * cdf;
                deriv[i] = cdf + v * kInvSqrt2Pi * std::exp(-0.5 * v * v);
            }
            return;
        case OpTag::Identity:
            for (std::size_t i = 0; i < n; ++i) {
                val[i] = in[i];
                deriv[i] = 1.0;
            }
            return;
        case OpTag::Tanh:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = std::tanh(in[i]);
                val[i] = t;
                deriv[i] = 1.0 - t * t;
            }
            return;
        case OpTag::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) {
                const double s = sigmoid_val(in[i]);
                val[i] = s;
                deriv[i] = s * (1.0 - s);
            }
            return;
        case OpTag::LogSigmoid:
            for (std::size_t i = 0; i < n; ++i) {
                const double v = in[i];
                if (v >= 0.0) {
                    const double t = std::exp(-v);
                    val[i] = -std::log1p(t);
                    deriv[i] = t / (1.0 + t);
                } else {
                    const double t = std::exp(v);
                    val[i] = v - std::log1p(t);
                    deriv[i] = 1.0 / (1.0 + t);
                }
            }
            return;
        case OpTag::TanhShrink:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = std::tanh(in[i]);
                val[i] = in[i] - t;
                deriv[i] = t * t;
            }
            return;
        case OpTag::Elu: {
            const double a = kind.param;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = in[i];
                if (v > 0.0) {
                    val[i] = v;
                    deriv[i] = 1.0;
                } else {
                    const double e1 = std::expm1(v);
                    val[i] = a * e1;
                    deriv[i] = v < 0.0 ? a * (e1 + 1.0) : 0.0;
                }
            }
            return;
        }
    }
    throw ContractViolation("apply_act_both: unknown tag");
}

}  // namespace proxnas
