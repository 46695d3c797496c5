#include "proxnas/unrolled.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxnas/textio.hpp"

namespace proxnas {

namespace {

void check_arch(const UnrolledModel& model, const char* who) {
    const auto& arch = model.arch;
    const std::size_t expect_rows = arch.mode == ArchMode::Looped ? 1 : model.layers;
    if (arch.ops.size() < 2)
        throw ContractViolation(std::string(who) + ": search space needs at least 2 operators");
    if (arch.alpha.rows() != expect_rows || arch.alpha.cols() != arch.ops.size())
        throw ContractViolation(std::string(who) + ": alpha shape does not match mode/layers/ops");
    if (!arch.alpha.all_finite())
        throw ContractViolation(std::string(who) + ": alpha has non-finite entries");
}

// out += weight * act(kind, in), flat arrays.
void accumulate_op(const ActivationKind& kind, const double* in, double weight, double* out,
                   std::size_t len, Vector& phi) {
    phi.resize(len);
    apply_act(kind, in, phi.data(), len);
    for (std::size_t i = 0; i < len; ++i) out[i] += weight * phi[i];
}

void check_mixture(std::span<const double> p, std::size_t op_count, const char* who) {
    if (p.size() != op_count)
        throw ContractViolation(std::string(who) + ": mixture length does not match operator count");
    double sum = 0.0;
    for (double v : p) sum += v;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractViolation(std::string(who) + ": mixture weights must sum to 1");
}

}  // namespace

std::string arch_mode_name(ArchMode mode) {
    return mode == ArchMode::Looped ? "looped" : "per-layer";
}

ArchMode arch_mode_from_name(std::string_view name) {
    if (name == "per-layer") return ArchMode::PerLayer;
    if (name == "looped") return ArchMode::Looped;
    throw ContractViolation("unknown arch mode '" + std::string(name) + "'");
}

UnrolledModel make_model(Dictionary dict, std::size_t layers, ArchMode mode,
                         std::span<const std::string> op_names, std::optional<double> eta,
                         std::optional<double> lambda) {
    if (layers < 1) throw ContractViolation("make_model: requires at least one layer");
    if (op_names.size() < 2) throw ContractViolation("make_model: requires at least two operators");
    if (!(dict.c > 0.0)) throw ContractViolation("make_model: dictionary has zero norm");

    UnrolledModel model;
    model.eta = eta.value_or(1.0 / dict.c);
    model.lambda = lambda.value_or(0.01 / dict.c);
    if (!(model.eta > 0.0)) throw ContractViolation("make_model: requires eta > 0");
    if (!(model.lambda >= 0.0)) throw ContractViolation("make_model: requires lambda >= 0");
    model.dict = std::move(dict);
    model.layers = layers;
    model.arch.mode = mode;
    model.arch.ops.reserve(op_names.size());
    for (const auto& name : op_names)
        model.arch.ops.push_back(op_from_name(name, model.lambda));
    const std::size_t rows = mode == ArchMode::Looped ? 1 : layers;
    model.arch.alpha = Matrix(rows, op_names.size(), 1.0);
    return model;
}

std::vector<std::string> op_names_of(const ArchParams& arch) {
    std::vector<std::string> names;
    names.reserve(arch.ops.size());
    for (const auto& op : arch.ops) names.push_back(op_name(op));
    return names;
}

Vector gradient_step(std::span<const double> z, std::span<const double> x,
                     const Dictionary& dict, double eta) {
    if (z.size() != dict.code_dim() || x.size() != dict.signal_dim())
        throw ContractViolation("gradient_step: vector lengths do not match dictionary");
    Vector r = matvec(dict.w, z);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
    Vector g = matvec_transposed(dict.w, r);
    Vector u(z.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = z[i] - eta * g[i];
    return u;
}

Vector mixed_activation(std::span<const double> u, std::span<const double> p,
                        std::span<const ActivationKind> ops) {
    check_mixture(p, ops.size(), "mixed_activation");
    Vector out(u.size(), 0.0);
    Vector phi;
    for (std::size_t j = 0; j < ops.size(); ++j)
        accumulate_op(ops[j], u.data(), p[j], out.data(), u.size(), phi);
    return out;
}

void forward(const UnrolledModel& model, const Matrix& x_block, ForwardCache& cache) {
    check_arch(model, "forward");
    if (x_block.rows() != model.dict.signal_dim())
        throw ContractViolation("forward: signal rows do not match dictionary");
    if (x_block.cols() == 0) throw ContractViolation("forward: empty signal block");

    const std::size_t n = model.dict.code_dim();
    const std::size_t batch = x_block.cols();
    const std::size_t k_layers = model.layers;
    const std::size_t j_ops = model.arch.op_count();
    const auto& ops = model.arch.ops;

    cache.pre_act.resize(k_layers);
    cache.mix.resize(k_layers, j_ops);
    cache.output.resize(n, batch);
    cache.output.fill(0.0);
    Matrix& z = cache.output;

    for (std::size_t k = 0; k < k_layers; ++k) {
        matmul_into(cache.r_scratch, model.dict.w, z);
        for (std::size_t i = 0; i < cache.r_scratch.size(); ++i)
            cache.r_scratch.data()[i] -= x_block.data()[i];
        matmul_transa_into(cache.g_scratch, model.dict.w, cache.r_scratch);

        Matrix& u = cache.pre_act[k];
        u.resize(n, batch);
        for (std::size_t i = 0; i < u.size(); ++i)
            u.data()[i] = z.data()[i] - model.eta * cache.g_scratch.data()[i];

        const std::size_t row = model.arch.mode == ArchMode::Looped ? 0 : k;
        softmax_into(model.arch.alpha.row(row), cache.mix.row(k));

        z.fill(0.0);
        for (std::size_t j = 0; j < j_ops; ++j)
            accumulate_op(ops[j], u.data().data(), cache.mix(k, j), z.data().data(), u.size(),
                          cache.phi_scratch);

        if (!z.all_finite())
            throw NumericError("forward: non-finite iterate at layer " + std::to_string(k + 1));
    }
}

Vector forward(const UnrolledModel& model, std::span<const double> x) {
    Matrix xb(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) xb(i, 0) = x[i];
    ForwardCache cache;
    forward(model, xb, cache);
    return get_column(cache.output, 0);
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw ContractViolation("mse_loss: length mismatch");
    if (pred.empty()) throw ContractViolation("mse_loss: empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

double mse_block(const Matrix& pred, const Matrix& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw ContractViolation("mse_block: shape mismatch");
    if (pred.size() == 0) throw ContractViolation("mse_block: empty block");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data()[i] - target.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

void backward(const UnrolledModel& model, const ForwardCache& cache, const Matrix& targets,
              Matrix& grad_alpha, BackwardScratch& scratch) {
    check_arch(model, "backward");
    const std::size_t n = model.dict.code_dim();
    const std::size_t k_layers = model.layers;
    const std::size_t j_ops = model.arch.op_count();
    if (cache.layer_count() != k_layers || cache.mix.rows() != k_layers ||
        cache.mix.cols() != j_ops || cache.output.rows() != n)
        throw ContractViolation("backward: cache does not match model");
    if (targets.rows() != n || targets.cols() != cache.output.cols())
        throw ContractViolation("backward: target shape does not match cache output");

    const std::size_t batch = cache.output.cols();
    const std::size_t len = n * batch;
    const auto& ops = model.arch.ops;

    scratch.layer_rows.resize(k_layers, j_ops);
    scratch.grad_z.resize(n, batch);
    scratch.chain.resize(n, batch);
    scratch.phi.resize(len);
    scratch.dphi.resize(len);

    // dL/dz_K for the batch-mean MSE loss.
    const double loss_scale = 2.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i)
        scratch.grad_z.data()[i] =
            loss_scale * (cache.output.data()[i] - targets.data()[i]);

    std::vector<double> dldp(j_ops);
    for (std::size_t k = k_layers; k-- > 0;) {
        const Matrix& u = cache.pre_act[k];
        const auto p = cache.mix.row(k);
        double* gz = scratch.grad_z.data().data();

        scratch.chain.fill(0.0);
        for (std::size_t j = 0; j < j_ops; ++j) {
            apply_act_both(ops[j], u.data().data(), scratch.phi.data(), scratch.dphi.data(), len);
            double acc = 0.0;
            for (std::size_t i = 0; i < len; ++i) acc += gz[i] * scratch.phi[i];
            dldp[j] = acc;
            const double pj = p[j];
            double* chain = scratch.chain.data().data();
            for (std::size_t i = 0; i < len; ++i) chain[i] += pj * scratch.dphi[i];
        }

        // Softmax Jacobian applied to dL/dp.
        double p_dot = 0.0;
        for (std::size_t j = 0; j < j_ops; ++j) p_dot += p[j] * dldp[j];
        for (std::size_t j = 0; j < j_ops; ++j)
            scratch.layer_rows(k, j) = p[j] * (dldp[j] - p_dot);

        // dL/du, then pull back through the gradient step: (I - eta W^T W).
        for (std::size_t i = 0; i < len; ++i) gz[i] *= scratch.chain.data()[i];
        matmul_into(scratch.r, model.dict.w, scratch.grad_z);
        matmul_transa_into(scratch.h, model.dict.w, scratch.r);
        for (std::size_t i = 0; i < len; ++i) gz[i] -= model.eta * scratch.h.data()[i];
    }

    if (model.arch.mode == ArchMode::Looped) {
        grad_alpha.resize(1, j_ops);
        grad_alpha.fill(0.0);
        for (std::size_t k = 0; k < k_layers; ++k)
            for (std::size_t j = 0; j < j_ops; ++j) grad_alpha(0, j) += scratch.layer_rows(k, j);
    } else {
        grad_alpha = scratch.layer_rows;
    }
}

Matrix backward(const UnrolledModel& model, const ForwardCache& cache,
                std::span<const double> target) {
    Matrix t(target.size(), 1);
    for (std::size_t i = 0; i < target.size(); ++i) t(i, 0) = target[i];
    Matrix grad;
    BackwardScratch scratch;
    backward(model, cache, t, grad, scratch);
    return grad;
}

ArchParams binarize(const ArchParams& arch) {
    ArchParams out = arch;
    for (std::size_t r = 0; r < out.alpha.rows(); ++r) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < out.alpha.cols(); ++j)
            if (out.alpha(r, j) > out.alpha(r, best)) best = j;  // ties keep the lowest index
        for (std::size_t j = 0; j < out.alpha.cols(); ++j)
            out.alpha(r, j) = (j == best) ? kBinarizeMagnitude : -kBinarizeMagnitude;
    }
    return out;
}

void save_checkpoint(const UnrolledModel& model, const std::filesystem::path& dir,
                     std::string_view dictionary_ref) {
    std::filesystem::create_directories(dir);
    std::string ops;
    for (const auto& op : model.arch.ops) {
        if (!ops.empty()) ops += ',';
        ops += op_name(op);
    }
    KvPairs kv{
        {"mode", arch_mode_name(model.arch.mode)},
        {"K", fmt_u64(model.layers)},
        {"J", fmt_u64(model.arch.op_count())},
        {"ops", ops},
        {"eta", fmt_double(model.eta)},
        {"lambda", fmt_double(model.lambda)},
        {"dictionary", std::string(dictionary_ref)},
    };
    write_kv_file(dir / "manifest", kv);
    save_matrix(model.arch.alpha, dir / "alpha.mat");
}

UnrolledModel load_checkpoint(const std::filesystem::path& dir, Dictionary dict) {
    const KvPairs kv = read_kv_file(dir / "manifest");
    auto get = [&](std::string_view key) -> const std::string& {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw IoError((dir / "manifest").string() + ": missing key '" + std::string(key) + "'");
    };
    bool ok = false;
    const auto layers = parse_u64(get("K"), ok);
    if (!ok) throw IoError(dir.string() + ": bad K");
    const double eta = parse_double(get("eta"), ok);
    if (!ok) throw IoError(dir.string() + ": bad eta");
    const double lambda = parse_double(get("lambda"), ok);
    if (!ok) throw IoError(dir.string() + ": bad lambda");

    std::vector<std::string> names = split(get("ops"), ',');
    UnrolledModel model = make_model(std::move(dict), layers, arch_mode_from_name(get("mode")),
                                     names, eta, lambda);
    model.arch.alpha = load_matrix(dir / "alpha.mat");
    check_arch(model, "load_checkpoint");
    if (model.arch.op_count() != parse_u64(get("J"), ok) || !ok)
        throw IoError(dir.string() + ": J disagrees with ops list");
    return model;
}

}  // namespace proxnas
