#include "proxnas/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "proxnas/rng.hpp"
#include "proxnas/solvers.hpp"
#include "proxnas/textio.hpp"

namespace proxnas {

namespace {

constexpr std::uint64_t kSplitStream = 0x5917;

const std::vector<std::string> kOps4 = {"shrink", "relu", "gelu", "identity"};
const std::vector<std::string> kOps8 = {"shrink",  "relu",       "gelu",      "identity",
                                        "tanh",    "sigmoid",    "logsigmoid", "tanhshrink"};
const std::vector<std::string> kOpsSignedRelu = {"relu", "gelu", "identity", "tanh"};
const std::vector<std::string> kOpsSignedElu = {"elu", "gelu", "identity", "tanh"};

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sparse: return "sparse";
        case ExperimentKind::SearchSpace8: return "search-space-8";
        case ExperimentKind::Looped: return "looped";
        case ExperimentKind::Planted: return "planted";
        case ExperimentKind::SignedSparse: return "signed";
    }
    throw ContractViolation("experiment_kind_name: unknown kind");
}

ExperimentKind experiment_kind_from_name(std::string_view name) {
    if (name == "sparse") return ExperimentKind::Sparse;
    if (name == "search-space-8") return ExperimentKind::SearchSpace8;
    if (name == "looped") return ExperimentKind::Looped;
    if (name == "planted") return ExperimentKind::Planted;
    if (name == "signed") return ExperimentKind::SignedSparse;
    throw ContractViolation("unknown experiment kind '" + std::string(name) + "'");
}

std::vector<std::string> default_ops_for(ExperimentKind kind, std::string_view variant) {
    switch (kind) {
        case ExperimentKind::Sparse:
        case ExperimentKind::Looped: return kOps4;
        case ExperimentKind::SearchSpace8:
        case ExperimentKind::Planted: return kOps8;
        case ExperimentKind::SignedSparse:
            return variant == "elu" ? kOpsSignedElu : kOpsSignedRelu;
    }
    throw ContractViolation("default_ops_for: unknown kind");
}

ArchMode default_mode_for(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sparse:
        case ExperimentKind::SearchSpace8: return ArchMode::PerLayer;
        case ExperimentKind::Looped:
        case ExperimentKind::Planted:
        case ExperimentKind::SignedSparse: return ArchMode::Looped;
    }
    throw ContractViolation("default_mode_for: unknown kind");
}

SignMode default_sign_mode_for(ExperimentKind kind) {
    return kind == ExperimentKind::SignedSparse ? SignMode::Positive : SignMode::Signed;
}

SparseDataset build_dataset(const ExperimentConfig& cfg, double* displacement_out) {
    if (displacement_out) *displacement_out = 0.0;
    if (!cfg.dataset_dir.empty()) {
        SparseDataset ds = load_dataset(cfg.dataset_dir);
        if (cfg.kind == ExperimentKind::Planted && ds.provenance != Provenance::Planted)
            throw ContractViolation("planted experiment requires a planted dataset, got '" +
                                    cfg.dataset_dir + "'");
        return ds;
    }
    if (cfg.kind == ExperimentKind::Planted) {
        // The planting step size matches the model's gradient step (1/c); a
        // planted shrink uses the model's own threshold.
        if (cfg.planted_op == "shrink") {
            SparseDataset base = make_sparse_dataset(cfg.data_seed, cfg.m, cfg.n, cfg.s,
                                                     cfg.samples, cfg.sign_mode, cfg.scale);
            const double lambda = cfg.lambda_override.value_or(0.01 / base.dict.c);
            PlantResult planted = plant_targets(base.dict, base.x,
                                                ActivationKind::shrink(lambda), cfg.plant_iters);
            if (displacement_out) *displacement_out = planted.max_displacement;
            base.z = std::move(planted.z);
            base.provenance = Provenance::Planted;
            base.planted_kind = "shrink";
            base.planted_iters = cfg.plant_iters;
            base.planted_eta = 1.0 / base.dict.c;
            return base;
        }
        return make_planted_dataset(cfg.data_seed, cfg.m, cfg.n, cfg.s, cfg.samples,
                                    cfg.sign_mode, cfg.scale, op_from_name(cfg.planted_op, 0.0),
                                    cfg.plant_iters, displacement_out);
    }
    return make_sparse_dataset(cfg.data_seed, cfg.m, cfg.n, cfg.s, cfg.samples, cfg.sign_mode,
                               cfg.scale);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    ExperimentReport rep;
    SparseDataset ds = build_dataset(cfg, &rep.plant_displacement);
    auto [train_set, val_set] = split(ds, 0.8, Rng::derive(cfg.data_seed, kSplitStream));
    rep.train_size = train_set.sample_count();
    rep.val_size = val_set.sample_count();

    UnrolledModel model = make_model(ds.dict, cfg.layers, cfg.mode, cfg.ops, cfg.eta_override,
                                     cfg.lambda_override);
    rep.eta = model.eta;
    rep.lambda = model.lambda;
    rep.c = model.dict.c;
    rep.op_names = op_names_of(model.arch);

    TrainConfig tc;
    tc.lr = cfg.lr;
    tc.epochs = cfg.epochs;
    tc.batch_size = std::min(cfg.batch_size, train_set.sample_count());
    tc.seed = cfg.train_seed;
    tc.adam_beta1 = cfg.beta1;
    tc.adam_beta2 = cfg.beta2;
    tc.adam_eps = cfg.eps;

    rep.trace = train(model, train_set, val_set, tc);
    write_trace_csv(rep.trace, rep.op_names, out_dir / "trace.csv");

    rep.final_summary = summarize_weights(model.arch);
    const auto best =
        std::max_element(rep.final_summary.begin(), rep.final_summary.end()) -
        rep.final_summary.begin();
    rep.winner = rep.op_names[static_cast<std::size_t>(best)];
    if (!rep.trace.empty()) {
        rep.final_train_loss = rep.trace.back().train_loss;
        rep.final_val_loss = rep.trace.back().val_loss;
    }

    // Post-binarization evaluation and classical baselines at the same depth.
    UnrolledModel bin_model = model;
    bin_model.arch = binarize(model.arch);
    rep.binarized_val_mse = evaluate_mse(bin_model, val_set, tc.batch_size);

    rep.winner_histogram.assign(rep.op_names.size(), 0);
    for (std::size_t r = 0; r < bin_model.arch.alpha.rows(); ++r) {
        for (std::size_t j = 0; j < bin_model.arch.alpha.cols(); ++j)
            if (bin_model.arch.alpha(r, j) > 0) {
                // A looped row stands for every layer.
                rep.winner_histogram[j] +=
                    bin_model.arch.mode == ArchMode::Looped ? model.layers : 1;
            }
    }

    const double lambda_objective = 2.0 * model.lambda / model.eta;
    const Matrix ista_z =
        ista_block(val_set.x, model.dict, lambda_objective, model.eta, model.layers);
    const Matrix fista_z =
        fista_block(val_set.x, model.dict, lambda_objective, model.eta, model.layers);
    rep.ista_val_mse = mse_block(ista_z, val_set.z);
    rep.fista_val_mse = mse_block(fista_z, val_set.z);

    save_checkpoint(model, out_dir / "checkpoint",
                    cfg.dataset_dir.empty() ? "generated:data_seed=" + fmt_u64(cfg.data_seed)
                                            : cfg.dataset_dir);

    // Dataset manifest (or reference) for the run directory.
    KvPairs manifest{
        {"seed", fmt_u64(ds.seed)},
        {"m", fmt_u64(ds.dict.signal_dim())},
        {"n", fmt_u64(ds.dict.code_dim())},
        {"s", fmt_u64(ds.s)},
        {"N", fmt_u64(ds.sample_count())},
        {"sign_mode", sign_mode_name(ds.sign_mode)},
        {"scale", fmt_double(ds.dict.scale)},
        {"provenance", ds.provenance == Provenance::ExactSparse ? "exact-sparse" : "planted"},
        {"kind", ds.planted_kind.empty() ? "none" : ds.planted_kind},
        {"iters", fmt_u64(ds.planted_iters)},
        {"eta", fmt_double(ds.planted_eta)},
    };
    if (!cfg.dataset_dir.empty()) manifest.emplace_back("dataset_dir", cfg.dataset_dir);
    write_kv_file(out_dir / "dataset.manifest", manifest);

    KvPairs report_kv{
        {"kind", experiment_kind_name(cfg.kind)},
        {"mode", arch_mode_name(cfg.mode)},
        {"K", fmt_u64(cfg.layers)},
        {"eta", fmt_double(rep.eta)},
        {"lambda", fmt_double(rep.lambda)},
        {"c", fmt_double(rep.c)},
        {"train_size", fmt_u64(rep.train_size)},
        {"val_size", fmt_u64(rep.val_size)},
        {"epochs", fmt_u64(cfg.epochs)},
        {"batch_size", fmt_u64(tc.batch_size)},
        {"final_train_loss", fmt_double(rep.final_train_loss)},
        {"final_val_loss", fmt_double(rep.final_val_loss)},
        {"winner", rep.winner},
        {"binarized_val_mse", fmt_double(rep.binarized_val_mse)},
        {"ista_val_mse", fmt_double(rep.ista_val_mse)},
        {"fista_val_mse", fmt_double(rep.fista_val_mse)},
    };
    for (std::size_t j = 0; j < rep.op_names.size(); ++j)
        report_kv.emplace_back("final_weight_" + rep.op_names[j],
                               fmt_double(rep.final_summary[j]));
    for (std::size_t j = 0; j < rep.op_names.size(); ++j)
        report_kv.emplace_back("layers_won_" + rep.op_names[j],
                               fmt_u64(rep.winner_histogram[j]));
    if (cfg.kind == ExperimentKind::Planted) {
        report_kv.emplace_back("planted_op", cfg.planted_op);
        report_kv.emplace_back("plant_iters", fmt_u64(cfg.plant_iters));
        report_kv.emplace_back("plant_displacement", fmt_double(rep.plant_displacement));
    }
    write_kv_file(out_dir / "report.txt", report_kv);

    return rep;
}

}  // namespace proxnas
