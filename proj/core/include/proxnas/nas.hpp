#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "proxnas/datagen.hpp"
#include "proxnas/unrolled.hpp"

namespace proxnas {

struct TrainConfig {
    double lr = 0.05;
    std::size_t epochs = 2000;
    std::size_t batch_size = 128;
    std::uint64_t seed = 1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

// One trace row: normalized per-operator weight summary plus both losses.
// Epoch 0 is the pre-training state; epochs >= 1 follow each pass.
struct TraceRecord {
    std::size_t epoch = 0;
    std::vector<double> summary;  // aligned with the model's op order, sums to 1
    double train_loss = 0.0;
    double val_loss = 0.0;
};

// Per alpha row: softmax; then each operator's weight is summed across rows
// and divided by the row count. A one-row (looped) arch reduces to the
// softmax of its single row. Values lie in [0,1] and sum to 1.
std::vector<double> summarize_weights(const ArchParams& arch);
// Name/value pairs in op order, for reports.
std::vector<std::pair<std::string, double>> summarize_weights_named(const ArchParams& arch);

// Adam training of alpha on the batch-mean MSE against the target codes.
// Per epoch: seeded shuffle of the training columns, gradient averaged over
// each mini-batch (final partial batch kept), one adam step per batch.
// Validation loss is evaluated after the epoch with the current alpha.
// Deterministic for a fixed config; mutates model.arch.alpha in place.
std::vector<TraceRecord> train(UnrolledModel& model, const SparseDataset& train_set,
                               const SparseDataset& val_set, const TrainConfig& cfg);

// Mean per-sample MSE of the model's forward output against ds.z.
double evaluate_mse(const UnrolledModel& model, const SparseDataset& ds,
                    std::size_t block_size = 128);

// Trace CSV: header "epoch,train_loss,val_loss,<op1>,..." in op order.
void write_trace_csv(const std::vector<TraceRecord>& trace,
                     const std::vector<std::string>& op_names,
                     const std::filesystem::path& path);
std::pair<std::vector<TraceRecord>, std::vector<std::string>> read_trace_csv(
    const std::filesystem::path& path);

}  // namespace proxnas
