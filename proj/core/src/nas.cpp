#include "proxnas/nas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "proxnas/adam.hpp"
#include "proxnas/rng.hpp"
#include "proxnas/textio.hpp"

namespace proxnas {

namespace {

void check_dataset(const UnrolledModel& model, const SparseDataset& ds, const char* which) {
    if (ds.dict.w.rows() != model.dict.w.rows() || ds.dict.w.cols() != model.dict.w.cols() ||
        !(ds.dict.w == model.dict.w))
        throw ContractViolation(std::string("train: ") + which +
                                " dataset dictionary does not match the model's");
    if (ds.sample_count() == 0)
        throw ContractViolation(std::string("train: ") + which + " dataset is empty");
}

double block_loss_sum(const UnrolledModel& model, const Matrix& x, const Matrix& t,
                      ForwardCache& cache) {
    forward(model, x, cache);
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = cache.output.data()[i] - t.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(t.rows());  // sum over samples of per-sample MSE
}

// Mean per-sample MSE over the whole set, evaluated in blocks.
double dataset_loss(const UnrolledModel& model, const SparseDataset& ds, std::size_t block,
                    ForwardCache& cache) {
    const std::size_t total = ds.sample_count();
    double acc = 0.0;
    std::vector<std::size_t> idx(block);
    for (std::size_t start = 0; start < total; start += block) {
        const std::size_t count = std::min(block, total - start);
        idx.resize(count);
        std::iota(idx.begin(), idx.end(), start);
        const Matrix xb = gather_columns(ds.x, idx);
        const Matrix tb = gather_columns(ds.z, idx);
        acc += block_loss_sum(model, xb, tb, cache);
    }
    return acc / static_cast<double>(total);
}

}  // namespace

std::vector<double> summarize_weights(const ArchParams& arch) {
    const std::size_t rows = arch.alpha.rows();
    const std::size_t j_ops = arch.alpha.cols();
    std::vector<double> summary(j_ops, 0.0);
    std::vector<double> p(j_ops);
    for (std::size_t r = 0; r < rows; ++r) {
        softmax_into(arch.alpha.row(r), p);
        for (std::size_t j = 0; j < j_ops; ++j) summary[j] += p[j];
    }
    for (auto& v : summary) v /= static_cast<double>(rows);
    return summary;
}

std::vector<std::pair<std::string, double>> summarize_weights_named(const ArchParams& arch) {
    const auto values = summarize_weights(arch);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(values.size());
    for (std::size_t j = 0; j < values.size(); ++j)
        out.emplace_back(op_name(arch.ops[j]), values[j]);
    return out;
}

std::vector<TraceRecord> train(UnrolledModel& model, const SparseDataset& train_set,
                               const SparseDataset& val_set, const TrainConfig& cfg) {
    check_dataset(model, train_set, "train");
    check_dataset(model, val_set, "validation");
    if (!(cfg.lr >= 0.0)) throw ContractViolation("train: requires lr >= 0");
    if (cfg.batch_size < 1 || cfg.batch_size > train_set.sample_count())
        throw ContractViolation("train: batch_size must be in [1, train set size]");

    std::vector<TraceRecord> trace;
    if (cfg.epochs == 0) return trace;

    const std::size_t total = train_set.sample_count();
    AdamState adam = AdamState::for_size(model.arch.alpha.size(), cfg.adam_beta1, cfg.adam_beta2,
                                         cfg.adam_eps);
    ForwardCache cache;
    BackwardScratch scratch;
    Matrix grad;

    auto record = [&](std::size_t epoch, double train_loss) {
        TraceRecord rec;
        rec.epoch = epoch;
        rec.summary = summarize_weights(model.arch);
        rec.train_loss = train_loss;
        rec.val_loss = dataset_loss(model, val_set, cfg.batch_size, cache);
        trace.push_back(std::move(rec));
    };

    // Epoch 0: the untouched initialization.
    record(0, dataset_loss(model, train_set, cfg.batch_size, cache));

    Rng shuffle_rng(Rng::derive(cfg.seed, 0x5u));
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> batch_idx;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = total - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(shuffle_rng.below(i + 1));
            std::swap(order[i], order[j]);
        }

        double epoch_loss_sum = 0.0;
        for (std::size_t start = 0; start < total; start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, total - start);
            batch_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(start + count));
            const Matrix xb = gather_columns(train_set.x, batch_idx);
            const Matrix tb = gather_columns(train_set.z, batch_idx);

            forward(model, xb, cache);
            double batch_sq = 0.0;
            for (std::size_t i = 0; i < tb.size(); ++i) {
                const double d = cache.output.data()[i] - tb.data()[i];
                batch_sq += d * d;
            }
            const double batch_loss = batch_sq / static_cast<double>(tb.size());
            if (!std::isfinite(batch_loss))
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(start / cfg.batch_size));
            epoch_loss_sum += batch_loss * static_cast<double>(count);

            backward(model, cache, tb, grad, scratch);
            if (cfg.lr > 0.0) adam_update(adam, model.arch.alpha.data(), grad.data(), cfg.lr);
        }

        record(epoch, epoch_loss_sum / static_cast<double>(total));
    }
    return trace;
}

double evaluate_mse(const UnrolledModel& model, const SparseDataset& ds, std::size_t block_size) {
    ForwardCache cache;
    return dataset_loss(model, ds, block_size, cache);
}

void write_trace_csv(const std::vector<TraceRecord>& trace,
                     const std::vector<std::string>& op_names,
                     const std::filesystem::path& path) {
    std::ostringstream os;
    os << "epoch,train_loss,val_loss";
    for (const auto& name : op_names) os << ',' << name;
    os << '\n';
    for (const auto& rec : trace) {
        if (rec.summary.size() != op_names.size())
            throw ContractViolation("write_trace_csv: summary width does not match op names");
        os << rec.epoch << ',' << fmt_double(rec.train_loss) << ',' << fmt_double(rec.val_loss);
        for (double v : rec.summary) os << ',' << fmt_double(v);
        os << '\n';
    }
    write_text_file(path, os.str());
}

std::pair<std::vector<TraceRecord>, std::vector<std::string>> read_trace_csv(
    const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    auto lines = split(text, '\n');
    if (lines.empty()) throw IoError(path.string() + ": empty trace");
    auto header = split(lines[0], ',');
    if (header.size() < 4 || header[0] != "epoch" || header[1] != "train_loss" ||
        header[2] != "val_loss")
        throw IoError(path.string() + ": unexpected trace header");
    std::vector<std::string> op_names(header.begin() + 3, header.end());

    std::vector<TraceRecord> trace;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        auto cells = split(lines[ln], ',');
        if (cells.size() != header.size())
            throw IoError(path.string() + ":" + std::to_string(ln + 1) + ": wrong column count");
        bool ok = false;
        TraceRecord rec;
        rec.epoch = static_cast<std::size_t>(parse_u64(cells[0], ok));
        if (!ok) throw IoError(path.string() + ":" + std::to_string(ln + 1) + ": bad epoch");
        rec.train_loss = parse_double(cells[1], ok);
        if (!ok) throw IoError(path.string() + ":" + std::to_string(ln + 1) + ": bad train_loss");
        rec.val_loss = parse_double(cells[2], ok);
        if (!ok) throw IoError(path.string() + ":" + std::to_string(ln + 1) + ": bad val_loss");
        rec.summary.resize(op_names.size());
        for (std::size_t j = 0; j < op_names.size(); ++j) {
            rec.summary[j] = parse_double(cells[3 + j], ok);
            if (!ok)
                throw IoError(path.string() + ":" + std::to_string(ln + 1) + ": bad weight value");
        }
        trace.push_back(std::move(rec));
    }
    return {std::move(trace), std::move(op_names)};
}

}  // namespace proxnas
