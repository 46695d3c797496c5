#include "proxnas/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxnas/textio.hpp"

namespace proxnas {

namespace {

// Stream ids for deriving independent child seeds from a dataset seed.
constexpr std::uint64_t kDictStream = 0xD1C7;
constexpr std::uint64_t kCodesStream = 0xC0DE;

}  // namespace

std::string sign_mode_name(SignMode mode) {
    switch (mode) {
        case SignMode::Signed: return "signed";
        case SignMode::Positive: return "positive";
        case SignMode::Negative: return "negative";
    }
    throw ContractViolation("sign_mode_name: unknown mode");
}

SignMode sign_mode_from_name(std::string_view name) {
    if (name == "signed") return SignMode::Signed;
    if (name == "positive") return SignMode::Positive;
    if (name == "negative") return SignMode::Negative;
    throw ContractViolation("unknown sign mode '" + std::string(name) + "'");
}

Dictionary make_dictionary(std::uint64_t seed, std::size_t m, std::size_t n, double scale) {
    if (m < 1 || n < 1) throw ContractViolation("make_dictionary: requires m, n >= 1");
    if (!(scale > 0.0)) throw ContractViolation("make_dictionary: requires scale > 0");

    Matrix w(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        Rng col_rng(Rng::derive(seed, kDictStream + j));
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double v = col_rng.uniform(0.0, 1.0);
                w(i, j) = v;
                norm_sq += v * v;
            }
        } while (norm_sq == 0.0);  // all-zero column: redraw from the same stream
        const double inv = scale / std::sqrt(norm_sq);
        for (std::size_t i = 0; i < m; ++i) w(i, j) *= inv;
    }

    Dictionary dict;
    dict.w = std::move(w);
    dict.c = frobenius_sq(dict.w);
    dict.seed = seed;
    dict.scale = scale;
    return dict;
}

Matrix sample_codes(std::uint64_t seed, std::size_t n, std::size_t s, std::size_t count,
                    SignMode mode) {
    if (s < 1 || s > n) throw ContractViolation("sample_codes: requires 1 <= s <= n");

    double lo = -1.0, hi = 1.0;
    if (mode == SignMode::Positive) lo = 0.0;
    if (mode == SignMode::Negative) hi = 0.0;

    Matrix z(n, count);
    std::vector<std::size_t> idx(n);
    for (std::size_t col = 0; col < count; ++col) {
        Rng rng(Rng::derive(seed, kCodesStream + col));
        // Partial Fisher-Yates: the first s slots are a uniform support.
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(idx[i], idx[j]);
        }
        for (std::size_t i = 0; i < s; ++i) {
            double v;
            do {
                v = rng.uniform(lo, hi);
            } while (v == 0.0 || v == -1.0);  // keep the open interval, no exact zeros
            z(idx[i], col) = v;
        }
    }
    return z;
}

Matrix synthesize(const Dictionary& dict, const Matrix& z) {
    if (z.rows() != dict.code_dim())
        throw ContractViolation("synthesize: Z row count must equal dictionary code dimension");
    return matmul(dict.w, z);
}

PlantResult plant_targets(const Dictionary& dict, const Matrix& x, const ActivationKind& kind,
                          std::size_t iters, double eta) {
    if (iters < 1) throw ContractViolation("plant_targets: requires iters >= 1");
    if (eta == 0.0) eta = 1.0 / dict.c;
    if (!(eta > 0.0)) throw ContractViolation("plant_targets: requires eta > 0");
    if (x.rows() != dict.signal_dim())
        throw ContractViolation("plant_targets: X row count must equal dictionary signal dimension");

    const std::size_t n = dict.code_dim();
    const std::size_t cols = x.cols();

    Matrix z(n, cols);
    Matrix r, g, prev;
    for (std::size_t it = 1; it <= iters; ++it) {
        if (it == iters) prev = z;
        matmul_into(r, dict.w, z);
        for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= x.data()[i];
        matmul_transa_into(g, dict.w, r);
        for (std::size_t i = 0; i < z.size(); ++i) g.data()[i] = z.data()[i] - eta * g.data()[i];
        apply_act(kind, g.data().data(), z.data().data(), z.size());
        if (!z.all_finite()) {
            for (std::size_t col = 0; col < cols; ++col)
                for (std::size_t row = 0; row < n; ++row)
                    if (!std::isfinite(z(row, col)))
                        throw NumericError("plant_targets: non-finite iterate in column " +
                                           std::to_string(col) + " at iteration " +
                                           std::to_string(it));
        }
    }

    PlantResult out;
    out.max_displacement = max_abs_diff(z, prev);
    out.z = std::move(z);
    return out;
}

std::pair<SparseDataset, SparseDataset> split(const SparseDataset& ds, double train_frac,
                                              std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw ContractViolation("split: requires 0 < train_frac < 1");
    const std::size_t total = ds.sample_count();
    if (total < 2) throw ContractViolation("split: requires at least 2 samples");

    std::vector<std::size_t> perm(total);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = total - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(perm[i], perm[j]);
    }

    const auto train_n =
        static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(total)));
    std::span<const std::size_t> train_idx(perm.data(), train_n);
    std::span<const std::size_t> val_idx(perm.data() + train_n, total - train_n);

    auto subset = [&](std::span<const std::size_t> idx) {
        SparseDataset out = ds;
        out.x = gather_columns(ds.x, idx);
        out.z = gather_columns(ds.z, idx);
        return out;
    };
    return {subset(train_idx), subset(val_idx)};
}

SparseDataset make_sparse_dataset(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t s,
                                  std::size_t count, SignMode mode, double scale) {
    SparseDataset ds;
    ds.dict = make_dictionary(Rng::derive(seed, 1), m, n, scale);
    ds.z = sample_codes(Rng::derive(seed, 2), n, s, count, mode);
    ds.x = synthesize(ds.dict, ds.z);
    ds.s = s;
    ds.sign_mode = mode;
    ds.provenance = Provenance::ExactSparse;
    ds.seed = seed;
    return ds;
}

SparseDataset make_planted_dataset(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t s,
                                   std::size_t count, SignMode mode, double scale,
                                   const ActivationKind& kind, std::size_t iters,
                                   double* displacement_out) {
    SparseDataset ds = make_sparse_dataset(seed, m, n, s, count, mode, scale);
    const double eta = 1.0 / ds.dict.c;
    PlantResult planted = plant_targets(ds.dict, ds.x, kind, iters, eta);
    if (displacement_out) *displacement_out = planted.max_displacement;
    ds.z = std::move(planted.z);
    ds.provenance = Provenance::Planted;
    ds.planted_kind = op_name(kind);
    ds.planted_iters = iters;
    ds.planted_eta = eta;
    return ds;
}

void save_dataset(const SparseDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_matrix(ds.dict.w, dir / "W.mat");
    save_matrix(ds.x, dir / "X.mat");
    save_matrix(ds.z, dir / "Z.mat");
    KvPairs kv{
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
    write_kv_file(dir / "manifest", kv);
}

SparseDataset load_dataset(const std::filesystem::path& dir) {
    const KvPairs kv = read_kv_file(dir / "manifest");
    auto get = [&](std::string_view key) -> const std::string& {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw IoError((dir / "manifest").string() + ": missing key '" + std::string(key) + "'");
    };
    auto get_u64 = [&](std::string_view key) {
        bool ok = false;
        auto v = parse_u64(get(key), ok);
        if (!ok) throw IoError((dir / "manifest").string() + ": bad integer for '" +
                               std::string(key) + "'");
        return v;
    };
    auto get_dbl = [&](std::string_view key) {
        bool ok = false;
        auto v = parse_double(get(key), ok);
        if (!ok) throw IoError((dir / "manifest").string() + ": bad number for '" +
                               std::string(key) + "'");
        return v;
    };

    SparseDataset ds;
    ds.dict.w = load_matrix(dir / "W.mat");
    ds.dict.c = frobenius_sq(ds.dict.w);
    ds.dict.seed = get_u64("seed");
    ds.dict.scale = get_dbl("scale");
    ds.x = load_matrix(dir / "X.mat");
    ds.z = load_matrix(dir / "Z.mat");
    ds.s = static_cast<std::size_t>(get_u64("s"));
    ds.sign_mode = sign_mode_from_name(get("sign_mode"));
    const std::string& prov = get("provenance");
    if (prov == "exact-sparse") {
        ds.provenance = Provenance::ExactSparse;
    } else if (prov == "planted") {
        ds.provenance = Provenance::Planted;
    } else {
        throw IoError((dir / "manifest").string() + ": unknown provenance '" + prov + "'");
    }
    const std::string& kind = get("kind");
    ds.planted_kind = (kind == "none") ? std::string{} : kind;
    ds.planted_iters = static_cast<std::size_t>(get_u64("iters"));
    ds.planted_eta = get_dbl("eta");
    ds.seed = get_u64("seed");

    if (ds.dict.w.rows() != get_u64("m") || ds.dict.w.cols() != get_u64("n"))
        throw IoError(dir.string() + ": W.mat shape disagrees with manifest");
    if (ds.x.cols() != get_u64("N") || ds.z.cols() != ds.x.cols())
        throw IoError(dir.string() + ": sample counts disagree");
    if (ds.x.rows() != ds.dict.w.rows() || ds.z.rows() != ds.dict.w.cols())
        throw IoError(dir.string() + ": matrix shapes disagree with dictionary");
    return ds;
}

}  // namespace proxnas
