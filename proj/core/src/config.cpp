#include "proxnas/config.hpp"

#include <cctype>
#include <sstream>

#include "proxnas/textio.hpp"

namespace proxnas {

namespace {

struct RawEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

std::vector<RawEntry> tokenize(std::string_view text) {
    std::vector<RawEntry> entries;
    std::size_t lineno = 0;
    for (const auto& line : split(text, '\n')) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        auto key = trim(t.substr(0, eq));
        auto value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + ": empty key");
        for (char c : key)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
                throw ConfigError("config: line " + std::to_string(lineno) + ": bad key '" +
                                  std::string(key) + "'");
        entries.push_back({std::string(key), std::string(value), lineno});
    }
    return entries;
}

double need_double(const RawEntry& e) {
    bool ok = false;
    const double v = parse_double(e.value, ok);
    if (!ok)
        throw ConfigError("config: line " + std::to_string(e.line) + ": key '" + e.key +
                          "' expects a number, got '" + e.value + "'");
    return v;
}

std::uint64_t need_u64(const RawEntry& e) {
    bool ok = false;
    const auto v = parse_u64(e.value, ok);
    if (!ok)
        throw ConfigError("config: line " + std::to_string(e.line) + ": key '" + e.key +
                          "' expects a non-negative integer, got '" + e.value + "'");
    return v;
}

[[noreturn]] void range_error(const std::string& key, const std::string& constraint) {
    throw ConfigError("config: key '" + key + "' violates constraint: " + constraint);
}

}  // namespace

Profile profile_from_name(std::string_view name) {
    if (name == "desk") return Profile::Desk;
    if (name == "paper-full") return Profile::PaperFull;
    throw ConfigError("config: unknown profile '" + std::string(name) +
                      "' (expected desk or paper-full)");
}

std::string profile_name(Profile profile) {
    return profile == Profile::Desk ? "desk" : "paper-full";
}

ExperimentConfig parse_config(std::string_view text, Profile profile) {
    const auto entries = tokenize(text);

    // kind comes first: it selects the op list, cell mode and sign mode.
    ExperimentConfig cfg;
    bool kind_seen = false;
    for (const auto& e : entries) {
        if (e.key == "kind") {
            if (e.value.empty()) throw ConfigError("config: missing required key 'kind'");
            cfg.kind = experiment_kind_from_name(e.value);
            kind_seen = true;
        }
    }
    if (!kind_seen) throw ConfigError("config: missing required key 'kind'");

    cfg.mode = default_mode_for(cfg.kind);
    cfg.sign_mode = default_sign_mode_for(cfg.kind);
    cfg.ops = default_ops_for(cfg.kind, cfg.variant);

    if (profile == Profile::Desk) {
        cfg.layers = 30;
        cfg.epochs = 200;
        cfg.samples = 2000;
        cfg.plant_iters = 2000;
    }

    bool ops_explicit = false;
    for (const auto& e : entries) {
        if (e.key == "kind") {
            continue;
        } else if (e.key == "m") {
            cfg.m = need_u64(e);
        } else if (e.key == "n") {
            cfg.n = need_u64(e);
        } else if (e.key == "s") {
            cfg.s = need_u64(e);
        } else if (e.key == "N") {
            cfg.samples = need_u64(e);
        } else if (e.key == "sign_mode") {
            try {
                cfg.sign_mode = sign_mode_from_name(e.value);
            } catch (const ContractViolation& err) {
                throw ConfigError("config: line " + std::to_string(e.line) + ": " + err.what());
            }
        } else if (e.key == "scale") {
            cfg.scale = need_double(e);
        } else if (e.key == "data_seed") {
            cfg.data_seed = need_u64(e);
        } else if (e.key == "dataset") {
            cfg.dataset_dir = e.value;
        } else if (e.key == "planted_op") {
            cfg.planted_op = e.value;
        } else if (e.key == "plant_iters") {
            cfg.plant_iters = need_u64(e);
        } else if (e.key == "K") {
            cfg.layers = need_u64(e);
        } else if (e.key == "mode") {
            try {
                cfg.mode = arch_mode_from_name(e.value);
            } catch (const ContractViolation& err) {
                throw ConfigError("config: line " + std::to_string(e.line) + ": " + err.what());
            }
        } else if (e.key == "ops") {
            cfg.ops.clear();
            for (const auto& raw : split(e.value, ',')) {
                auto name = std::string(trim(raw));
                if (!is_op_name(name))
                    throw ConfigError("config: line " + std::to_string(e.line) +
                                      ": unknown operator '" + name + "'");
                cfg.ops.push_back(std::move(name));
            }
            ops_explicit = true;
        } else if (e.key == "variant") {
            if (e.value != "relu" && e.value != "elu")
                throw ConfigError("config: line " + std::to_string(e.line) +
                                  ": variant must be relu or elu");
            cfg.variant = e.value;
        } else if (e.key == "eta") {
            cfg.eta_override =
                e.value == "auto" ? std::optional<double>{} : std::optional<double>{need_double(e)};
        } else if (e.key == "lambda") {
            cfg.lambda_override =
                e.value == "auto" ? std::optional<double>{} : std::optional<double>{need_double(e)};
        } else if (e.key == "lr") {
            cfg.lr = need_double(e);
        } else if (e.key == "epochs") {
            cfg.epochs = need_u64(e);
        } else if (e.key == "batch_size") {
            cfg.batch_size = need_u64(e);
        } else if (e.key == "train_seed") {
            cfg.train_seed = need_u64(e);
        } else if (e.key == "beta1") {
            cfg.beta1 = need_double(e);
        } else if (e.key == "beta2") {
            cfg.beta2 = need_double(e);
        } else if (e.key == "eps") {
            cfg.eps = need_double(e);
        } else if (e.key == "out") {
            cfg.out_dir = e.value;
        } else {
            throw ConfigError("config: unknown key '" + e.key + "' (line " +
                              std::to_string(e.line) + ")");
        }
    }

    // The signed family chooses its op list by variant unless overridden.
    if (cfg.kind == ExperimentKind::SignedSparse && !ops_explicit)
        cfg.ops = default_ops_for(cfg.kind, cfg.variant);

    if (cfg.m < 1) range_error("m", "m >= 1");
    if (cfg.n < 1) range_error("n", "n >= 1");
    if (cfg.s < 1 || cfg.s > cfg.n) range_error("s", "1 <= s <= n");
    if (cfg.samples < 2) range_error("N", "N >= 2");
    if (!(cfg.scale > 0.0)) range_error("scale", "scale > 0");
    if (cfg.layers < 1) range_error("K", "K >= 1");
    if (cfg.ops.size() < 2) range_error("ops", "at least 2 operators");
    if (!(cfg.lr >= 0.0)) range_error("lr", "lr >= 0");
    if (cfg.batch_size < 1) range_error("batch_size", "batch_size >= 1");
    if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0)) range_error("beta1", "0 < beta1 < 1");
    if (!(cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) range_error("beta2", "0 < beta2 < 1");
    if (!(cfg.eps > 0.0)) range_error("eps", "eps > 0");
    if (cfg.eta_override && !(*cfg.eta_override > 0.0)) range_error("eta", "eta > 0 or auto");
    if (cfg.lambda_override && !(*cfg.lambda_override >= 0.0))
        range_error("lambda", "lambda >= 0 or auto");
    if (cfg.kind == ExperimentKind::Planted) {
        if (cfg.planted_op.empty())
            throw ConfigError("config: missing required key 'planted_op' for kind planted");
        if (!is_op_name(cfg.planted_op))
            throw ConfigError("config: key 'planted_op': unknown operator '" + cfg.planted_op +
                              "'");
        if (cfg.plant_iters < 1) range_error("plant_iters", "plant_iters >= 1");
    }
    if (cfg.kind == ExperimentKind::SignedSparse && cfg.sign_mode == SignMode::Signed)
        range_error("sign_mode", "signed experiments need sign_mode positive or negative");

    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, Profile profile) {
    return parse_config(read_text_file(path), profile);
}

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "kind = " << experiment_kind_name(cfg.kind) << "\n";
    if (!cfg.dataset_dir.empty()) os << "dataset = " << cfg.dataset_dir << "\n";
    os << "m = " << cfg.m << "\n";
    os << "n = " << cfg.n << "\n";
    os << "s = " << cfg.s << "\n";
    os << "N = " << cfg.samples << "\n";
    os << "sign_mode = " << sign_mode_name(cfg.sign_mode) << "\n";
    os << "scale = " << fmt_double(cfg.scale) << "\n";
    os << "data_seed = " << cfg.data_seed << "\n";
    if (!cfg.planted_op.empty()) os << "planted_op = " << cfg.planted_op << "\n";
    os << "plant_iters = " << cfg.plant_iters << "\n";
    os << "K = " << cfg.layers << "\n";
    os << "mode = " << arch_mode_name(cfg.mode) << "\n";
    os << "ops = ";
    for (std::size_t j = 0; j < cfg.ops.size(); ++j) {
        if (j) os << ',';
        os << cfg.ops[j];
    }
    os << "\n";
    os << "variant = " << cfg.variant << "\n";
    os << "eta = " << (cfg.eta_override ? fmt_double(*cfg.eta_override) : "auto") << "\n";
    os << "lambda = " << (cfg.lambda_override ? fmt_double(*cfg.lambda_override) : "auto") << "\n";
    os << "lr = " << fmt_double(cfg.lr) << "\n";
    os << "epochs = " << cfg.epochs << "\n";
    os << "batch_size = " << cfg.batch_size << "\n";
    os << "train_seed = " << cfg.train_seed << "\n";
    os << "beta1 = " << fmt_double(cfg.beta1) << "\n";
    os << "beta2 = " << fmt_double(cfg.beta2) << "\n";
    os << "eps = " << fmt_double(cfg.eps) << "\n";
    if (!cfg.out_dir.empty()) os << "out = " << cfg.out_dir << "\n";
    return os.str();
}

}  // namespace proxnas
