// proxnas CLI: dataset generation, NAS training runs, reference solvers and
// report re-rendering, all driven by flat key=value config files.

#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxnas/config.hpp"
#include "proxnas/harness.hpp"
#include "proxnas/solvers.hpp"
#include "proxnas/svg.hpp"
#include "proxnas/textio.hpp"

namespace fs = std::filesystem;
using namespace proxnas;

namespace {

Profile parse_profile(const std::string& name) { return profile_from_name(name); }

void print_report_summary(const ExperimentReport& rep, const fs::path& out_dir) {
    std::cout << "run " << out_dir.string() << "\n";
    std::cout << "  winner: " << rep.winner << "\n  final weights:";
    for (std::size_t j = 0; j < rep.op_names.size(); ++j)
        std::cout << ' ' << rep.op_names[j] << '=' << fmt_double(rep.final_summary[j]);
    std::cout << "\n  final val loss: " << fmt_double(rep.final_val_loss)
              << "  binarized val mse: " << fmt_double(rep.binarized_val_mse)
              << "\n  baselines (same depth): ista " << fmt_double(rep.ista_val_mse) << ", fista "
              << fmt_double(rep.fista_val_mse) << "\n";
}

int cmd_gen(const std::string& config_path, const std::string& out, const std::string& profile) {
    ExperimentConfig cfg = load_config_file(config_path, parse_profile(profile));
    SparseDataset ds = make_sparse_dataset(cfg.data_seed, cfg.m, cfg.n, cfg.s, cfg.samples,
                                           cfg.sign_mode, cfg.scale);
    save_dataset(ds, out);
    std::cout << "dataset " << out << ": m=" << cfg.m << " n=" << cfg.n << " s=" << cfg.s
              << " N=" << cfg.samples << " sign_mode=" << sign_mode_name(cfg.sign_mode) << "\n";
    return 0;
}

int cmd_plant(const std::string& config_path, const std::string& out,
              const std::string& profile) {
    ExperimentConfig cfg = load_config_file(config_path, parse_profile(profile));
    if (cfg.planted_op.empty())
        throw ConfigError("config: missing required key 'planted_op' for plant");
    ExperimentConfig planted_cfg = cfg;
    planted_cfg.kind = ExperimentKind::Planted;
    double displacement = 0.0;
    SparseDataset ds = build_dataset(planted_cfg, &displacement);
    save_dataset(ds, out);
    std::cout << "planted dataset " << out << ": op=" << cfg.planted_op
              << " iters=" << cfg.plant_iters
              << " final-step displacement=" << fmt_double(displacement) << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& out, const std::string& profile,
              const std::string& seeds, bool parallel) {
    ExperimentConfig cfg = load_config_file(config_path, parse_profile(profile));
    const fs::path out_dir = !out.empty()           ? fs::path(out)
                             : !cfg.out_dir.empty() ? fs::path(cfg.out_dir)
                                                    : fs::path("runs") / "run";

    if (seeds.empty()) {
        ExperimentReport rep = run_config(cfg, out_dir);
        print_report_summary(rep, out_dir);
        return 0;
    }

    std::vector<std::uint64_t> seed_list;
    for (const auto& tok : split(seeds, ',')) {
        bool ok = false;
        seed_list.push_back(parse_u64(trim(tok), ok));
        if (!ok) throw UsageError("--seeds expects a comma-separated list of integers");
    }

    auto run_one = [&](std::uint64_t seed) {
        ExperimentConfig c = cfg;
        c.train_seed = seed;
        const fs::path dir = out_dir / ("seed-" + fmt_u64(seed));
        return std::make_pair(dir, run_config(c, dir));
    };

    if (parallel) {
        std::vector<std::future<std::pair<fs::path, ExperimentReport>>> futures;
        futures.reserve(seed_list.size());
        for (auto seed : seed_list)
            futures.push_back(std::async(std::launch::async, run_one, seed));
        for (auto& f : futures) {
            auto [dir, rep] = f.get();
            print_report_summary(rep, dir);
        }
    } else {
        for (auto seed : seed_list) {
            auto [dir, rep] = run_one(seed);
            print_report_summary(rep, dir);
        }
    }
    return 0;
}

int cmd_solve(const std::string& dataset_dir, const std::string& solver, double lambda,
              double eta, std::size_t iters, double tol, std::size_t column,
              std::size_t trace_every, const std::string& out) {
    SparseDataset ds = load_dataset(dataset_dir);
    if (column >= ds.sample_count())
        throw UsageError("--column " + fmt_u64(column) + " out of range (dataset has " +
                         fmt_u64(ds.sample_count()) + " samples)");
    const Vector x = get_column(ds.x, column);
    if (eta == 0.0) eta = 1.0 / ds.dict.c;
    // Default objective weight matches the model's shrink threshold 0.01/c
    // at step 1/c: lambda = 2*threshold/eta = 0.02.
    if (lambda < 0.0) lambda = 0.02;

    SolveTrace trace;
    trace.stride = trace_every == 0 ? 1 : trace_every;
    Vector z;
    bool converged = true;
    if (solver == "ista") {
        z = ista(x, ds.dict, lambda, eta, iters, &trace);
    } else if (solver == "fista") {
        z = fista(x, ds.dict, lambda, eta, iters, &trace);
    } else if (solver == "cd") {
        CdResult res = lasso_cd(x, ds.dict, lambda, tol, iters, &trace);
        z = std::move(res.z);
        converged = res.converged;
    } else {
        throw UsageError("--solver must be ista, fista or cd");
    }

    std::ostringstream os;
    os << "iter,objective,residual_norm,l1_norm\n";
    for (const auto& p : trace.points)
        os << p.iter << ',' << fmt_double(p.objective) << ',' << fmt_double(p.residual_norm)
           << ',' << fmt_double(p.l1_norm) << '\n';
    write_text_file(out, os.str());

    std::cout << solver << " column " << column << ": objective "
              << fmt_double(lasso_objective(z, x, ds.dict, lambda)) << " after "
              << trace.points.back().iter << " iterations"
              << (converged ? "" : " (not converged)") << "; trace -> " << out << "\n";
    return converged ? 0 : 3;
}

int cmd_report(const std::string& trace_path, const std::string& out) {
    auto [trace, op_names] = read_trace_csv(trace_path);
    if (trace.empty()) throw IoError(trace_path + ": no trace rows");
    fs::path out_dir = out.empty() ? fs::path(trace_path).parent_path() : fs::path(out);
    if (!out_dir.empty()) fs::create_directories(out_dir);
    emit_svg(trace, op_names, out_dir / "trace.svg");

    const auto& last = trace.back();
    std::size_t best = 0;
    for (std::size_t j = 1; j < last.summary.size(); ++j)
        if (last.summary[j] > last.summary[best]) best = j;
    std::cout << "epochs: " << last.epoch << "\nwinner: " << op_names[best] << "\nfinal weights:";
    for (std::size_t j = 0; j < op_names.size(); ++j)
        std::cout << ' ' << op_names[j] << '=' << fmt_double(last.summary[j]);
    std::cout << "\nchart -> " << (out_dir / "trace.svg").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-recovery algorithm search over unrolled iterative networks"};
    app.require_subcommand(1);

    std::string config_path, out, profile = "paper-full", seeds;
    bool parallel = false;

    auto* gen = app.add_subcommand("gen", "Generate an exact-sparse dataset directory");
    gen->add_option("--config", config_path, "Config file")->required();
    gen->add_option("--out", out, "Output dataset directory")->required();
    gen->add_option("--profile", profile, "desk or paper-full");

    auto* plant = app.add_subcommand("plant", "Generate a planted-operator dataset directory");
    plant->add_option("--config", config_path, "Config file (needs planted_op)")->required();
    plant->add_option("--out", out, "Output dataset directory")->required();
    plant->add_option("--profile", profile, "desk or paper-full");

    auto* train = app.add_subcommand("train", "Run a search experiment from a config");
    train->add_option("--config", config_path, "Config file")->required();
    train->add_option("--out", out, "Run directory (default: config's out key)");
    train->add_option("--profile", profile, "desk or paper-full");
    train->add_option("--seeds", seeds, "Comma-separated train seeds; one run each");
    train->add_flag("--parallel", parallel, "Run the seed sweep concurrently");

    std::string dataset_dir, solver = "ista";
    double lambda = -1.0, eta = 0.0, tol = 1e-10;
    std::size_t iters = 1000, column = 0, trace_every = 1;
    auto* solve = app.add_subcommand("solve", "Run a reference solver on one dataset signal");
    solve->add_option("--dataset", dataset_dir, "Dataset directory")->required();
    solve->add_option("--solver", solver, "ista, fista or cd");
    solve->add_option("--lambda", lambda, "L1 objective weight (default 0.02)");
    solve->add_option("--eta", eta, "Step size (default 1/c)");
    solve->add_option("--iters", iters, "Iterations (sweeps for cd)");
    solve->add_option("--tol", tol, "cd stopping tolerance");
    solve->add_option("--column", column, "Signal column index");
    solve->add_option("--trace-every", trace_every, "Record every k-th iteration");
    solve->add_option("--out", out, "Trace CSV path")->required();

    std::string trace_path;
    auto* report = app.add_subcommand("report", "Re-render chart/summary from a trace CSV");
    report->add_option("--trace", trace_path, "Trace CSV path")->required();
    report->add_option("--out", out, "Output directory (default: alongside the trace)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(config_path, out, profile);
        if (plant->parsed()) return cmd_plant(config_path, out, profile);
        if (train->parsed()) return cmd_train(config_path, out, profile, seeds, parallel);
        if (solve->parsed())
            return cmd_solve(dataset_dir, solver, lambda, eta, iters, tol, column, trace_every,
                             out);
        if (report->parsed()) return cmd_report(trace_path, out);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io: " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "numeric: " << e.what() << "\n";
        return 5;
    } catch (const ContractViolation& e) {
        std::cerr << "contract: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
