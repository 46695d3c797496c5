#include "proxnas/solvers.hpp"

#include <cmath>
#include <string>

namespace proxnas {

namespace {

double shrink_scalar(double v, double thr) {
    if (v > thr) return v - thr;
    if (v < -thr) return v + thr;
    return 0.0;
}

void check_signal(const Dictionary& dict, std::span<const double> x, const char* who) {
    if (x.size() != dict.signal_dim())
        throw ContractViolation(std::string(who) + ": signal length " + std::to_string(x.size()) +
                                " does not match dictionary rows " +
                                std::to_string(dict.signal_dim()));
}

void record_point(SolveTrace* trace, std::size_t iter, std::span<const double> z,
                  std::span<const double> x, const Dictionary& dict, double lambda,
                  bool final_point) {
    if (!trace) return;
    const std::size_t stride = trace->stride == 0 ? 1 : trace->stride;
    if (!final_point && iter % stride != 0) return;
    if (final_point && !trace->points.empty() && trace->points.back().iter == iter) return;
    Vector r = matvec(dict.w, z);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
    SolveTracePoint p;
    p.iter = iter;
    p.residual_norm = norm2(r);
    p.l1_norm = norm1(z);
    p.objective = p.residual_norm * p.residual_norm + lambda * p.l1_norm;
    trace->lambda = lambda;
    trace->points.push_back(p);
}

}  // namespace

double lasso_objective(std::span<const double> z, std::span<const double> x,
                       const Dictionary& dict, double lambda) {
    check_signal(dict, x, "lasso_objective");
    if (z.size() != dict.code_dim())
        throw ContractViolation("lasso_objective: code length does not match dictionary cols");
    Vector r = matvec(dict.w, z);
    double data = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double d = r[i] - x[i];
        data += d * d;
    }
    return data + lambda * norm1(z);
}

Vector ista(std::span<const double> x, const Dictionary& dict, double lambda, double eta,
            std::size_t iters, SolveTrace* trace) {
    check_signal(dict, x, "ista");
    if (!(eta > 0.0)) throw ContractViolation("ista: requires eta > 0");
    if (!(lambda >= 0.0)) throw ContractViolation("ista: requires lambda >= 0");

    const double thr = eta * lambda / 2.0;
    const std::size_t n = dict.code_dim();
    Vector z(n, 0.0);
    record_point(trace, 0, z, x, dict, lambda, false);
    for (std::size_t k = 1; k <= iters; ++k) {
        Vector r = matvec(dict.w, z);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
        Vector g = matvec_transposed(dict.w, r);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = shrink_scalar(z[i] - eta * g[i], thr);
            if (!std::isfinite(z[i]))
                throw NumericError("ista: non-finite iterate at iteration " + std::to_string(k));
        }
        record_point(trace, k, z, x, dict, lambda, k == iters);
    }
    return z;
}

Vector fista(std::span<const double> x, const Dictionary& dict, double lambda, double eta,
             std::size_t iters, SolveTrace* trace) {
    check_signal(dict, x, "fista");
    if (!(eta > 0.0)) throw ContractViolation("fista: requires eta > 0");
    if (!(lambda >= 0.0)) throw ContractViolation("fista: requires lambda >= 0");

    const double thr = eta * lambda / 2.0;
    const std::size_t n = dict.code_dim();
    Vector z(n, 0.0), z_prev(n, 0.0), y(n, 0.0);
    double t = 1.0;
    record_point(trace, 0, z, x, dict, lambda, false);
    for (std::size_t k = 1; k <= iters; ++k) {
        Vector r = matvec(dict.w, y);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
        Vector g = matvec_transposed(dict.w, r);
        z_prev.swap(z);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = shrink_scalar(y[i] - eta * g[i], thr);
            if (!std::isfinite(z[i]))
                throw NumericError("fista: non-finite iterate at iteration " + std::to_string(k));
        }
        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        const double mom = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < n; ++i) y[i] = z[i] + mom * (z[i] - z_prev[i]);
        t = t_next;
        record_point(trace, k, z, x, dict, lambda, k == iters);
    }
    return z;
}

Matrix ista_block(const Matrix& x, const Dictionary& dict, double lambda, double eta,
                  std::size_t iters) {
    if (x.rows() != dict.signal_dim())
        throw ContractViolation("ista_block: signal rows do not match dictionary");
    if (!(eta > 0.0)) throw ContractViolation("ista_block: requires eta > 0");
    if (!(lambda >= 0.0)) throw ContractViolation("ista_block: requires lambda >= 0");

    const double thr = eta * lambda / 2.0;
    Matrix z(dict.code_dim(), x.cols());
    Matrix r, g;
    for (std::size_t k = 1; k <= iters; ++k) {
        matmul_into(r, dict.w, z);
        for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= x.data()[i];
        matmul_transa_into(g, dict.w, r);
        for (std::size_t i = 0; i < z.size(); ++i)
            z.data()[i] = shrink_scalar(z.data()[i] - eta * g.data()[i], thr);
        if (!z.all_finite())
            throw NumericError("ista_block: non-finite iterate at iteration " + std::to_string(k));
    }
    return z;
}

Matrix fista_block(const Matrix& x, const Dictionary& dict, double lambda, double eta,
                   std::size_t iters) {
    if (x.rows() != dict.signal_dim())
        throw ContractViolation("fista_block: signal rows do not match dictionary");
    if (!(eta > 0.0)) throw ContractViolation("fista_block: requires eta > 0");
    if (!(lambda >= 0.0)) throw ContractViolation("fista_block: requires lambda >= 0");

    const double thr = eta * lambda / 2.0;
    Matrix z(dict.code_dim(), x.cols());
    Matrix z_prev = z, y = z;
    Matrix r, g;
    double t = 1.0;
    for (std::size_t k = 1; k <= iters; ++k) {
        matmul_into(r, dict.w, y);
        for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= x.data()[i];
        matmul_transa_into(g, dict.w, r);
        z_prev = z;
        for (std::size_t i = 0; i < z.size(); ++i)
            z.data()[i] = shrink_scalar(y.data()[i] - eta * g.data()[i], thr);
        if (!z.all_finite())
            throw NumericError("fista_block: non-finite iterate at iteration " + std::to_string(k));
        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        const double mom = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < z.size(); ++i)
            y.data()[i] = z.data()[i] + mom * (z.data()[i] - z_prev.data()[i]);
        t = t_next;
    }
    return z;
}

CdResult lasso_cd(std::span<const double> x, const Dictionary& dict, double lambda, double tol,
                  std::size_t max_sweeps, SolveTrace* trace) {
    check_signal(dict, x, "lasso_cd");
    if (!(lambda >= 0.0)) throw ContractViolation("lasso_cd: requires lambda >= 0");

    const std::size_t m = dict.signal_dim();
    const std::size_t n = dict.code_dim();

    // Column-major copy of W for contiguous column access.
    Matrix wt(n, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) wt(j, i) = dict.w(i, j);

    Vector colsq(n);
    for (std::size_t j = 0; j < n; ++j) {
        colsq[j] = dot(wt.row(j), wt.row(j));
        if (colsq[j] == 0.0)
            throw ContractViolation("lasso_cd: dictionary column " + std::to_string(j) +
                                    " is zero");
    }

    CdResult out;
    out.z.assign(n, 0.0);
    Vector r(x.begin(), x.end());  // r = x - W z, z = 0
    record_point(trace, 0, out.z, x, dict, lambda, false);

    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto wj = wt.row(j);
            const double rho = dot(wj, r) + colsq[j] * out.z[j];  // w_j^T r_{-j}
            const double z_new = shrink_scalar(rho / colsq[j], lambda / (2.0 * colsq[j]));
            const double delta = z_new - out.z[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < m; ++i) r[i] -= wj[i] * delta;
                out.z[j] = z_new;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        out.sweeps = sweep;
        record_point(trace, sweep, out.z, x, dict, lambda, false);
        if (max_change <= tol) {
            out.converged = true;
            break;
        }
    }
    record_point(trace, out.sweeps, out.z, x, dict, lambda, true);
    return out;
}

}  // namespace proxnas
