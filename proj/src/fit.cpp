#include "qclob/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qclob {

namespace {

// Exact integral of (c_i - u)^2 du between consecutive sample images under
// the model cdf. Clamped cumulative maximum guards against quadrature
// jitter breaking monotonicity.
double cvm_from_images(const EmpiricalDistribution& emp, std::vector<double> u) {
    const auto& atoms = emp.atoms();
    const double total = emp.total_weight();
    double prev_u = 0.0;
    double acc = 0.0;
    auto cube = [](double v) { return v * v * v; };
    for (std::size_t i = 0; i <= atoms.size(); ++i) {
        const double c = i == 0 ? 0.0 : atoms[i - 1].cumulative / total;
        double next_u = i == atoms.size() ? 1.0 : std::clamp(u[i], 0.0, 1.0);
        if (next_u < prev_u) next_u = prev_u;
        acc += cube(next_u - c) - cube(prev_u - c);
        prev_u = next_u;
    }
    return total * acc / 3.0;
}

}  // namespace

double cvm_distance(const EmpiricalDistribution& emp,
                    const std::function<double(double)>& model_cdf) {
    if (emp.empty()) throw std::domain_error("cvm_distance: empty sample");
    std::vector<double> u;
    u.reserve(emp.atom_count());
    for (const auto& a : emp.atoms()) u.push_back(model_cdf(a.value));
    return cvm_from_images(emp, std::move(u));
}

double cvm_distance(const EmpiricalDistribution& emp, const EmpiricalDistribution& model) {
    if (emp.empty() || model.empty()) throw std::domain_error("cvm_distance: empty sample");
    double acc = 0.0;
    const double model_total = model.total_weight();
    for (const auto& atom : model.atoms()) {
        const double diff = emp.cdf(atom.value) - atom.cumulative / model_total;
        acc += diff * diff * atom.weight / model_total;
    }
    return emp.total_weight() * acc;
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_distance: empty sample");
    double sup = 0.0;
    auto probe = [&](double x) {
        sup = std::max(sup, std::abs(a.cdf(x) - b.cdf(x)));
        const double before = std::nextafter(x, -1e308);
        sup = std::max(sup, std::abs(a.cdf(before) - b.cdf(before)));
    };
    for (const auto& atom : a.atoms()) probe(atom.value);
    for (const auto& atom : b.atoms()) probe(atom.value);
    return sup;
}

double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& model_cdf) {
    if (emp.empty()) throw std::domain_error("ks_distance: empty sample");
    const double total = emp.total_weight();
    double sup = 0.0;
    double prev_c = 0.0;
    for (const auto& atom : emp.atoms()) {
        const double m = model_cdf(atom.value);
        const double c = atom.cumulative / total;
        sup = std::max({sup, std::abs(c - m), std::abs(prev_c - m)});
        prev_c = c;
    }
    return sup;
}

namespace {

// Reparameterized coordinates: q = (mu, log sigma, xi, log(nu - 2)).
GenTParams from_q(const std::array<double, 4>& q) {
    GenTParams p;
    p.mu = q[0];
    p.sigma = std::exp(q[1]);
    p.xi = q[2];
    p.nu = 2.0 + std::exp(q[3]);
    return p;
}

std::array<double, 4> clamp_q(std::array<double, 4> q) {
    q[1] = std::clamp(q[1], -25.0, 25.0);
    q[2] = std::clamp(q[2], -50.0, 50.0);
    q[3] = std::clamp(q[3], -8.0, 16.0);
    return q;
}

// 4x4 symmetric solve with partial pivoting; false on (near-)singularity.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b,
            std::array<double, 4>& x) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-14) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 4; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return true;
}

}  // namespace

FitResult fit_gent(const EmpiricalDistribution& sample, std::optional<GenTParams> init,
                   const FitOptions& options) {
    if (sample.empty()) throw std::domain_error("fit_gent: empty sample");

    std::vector<WeightedValue> wv;
    wv.reserve(sample.atom_count());
    for (const auto& a : sample.atoms()) wv.push_back({a.value, a.weight});
    const TrimmedMoments moments = trimmed_moments(wv, options.trim_threshold);
    if (moments.weight_used < options.min_trimmed_count)
        throw std::domain_error("fit_gent: fewer than the required observations after trimming");

    std::array<double, 4> q;
    if (init) {
        init->validate();
        q = {init->mu, std::log(init->sigma), init->xi, std::log(init->nu - 2.0)};
    } else {
        const double sigma0 = moments.stddev > 0.0 ? moments.stddev : 1.0;
        q = {moments.mean, std::log(sigma0), 0.0, std::log(5.0 - 2.0)};
    }
    q = clamp_q(q);

    auto objective = [&](const std::array<double, 4>& qv) {
        const GenTCdf cdf(from_q(qv));
        std::vector<double> u;
        u.reserve(sample.atom_count());
        for (const auto& a : sample.atoms()) u.push_back(cdf(a.value));
        return cvm_from_images(sample, std::move(u));
    };

    double f = objective(q);
    FitResult result;
    result.params = from_q(q);
    result.objective = f;

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        // Central-difference gradient and Hessian.
        std::array<double, 4> h;
        for (int k = 0; k < 4; ++k) h[k] = options.fd_relative_step * (1.0 + std::abs(q[k]));

        std::array<double, 4> fp, fm, grad;
        for (int k = 0; k < 4; ++k) {
            auto qp = q, qm = q;
            qp[k] += h[k];
            qm[k] -= h[k];
            fp[k] = objective(clamp_q(qp));
            fm[k] = objective(clamp_q(qm));
            grad[k] = (fp[k] - fm[k]) / (2.0 * h[k]);
        }
        std::array<std::array<double, 4>, 4> hess{};
        for (int k = 0; k < 4; ++k) hess[k][k] = (fp[k] - 2.0 * f + fm[k]) / (h[k] * h[k]);
        for (int k = 0; k < 4; ++k) {
            for (int l = k + 1; l < 4; ++l) {
                auto qpp = q, qpm = q, qmp = q, qmm = q;
                qpp[k] += h[k]; qpp[l] += h[l];
                qpm[k] += h[k]; qpm[l] -= h[l];
                qmp[k] -= h[k]; qmp[l] += h[l];
                qmm[k] -= h[k]; qmm[l] -= h[l];
                const double v = (objective(clamp_q(qpp)) - objective(clamp_q(qpm)) -
                                  objective(clamp_q(qmp)) + objective(clamp_q(qmm))) /
                                 (4.0 * h[k] * h[l]);
                hess[k][l] = hess[l][k] = v;
            }
        }

        // Newton direction, Levenberg-damped until it descends.
        std::array<double, 4> step{};
        bool have_step = false;
        double lambda = 0.0;
        for (int attempt = 0; attempt < 8 && !have_step; ++attempt) {
            auto damped = hess;
            for (int k = 0; k < 4; ++k) damped[k][k] += lambda;
            std::array<double, 4> rhs = {-grad[0], -grad[1], -grad[2], -grad[3]};
            if (solve4(damped, rhs, step)) {
                double dot = 0.0;
                for (int k = 0; k < 4; ++k) dot += step[k] * grad[k];
                if (dot < 0.0) have_step = true;
            }
            lambda = lambda == 0.0 ? 1e-4 * (1.0 + std::abs(hess[0][0])) : lambda * 10.0;
        }
        if (!have_step) {
            double gnorm = 0.0;
            for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
            if (gnorm < 1e-14) {
                result.converged = true;
                break;
            }
            for (int k = 0; k < 4; ++k) step[k] = -grad[k] / gnorm * 0.1;
        }

        // Backtracking line search.
        double alpha = 1.0;
        bool improved = false;
        std::array<double, 4> q_next = q;
        double f_next = f;
        for (int bt = 0; bt < 40; ++bt) {
            std::array<double, 4> trial = q;
            for (int k = 0; k < 4; ++k) trial[k] += alpha * step[k];
            trial = clamp_q(trial);
            const double ft = objective(trial);
            if (ft < f) {
                q_next = trial;
                f_next = ft;
                improved = true;
                break;
            }
            alpha /= 2.0;
        }
        if (!improved) {
            result.converged = true;  // no descent direction makes progress
            break;
        }

        double step_norm = 0.0;
        for (int k = 0; k < 4; ++k) step_norm = std::max(step_norm, std::abs(q_next[k] - q[k]));
        q = q_next;
        f = f_next;
        if (f < result.objective) {
            result.objective = f;
            result.params = from_q(q);
        }
        if (step_norm < options.step_tolerance) {
            result.converged = true;
            ++iter;
            break;
        }
    }
    result.iterations = iter;
    if (!result.converged)
        result.message = "iteration limit reached; returning best parameters seen";
    return result;
}

}  // namespace qclob
