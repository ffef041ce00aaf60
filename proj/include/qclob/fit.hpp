#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qclob/empirical.hpp"
#include "qclob/gent.hpp"

namespace qclob {

// Sample-size-normalized Cramer-von Mises statistic
//   W^2 = n * integral [F_emp(p) - F_model(p)]^2 dF_model(p),
// with n the empirical observation count (total weight). The minimum over
// samples placed at model quantiles of ranks (i - 1/2)/n is 1/(12 n).
//
// Continuous-model form: exact closed-form integration of the piecewise
// quadratic integrand between consecutive sample images u_i = F_model(x_i).
double cvm_distance(const EmpiricalDistribution& emp,
                    const std::function<double(double)>& model_cdf);

// Discrete-model form: Riemann-Stieltjes sum over the model's atoms.
double cvm_distance(const EmpiricalDistribution& emp, const EmpiricalDistribution& model);

// Sup-norm distance between step functions (evaluated at jump points and
// their left limits) or between a step function and a continuous cdf.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& model_cdf);

struct FitOptions {
    double trim_threshold = 1000.0;
    int max_iterations = 200;
    double step_tolerance = 1e-6;   // infinity norm in reparameterized units
    double fd_relative_step = 1e-5;
    double min_trimmed_count = 100.0;
};

struct FitResult {
    GenTParams params;
    double objective = 0.0;  // W^2 at the returned params
    int iterations = 0;
    bool converged = false;
    std::string message;
};

// Minimizes the CvM statistic over (mu, sigma, xi, nu) with a damped
// finite-difference Newton iteration. sigma and nu - 2 are optimized in log
// space, which keeps every iterate feasible. Initial values default to the
// trimmed moments with xi = 0, nu = 5.
FitResult fit_gent(const EmpiricalDistribution& sample, std::optional<GenTParams> init = {},
                   const FitOptions& options = {});

}  // namespace qclob
