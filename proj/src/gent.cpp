#include "qclob/gent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qclob/fft.hpp"

namespace qclob {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

// Shared quadrature grid over the chi-squared mixing variable, in the
// substituted coordinate s = sqrt(v). The substitution turns the v^(nu/2-1)
// endpoint factor into s^(nu-1), smooth at zero for every nu > 2. Node
// weights carry the full density factor.
struct MixingGrid {
    std::vector<double> scale;   // sqrt(v_j / nu)
    std::vector<double> weight;  // quadrature weight * density * jacobian

    explicit MixingGrid(double nu) {
        // 20-point Gauss-Legendre rule on [-1, 1], positive half
        static constexpr double kX[10] = {
            0.0765265211334973, 0.2277858511416451, 0.3737060887154196, 0.5108670019508271,
            0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
            0.9639719272779138, 0.9931285991850949};
        static constexpr double kW[10] = {
            0.1527533871307258, 0.1491729864726037, 0.1420961093183821, 0.1316886384491766,
            0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
            0.0406014298003869, 0.0176140071391521};

        const double sd = std::sqrt(2.0 * nu);
        const double v_lo = std::max(0.0, nu - 16.0 * sd);
        const double v_hi = nu + 16.0 * sd + 40.0;
        const double s_lo = std::sqrt(v_lo);
        const double s_hi = std::sqrt(v_hi);
        const double lgam = std::lgamma(nu / 2.0);
        const double log_norm = lgam + (nu / 2.0) * std::numbers::ln2;

        const int panels = 24;
        scale.reserve(static_cast<std::size_t>(panels) * 20);
        weight.reserve(static_cast<std::size_t>(panels) * 20);
        for (int p = 0; p < panels; ++p) {
            const double a = s_lo + (s_hi - s_lo) * p / panels;
            const double b = s_lo + (s_hi - s_lo) * (p + 1) / panels;
            const double half = (b - a) / 2.0, center = (a + b) / 2.0;
            for (int k = 0; k < 10; ++k) {
                for (int sgn : {-1, 1}) {
                    const double s = center + sgn * half * kX[k];
                    if (s <= 0.0) continue;
                    // density(v) dv = exp((nu-1) ln s - s^2/2 - log_norm) * 2 ds
                    const double log_f = (nu - 1.0) * std::log(s) - s * s / 2.0 - log_norm;
                    if (log_f < -745.0) continue;
                    scale.push_back(s / std::sqrt(nu));
                    weight.push_back(half * kW[k] * 2.0 * std::exp(log_f));
                }
            }
        }
        // The truncated mass sits within ~1e-14 of one; normalizing removes
        // the residual so cdf limits hit 0 and 1 exactly.
        double total = 0.0;
        for (double w : weight) total += w;
        if (total > 0.0)
            for (double& w : weight) w /= total;
    }

    double cdf(double t, double xi) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < scale.size(); ++j)
            acc += weight[j] * normal_cdf(t * scale[j] - xi);
        return std::min(1.0, std::max(0.0, acc));
    }
};

// DCT-II coefficients c_j = sum_k values[k] * cos(pi j (k+1/2) / m) via one
// complex FFT of the mirrored sequence.
std::vector<double> dct2(const std::vector<double>& values) {
    const std::size_t m = values.size();
    std::vector<std::complex<double>> ext(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        ext[k] = values[k];
        ext[2 * m - 1 - k] = values[k];
    }
    const auto spectrum = dft(ext);
    std::vector<double> out(m);
    const double pi = std::numbers::pi;
    for (std::size_t j = 0; j < m; ++j) {
        const double phase = pi * static_cast<double>(j) / (2.0 * static_cast<double>(m));
        const std::complex<double> tw{std::cos(phase), -std::sin(phase)};
        out[j] = 0.5 * (tw * spectrum[j]).real();
    }
    return out;
}

}  // namespace

void GenTParams::validate() const {
    if (!(sigma > 0.0)) throw std::domain_error("generalized t: sigma must be positive");
    if (!(nu > 2.0)) throw std::domain_error("generalized t: nu must exceed 2");
    if (!std::isfinite(mu) || !std::isfinite(xi) || !std::isfinite(sigma) || !std::isfinite(nu))
        throw std::domain_error("generalized t: parameters must be finite");
}

double gent_cdf(double x, const GenTParams& params) {
    params.validate();
    const MixingGrid grid(params.nu);
    return grid.cdf((x - params.mu) / params.sigma, params.xi);
}

std::vector<double> gent_cdf_many(const std::vector<double>& xs, const GenTParams& params) {
    params.validate();
    const MixingGrid grid(params.nu);
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = grid.cdf((xs[i] - params.mu) / params.sigma, params.xi);
    return out;
}

double gent_quantile(double p, const GenTParams& params) {
    params.validate();
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
    const MixingGrid grid(params.nu);
    auto cdf_t = [&](double t) { return grid.cdf(t, params.xi); };

    double lo = -1.0, hi = 1.0;
    while (cdf_t(lo) > p) lo *= 2.0;
    while (cdf_t(hi) < p) hi *= 2.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++iter) {
        const double mid = (lo + hi) / 2.0;
        (cdf_t(mid) < p ? lo : hi) = mid;
    }
    return params.mu + params.sigma * (lo + hi) / 2.0;
}

double gent_draw(const GenTParams& params, Rng& rng) {
    const double z = rng.normal();
    const double v = rng.chi_squared(params.nu);
    return params.sigma * (z + params.xi) / std::sqrt(v / params.nu) + params.mu;
}

std::vector<double> gent_sample(const GenTParams& params, std::size_t n, std::uint64_t seed) {
    params.validate();
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = gent_draw(params, rng);
    return out;
}

GenTCdf::GenTCdf(const GenTParams& params) : params_(params) {
    params_.validate();
    const MixingGrid grid(params_.nu);

    // Tail smoothness in the compressed coordinate decays with nu, so the
    // node count ramps up toward the nu -> 2 boundary.
    std::size_t m = 1024;
    if (params_.nu < 4.0) m = 2048;
    if (params_.nu < 2.5) m = 4096;

    // Chebyshev nodes in y = atan(t / scale) / (pi/2); the compression
    // scale tracks the distribution's width in t units.
    scale_ = 3.0 * std::sqrt(params_.nu / (params_.nu - 2.0)) + std::abs(params_.xi);
    const double pi = std::numbers::pi;
    std::vector<double> values(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double theta = pi * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
        const double y = -std::cos(theta);  // ascending in k
        const double t = scale_ * std::tan(y * pi / 2.0);
        values[k] = grid.cdf(t, params_.xi);
    }

    // Chebyshev coefficients sampled at nodes of T_j(-cos theta): account
    // for the sign flip via parity, since T_j(-y) = (-1)^j T_j(y).
    auto raw = dct2(values);
    coeff_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        coeff_[j] = sign * 2.0 * raw[j] / static_cast<double>(m);
    }
    coeff_[0] /= 2.0;

    std::size_t keep = m;
    while (keep > 8 && std::abs(coeff_[keep - 1]) < 1e-13 && std::abs(coeff_[keep - 2]) < 1e-13)
        --keep;
    coeff_.resize(keep);
}

double GenTCdf::operator()(double x) const {
    const double t = (x - params_.mu) / params_.sigma;
    const double pi = std::numbers::pi;
    const double y = std::atan(t / scale_) / (pi / 2.0);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coeff_.size(); j-- > 1;) {
        const double b0 = 2.0 * y * b1 - b2 + coeff_[j];
        b2 = b1;
        b1 = b0;
    }
    const double value = y * b1 - b2 + coeff_[0];
    return std::min(1.0, std::max(0.0, value));
}

}  // namespace qclob
