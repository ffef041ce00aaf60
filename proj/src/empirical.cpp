#include "qclob/empirical.hpp"

#include <algorithm>
#include <cmath>

namespace qclob {

EmpiricalDistribution::EmpiricalDistribution(std::vector<WeightedValue> sample) {
    std::sort(sample.begin(), sample.end(),
              [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
    atoms_.reserve(sample.size());
    for (const auto& wv : sample) {
        if (wv.weight <= 0.0) continue;
        if (!atoms_.empty() && atoms_.back().value == wv.value) {
            atoms_.back().weight += wv.weight;
        } else {
            atoms_.push_back({wv.value, wv.weight, 0.0});
        }
    }
    double run = 0.0;
    for (auto& a : atoms_) {
        run += a.weight;
        a.cumulative = run;
    }
    total_ = run;
}

EmpiricalDistribution EmpiricalDistribution::from_values(const std::vector<double>& values) {
    std::vector<WeightedValue> sample;
    sample.reserve(values.size());
    for (double v : values) sample.push_back({v, 1.0});
    return EmpiricalDistribution(std::move(sample));
}

double EmpiricalDistribution::cdf(double x) const {
    if (atoms_.empty() || total_ <= 0.0) return 0.0;
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                               [](double lhs, const Atom& a) { return lhs < a.value; });
    if (it == atoms_.begin()) return 0.0;
    return std::prev(it)->cumulative / total_;
}

double EmpiricalDistribution::quantile(double u) const {
    if (atoms_.empty()) throw std::domain_error("quantile of empty distribution");
    const double target = u * total_;
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), target,
                               [](const Atom& a, double t) { return a.cumulative < t; });
    if (it == atoms_.end()) return atoms_.back().value;
    return it->value;
}

EmpiricalDistribution EmpiricalDistribution::affine(double a, double b) const {
    std::vector<WeightedValue> sample;
    sample.reserve(atoms_.size());
    for (const auto& atom : atoms_) sample.push_back({a + b * atom.value, atom.weight});
    return EmpiricalDistribution(std::move(sample));
}

EmpiricalDistribution EmpiricalDistribution::pool(
    const std::vector<const EmpiricalDistribution*>& parts) {
    std::vector<WeightedValue> sample;
    std::size_t n = 0;
    for (const auto* p : parts) n += p->atom_count();
    sample.reserve(n);
    for (const auto* p : parts)
        for (const auto& atom : p->atoms()) sample.push_back({atom.value, atom.weight});
    return EmpiricalDistribution(std::move(sample));
}

TrimmedMoments trimmed_moments(const std::vector<WeightedValue>& sample, double threshold) {
    double w_in = 0.0, w_out = 0.0, sum = 0.0;
    for (const auto& wv : sample) {
        if (wv.weight <= 0.0) continue;
        if (std::abs(wv.value) <= threshold) {
            w_in += wv.weight;
            sum += wv.weight * wv.value;
        } else {
            w_out += wv.weight;
        }
    }
    if (w_in < 2.0)
        throw std::domain_error("trimmed_moments: fewer than two observations within threshold");
    const double mean = sum / w_in;
    double ss = 0.0;
    for (const auto& wv : sample) {
        if (wv.weight <= 0.0 || std::abs(wv.value) > threshold) continue;
        const double d = wv.value - mean;
        ss += wv.weight * d * d;
    }
    TrimmedMoments out;
    out.mean = mean;
    out.stddev = std::sqrt(ss / (w_in - 1.0));
    out.weight_used = w_in;
    out.weight_trimmed = w_out;
    return out;
}

TrimmedMoments trimmed_moments(const EmpiricalDistribution& dist, double threshold) {
    std::vector<WeightedValue> sample;
    sample.reserve(dist.atom_count());
    for (const auto& a : dist.atoms()) sample.push_back({a.value, a.weight});
    return trimmed_moments(sample, threshold);
}

}  // namespace qclob
