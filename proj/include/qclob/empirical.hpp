#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qclob {

struct WeightedValue {
    double value = 0.0;
    double weight = 1.0;
};

// Weighted empirical distribution function. Atoms are the distinct sample
// values; weights follow frequency semantics (an event of size w counts as
// w observations).
class EmpiricalDistribution {
public:
    struct Atom {
        double value;
        double weight;
        double cumulative;  // running weight including this atom

        friend bool operator==(const Atom&, const Atom&) = default;
    };

    EmpiricalDistribution() = default;
    explicit EmpiricalDistribution(std::vector<WeightedValue> sample);

    static EmpiricalDistribution from_values(const std::vector<double>& values);

    bool empty() const { return atoms_.empty(); }
    std::size_t atom_count() const { return atoms_.size(); }
    double total_weight() const { return total_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double min() const { return atoms_.front().value; }
    double max() const { return atoms_.back().value; }

    // Right-continuous ECDF value at x.
    double cdf(double x) const;

    // Smallest atom value whose cumulative fraction reaches u.
    double quantile(double u) const;

    // Affine image a + b * x of the sample (b may be negative).
    EmpiricalDistribution affine(double a, double b) const;

    // Pools this sample with another, merging coincident atoms.
    static EmpiricalDistribution pool(const std::vector<const EmpiricalDistribution*>& parts);

private:
    std::vector<Atom> atoms_;
    double total_ = 0.0;
};

struct TrimmedMoments {
    double mean = 0.0;
    double stddev = 0.0;
    double weight_used = 0.0;   // observations inside the trim window
    double weight_trimmed = 0.0;
};

// Frequency-weighted mean and standard deviation over values with
// |value| <= threshold. Sample convention: Bessel denominator (sum w) - 1.
// Throws std::domain_error when fewer than two observations survive.
TrimmedMoments trimmed_moments(const std::vector<WeightedValue>& sample, double threshold);
TrimmedMoments trimmed_moments(const EmpiricalDistribution& dist, double threshold);

}  // namespace qclob
