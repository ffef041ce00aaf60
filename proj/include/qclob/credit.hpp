#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qclob/types.hpp"

namespace qclob {

// Directed counterparty credit limits c(i,j) plus the running bilateral
// exposure per unordered pair. Missing limits default to 0 (no credit).
class CreditMatrix {
public:
    void register_institution(InstitutionId i) { known_.insert(i); }
    bool is_registered(InstitutionId i) const { return known_.count(i) != 0; }
    const std::set<InstitutionId>& institutions() const { return known_; }

    void set_limit(InstitutionId from, InstitutionId to, CreditAmount c) {
        require_pair(from, to);
        known_.insert(from);
        known_.insert(to);
        limits_[{from, to}] = c;
    }

    CreditAmount limit(InstitutionId from, InstitutionId to) const {
        require_pair(from, to);
        auto it = limits_.find({from, to});
        return it == limits_.end() ? CreditAmount(0) : it->second;
    }

    // min(c(i,j), c(j,i))
    CreditAmount bilateral_ccl(InstitutionId i, InstitutionId j) const {
        require_pair(i, j);
        return CreditAmount::min(limit(i, j), limit(j, i));
    }

    Lots exposure(InstitutionId i, InstitutionId j) const {
        require_pair(i, j);
        auto it = exposure_.find(unordered(i, j));
        return it == exposure_.end() ? 0 : it->second;
    }

    // Bilateral CCL minus exposure, floored at 0.
    CreditAmount headroom(InstitutionId i, InstitutionId j) const {
        return bilateral_ccl(i, j).minus(exposure(i, j));
    }

    void add_exposure(InstitutionId i, InstitutionId j, Lots traded) {
        require_pair(i, j);
        exposure_[unordered(i, j)] += traded;
    }

    std::vector<std::pair<InstitutionId, InstitutionId>> exposure_pairs() const {
        std::vector<std::pair<InstitutionId, InstitutionId>> out;
        out.reserve(exposure_.size());
        for (const auto& [pair, lots] : exposure_)
            if (lots > 0) out.push_back(pair);
        return out;
    }

private:
    static void require_pair(InstitutionId i, InstitutionId j) {
        if (i == j) throw std::invalid_argument("credit query requires two distinct institutions");
    }
    static std::pair<InstitutionId, InstitutionId> unordered(InstitutionId i, InstitutionId j) {
        return i < j ? std::pair{i, j} : std::pair{j, i};
    }

    std::map<std::pair<InstitutionId, InstitutionId>, CreditAmount> limits_;
    std::map<std::pair<InstitutionId, InstitutionId>, Lots> exposure_;
    std::set<InstitutionId> known_;
};

}  // namespace qclob
