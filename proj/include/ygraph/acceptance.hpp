#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ygraph {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    /// The measured quantity that decides the criterion and its bound.
    double value = 0, bound = 0;
    std::string detail;
    double seconds = 0, budget = 0;
};

struct AcceptanceOptions {
    /// Shorter Picard horizon and no refined scaling runs; same tolerances.
    bool quick = false;
    /// Criterion ids to run; empty runs all.
    std::vector<int> only;
    /// Called after each criterion.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// "[PASS]  3 forcing trace laws  value 1.2e-04 <= 5e-03  (12.3 s)  detail"
std::string format_result(const CriterionResult& r);

} // namespace ygraph
