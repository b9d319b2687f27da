#pragma once

#include <map>
#include <string>
#include <vector>

#include "mhdlab/io.hpp"

namespace mhdlab {

// One verified inequality: LHS <= constant * RHS, with the empirical margin
// (rhs - lhs after scaling) and the statement tag it checks.
struct EstimateReport {
    std::string tag;        // e.g. "Lemma 2.1 / (twomore)"
    std::string name;       // machine id, e.g. "smoothing.lq"
    double lhs = 0;
    double rhs = 0;
    double constant = 1.0;  // fitted or asserted multiplicative constant
    double margin = 0;      // constant*rhs - lhs
    bool pass = false;
    std::map<std::string, double> details;

    static EstimateReport check(std::string tag, std::string name, double lhs, double rhs,
                                double tol, double constant = 1.0) {
        EstimateReport r;
        r.tag = std::move(tag);
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        r.constant = constant;
        r.margin = constant * rhs - lhs;
        r.pass = r.margin >= -tol;
        return r;
    }

    std::string summary_line() const {
        std::string s = pass ? "PASS  " : "FAIL  ";
        s += name + "  [" + tag + "]  lhs=" + format_full(lhs) + " rhs=" + format_full(rhs) +
             " constant=" + format_full(constant) + " margin=" + format_full(margin);
        return s;
    }
};

inline bool all_pass(const std::vector<EstimateReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

}  // namespace mhdlab
