#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace mhdlab {

enum class Provenance { PaperFormula, EnsembleMax };

// The constant bundle assembled by the local-existence argument. M2 is
// recomputed from its ingredients; c-constants and the two prefactors are
// ensemble maxima (lower bounds for the true suprema), never "the" constants.
struct MhdConstants {
    double M0 = 0;     // ||u0||^2 + ||B0||^2
    double M1 = 0;     // ||u0||_{H^{s-1+eps}}
    double M2 = 0;     // 2^{2(1+eps)} c2 ||B0||_{H^s}^{2(1+eps)} + 2^4 c3 ||B0||_{H^s}^4 + 2 M0
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
    double C_eps = 0, C_r = 0;
    double b0_hs = 0;  // ||B0||_{H^s}
    double eps = 0;
    std::map<std::string, Provenance> provenance;

    double m2_from_ingredients() const {
        return std::pow(2.0, 2 * (1 + eps)) * c2 * std::pow(b0_hs, 2 * (1 + eps)) +
               16.0 * c3 * std::pow(b0_hs, 4) + 2.0 * M0;
    }

    void validate() const {
        if (M0 < 0 || M1 < 0 || M2 < 0) throw std::invalid_argument("MhdConstants: negative M");
        double m2 = m2_from_ingredients();
        if (std::abs(m2 - M2) > 1e-9 * std::max(1.0, std::abs(m2)))
            throw std::invalid_argument("MhdConstants: stored M2 disagrees with its ingredients");
    }
};

}  // namespace mhdlab
