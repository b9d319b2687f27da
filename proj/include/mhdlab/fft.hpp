#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "mhdlab/grid.hpp"

namespace mhdlab {
namespace detail {

// Cached unaligned c2c plans keyed by (d, n, sign). Plans created with
// FFTW_UNALIGNED so they can be executed on any buffer via fftw_execute_dft.
class PlanCache {
  public:
    static fftw_plan get(const Grid& g, int sign) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto key = std::make_tuple(g.d, g.n, sign);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        std::vector<std::complex<double>> scratch(g.size());
        int dims[3] = {g.n, g.n, g.n};
        fftw_plan p = fftw_plan_dft(
            g.d, dims, reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        cache.plans_.emplace(key, p);
        return p;
    }

  private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace detail

// Spectral amplitudes c_m -> physical samples f(x_j) = sum_m c_m e^{i m.j 2pi/n}.
inline std::vector<std::complex<double>> to_physical(const Grid& g,
                                                     const std::vector<std::complex<double>>& coeffs) {
    std::vector<std::complex<double>> out(coeffs);
    fftw_plan p = detail::PlanCache::get(g, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

// Physical samples -> spectral amplitudes (with the 1/n^d normalization).
inline std::vector<std::complex<double>> to_spectral(const Grid& g,
                                                     const std::vector<std::complex<double>>& phys) {
    std::vector<std::complex<double>> out(phys);
    fftw_plan p = detail::PlanCache::get(g, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : out) c *= scale;
    return out;
}

}  // namespace mhdlab
