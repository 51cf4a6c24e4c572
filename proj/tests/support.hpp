#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "diracspec/model.hpp"
#include "diracspec/spinor.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Exact propagator of y' = rho lambda B^{-1} y (zero potential) over length len.
inline dirac::Mat2 rotation(double rho, double lambda, double len) {
    const double t = rho * lambda * len;
    return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
}

/// Delta for a zero potential, composed from exact rotations and the forward jumps.
inline double delta(const dirac::ProblemSpec& s, double lambda) {
    dirac::Spinor y{lambda * s.alpha_prime[1] - s.alpha[1], lambda * s.alpha_prime[0] - s.alpha[0]};
    for (int i = 0; i < 3; ++i) {
        y = rotation(s.rho[i], lambda, s.segment_length(i)) * y;
        if (i < 2) {
            const auto& t = s.trans[i];
            y = dirac::Mat2{t.scale, 0.0, t.shift + lambda, 1.0 / t.scale} * y;
        }
    }
    return (lambda * s.gamma_prime[0] + s.gamma[0]) * y.y1 - (lambda * s.gamma_prime[1] + s.gamma[1]) * y.y2;
}

inline double delta_scale(double lambda) { return std::pow(1.0 + std::fabs(lambda), 4); }

/// Zeros of the oracle Delta in [lo, hi]: fine scan, then bisection.
inline std::vector<double> roots(const dirac::ProblemSpec& s, double lo, double hi, double step = 1e-3) {
    std::vector<double> out;
    double x0 = lo;
    double f0 = delta(s, x0);
    for (double x1 = lo + step; x0 < hi; x1 = std::min(hi, x1 + step)) {
        const double f1 = delta(s, x1);
        if (f0 == 0.0) {
            out.push_back(x0);
        } else if (f0 * f1 < 0.0) {
            double l = x0, r = x1, fl = f0;
            for (int k = 0; k < 200 && r - l > 1e-15 * std::max(1.0, std::fabs(l)); ++k) {
                const double m = 0.5 * (l + r);
                const double fm = delta(s, m);
                if ((fm < 0.0) == (fl < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            out.push_back(0.5 * (l + r));
        }
        x0 = x1;
        f0 = f1;
        if (x1 >= hi) break;
    }
    return out;
}

inline double nearest(const std::vector<double>& values, double x) {
    double best = INFINITY;
    for (double v : values) best = std::min(best, std::fabs(v - x));
    return best;
}

}  // namespace oracle

namespace testing {

inline std::filesystem::path data_dir() { return DIRACSPEC_DATA_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("diracspec_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline dirac::ProblemSpec with_constant_potential(dirac::ProblemSpec s, double p0, double q0 = 0.0,
                                                  double r0 = 0.0) {
    s.potential = dirac::PotentialField::constant(p0, q0, r0);
    return s;
}

}  // namespace testing
