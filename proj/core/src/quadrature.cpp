#include "diracspec/quadrature.hpp"

#include <stdexcept>

namespace dirac {

double simpson(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (v[0] + v[1]);
    const std::size_t intervals = n - 1;
    std::size_t even_end = intervals % 2 == 0 ? intervals : intervals - 3;
    double sum = 0.0;
    if (even_end > 0) {
        double acc = v[0] + v[even_end];
        for (std::size_t k = 1; k < even_end; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * v[k];
        sum = acc * h / 3.0;
    }
    if (intervals % 2 == 1) {
        const std::size_t k = even_end;
        sum += 3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]);
    }
    return sum;
}

std::vector<double> cumulative_simpson(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (v[0] + v[1]);
        return out;
    }
    for (std::size_t k = 0; k + 2 < n; k += 2) {
        // quadratic through (k, k+1, k+2)
        out[k + 1] = out[k] + h / 12.0 * (5.0 * v[k] + 8.0 * v[k + 1] - v[k + 2]);
        out[k + 2] = out[k] + h / 3.0 * (v[k] + 4.0 * v[k + 1] + v[k + 2]);
    }
    if ((n - 1) % 2 == 1) {
        const std::size_t k = n - 2;
        out[k + 1] = out[k] + h / 12.0 * (5.0 * v[k + 1] + 8.0 * v[k] - v[k - 1]);
    }
    return out;
}

std::vector<double> differentiate(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    if (n < 5) throw std::invalid_argument("differentiate: need at least 5 samples");
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * h);
    for (std::size_t k = 2; k + 2 < n; ++k)
        d[k] = c * (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]);
    d[0] = c * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    d[1] = c * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    d[n - 1] = -c * (-25.0 * v[n - 1] + 48.0 * v[n - 2] - 36.0 * v[n - 3] + 16.0 * v[n - 4] - 3.0 * v[n - 5]);
    d[n - 2] = -c * (-3.0 * v[n - 1] - 10.0 * v[n - 2] + 18.0 * v[n - 3] - 6.0 * v[n - 4] + v[n - 5]);
    return d;
}

}  // namespace dirac
