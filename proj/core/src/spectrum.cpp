#include "diracspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "diracspec/errors.hpp"
#include "diracspec/propagate.hpp"

namespace dirac {

std::vector<double> SpectrumWindow::lambdas() const {
    std::vector<double> out;
    out.reserve(data.size());
    for (const auto& d : data) out.push_back(d.lambda);
    return out;
}

double asymptotic_spacing(const ProblemSpec& spec) { return std::numbers::pi / spec.optical_length(); }

Grid window_grid(const ProblemSpec& spec, const Window& window, const GridOptions& options) {
    return make_grid(spec, std::max(std::fabs(window.lo), std::fabs(window.hi)), options);
}

namespace {

/// Roots lambda = (theta0 + k pi) / c of a factor in the phase t = c lambda.
void factor_roots(double theta0, double c, double lo, double hi, std::vector<double>& out) {
    const double pi = std::numbers::pi;
    const auto k0 = static_cast<long>(std::ceil((lo * c - theta0) / pi));
    const auto k1 = static_cast<long>(std::floor((hi * c - theta0) / pi));
    for (long k = k0; k <= k1; ++k) out.push_back((theta0 + static_cast<double>(k) * pi) / c);
}

}  // namespace

std::vector<double> scan_points(const ProblemSpec& spec, const Window& window, const ScanOptions& options,
                                Characteristic which) {
    std::vector<double> pts;
    if (window.empty()) return pts;
    const double spacing = asymptotic_spacing(spec);
    const double step = std::clamp(options.step_fraction, 1e-3, 0.5) * spacing;
    const auto n = static_cast<long>(std::ceil((window.hi - window.lo) / step));
    for (long k = 0; k < n; ++k) pts.push_back(window.lo + static_cast<double>(k) * step);
    pts.push_back(window.hi);

    std::vector<double> centres{0.0};
    const double lo = window.lo - 0.5 * spacing;
    const double hi = window.hi + 0.5 * spacing;
    const double left_phase = which == Characteristic::main ? std::atan2(spec.alpha_prime[1], spec.alpha_prime[0])
                                                            : std::atan2(-spec.alpha_prime[1], spec.alpha_prime[0]);
    factor_roots(left_phase, spec.rho[0] * spec.segment_length(0), lo, hi, centres);
    factor_roots(0.0, spec.rho[1] * spec.segment_length(1), lo, hi, centres);
    factor_roots(std::atan2(-spec.gamma_prime[1], spec.gamma_prime[0]), spec.rho[2] * spec.segment_length(2), lo,
                 hi, centres);
    const int m = std::max(2, options.refine_points);
    for (double c : centres) {
        for (int j = 0; j <= m; ++j) {
            const double x = c + spacing * (static_cast<double>(j) / m - 0.5);
            if (x >= window.lo && x <= window.hi) pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<Bracket> brackets_of(const std::function<double(double)>& f, const std::vector<double>& points) {
    std::vector<Bracket> out;
    if (points.empty()) return out;
    double prev = f(points[0]);
    if (prev == 0.0) out.push_back({points[0], points[0]});
    for (std::size_t k = 1; k < points.size(); ++k) {
        const double cur = f(points[k]);
        if (cur == 0.0)
            out.push_back({points[k], points[k]});
        else if (prev != 0.0 && std::signbit(prev) != std::signbit(cur))
            out.push_back({points[k - 1], points[k]});
        prev = cur;
    }
    return out;
}

std::vector<Bracket> seed_grid(const ProblemSpec& spec, const Window& window, const ScanOptions& options) {
    const Grid grid = window_grid(spec, window, options.grid);
    return brackets_of([&](double l) { return char_delta(spec, l, grid); }, scan_points(spec, window, options));
}

double refine_root(const std::function<double(double)>& f, const Bracket& bracket) {
    double lo = bracket.lo, hi = bracket.hi;
    if (lo == hi) return lo;
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    const double tol = 1e-12 * std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    double best = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
    double fbest = std::min(std::fabs(flo), std::fabs(fhi));
    for (int it = 0; it < 3 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= lo && x2 <= hi)) break;
        const double f2 = f(x2);
        if (std::fabs(f2) < fbest) {
            best = x2;
            fbest = std::fabs(f2);
        }
        if (f2 == 0.0) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    return best;
}

std::vector<double> roots_in(const std::function<double(double)>& f, const std::vector<Bracket>& brackets) {
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (const auto& b : brackets) roots.push_back(refine_root(f, b));
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() && r - merged.back() <= 1e-9 * std::max(1.0, std::fabs(r))) continue;
        if (!merged.empty() && r - merged.back() < 1e-7) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "near-degenerate pair at " << merged.back() << " and " << r;
            throw NumericalError(msg.str());
        }
        merged.push_back(r);
    }
    return merged;
}

double delta_dot(const std::function<double(double)>& f, double lambda) {
    const double h = 1e-5 * std::max(1.0, std::fabs(lambda));
    const double d1 = (f(lambda + h) - f(lambda - h)) / (2.0 * h);
    const double d2 = (f(lambda + 0.5 * h) - f(lambda - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

double delta_dot(const ProblemSpec& spec, double lambda, const Grid& grid) {
    return delta_dot([&](double l) { return char_delta(spec, l, grid); }, lambda);
}

SpectrumWindow find_eigenvalues(const ProblemSpec& spec, const Window& window, const ScanOptions& options) {
    SpectrumWindow out;
    out.window = window;
    const double spacing = asymptotic_spacing(spec);
    out.scan_step = std::clamp(options.step_fraction, 1e-3, 0.5) * spacing;
    out.grid = window_grid(spec, window, options.grid);
    if (window.empty()) return out;

    const auto f = [&](double l) { return char_delta(spec, l, out.grid); };
    const auto roots = roots_in(f, brackets_of(f, scan_points(spec, window, options)));

    const auto first_nonneg = std::lower_bound(roots.begin(), roots.end(), 0.0) - roots.begin();
    for (std::size_t k = 0; k < roots.size(); ++k) {
        SpectralDatum d;
        d.n = static_cast<int>(static_cast<long>(k) - first_nonneg);
        d.lambda = roots[k];
        d.delta_dot = delta_dot(f, roots[k]);
        const double scale = std::pow(1.0 + std::fabs(roots[k]), 4);
        if (!(std::fabs(d.delta_dot) > 1e-12 * scale)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "non-simple root at " << roots[k];
            throw NumericalError(msg.str());
        }
        out.data.push_back(d);
    }
    for (std::size_t k = 1; k < roots.size(); ++k) {
        if (roots[k] - roots[k - 1] > 3.0 * spacing) {
            std::ostringstream msg;
            msg.precision(10);
            msg << "possible missed root between " << roots[k - 1] << " and " << roots[k];
            out.warnings.push_back(msg.str());
        }
    }
    return out;
}

Element eigen_element(const ProblemSpec& spec, double lambda_n, const Grid& grid) {
    auto phi = solve_phi(spec, lambda_n, grid);
    return domain_element_from_samples(spec, grid, std::move(phi.values));
}

double normalizer(const ProblemSpec& spec, double lambda_n, const Grid& grid) {
    const Element e = eigen_element(spec, lambda_n, grid);
    const double mu = inner_product(e, e, spec);
    if (!(mu > 0.0)) throw NumericalError("normalizer is not positive");
    return mu;
}

double normalizer(const ProblemSpec& spec, double lambda_n) {
    return normalizer(spec, lambda_n, make_grid(spec, lambda_n));
}

double kappa(const ProblemSpec& spec, double lambda_n, const Grid& grid) {
    const auto psi = solve_psi(spec, lambda_n, grid);
    const Spinor pa = psi.values[0].front();
    return (spec.alpha_prime[0] * pa.y1 - spec.alpha_prime[1] * pa.y2) / spec.d1();
}

double kappa(const ProblemSpec& spec, double lambda_n) { return kappa(spec, lambda_n, make_grid(spec, lambda_n)); }

SpectrumWindow spectral_data(const ProblemSpec& spec, const Window& window, const ScanOptions& options) {
    auto out = find_eigenvalues(spec, window, options);
    for (auto& d : out.data) {
        d.mu = normalizer(spec, d.lambda, out.grid);
        d.kappa = kappa(spec, d.lambda, out.grid);
        d.lemma4_residual = std::fabs(d.delta_dot + d.kappa * d.mu) / std::max(1.0, std::fabs(d.delta_dot));
    }
    return out;
}

std::vector<std::vector<double>> gram_matrix(const ProblemSpec& spec, const SpectrumWindow& spectrum) {
    std::vector<Element> elems;
    elems.reserve(spectrum.data.size());
    for (const auto& d : spectrum.data) elems.push_back(eigen_element(spec, d.lambda, spectrum.grid));
    const std::size_t n = elems.size();
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) g[i][j] = g[j][i] = inner_product(elems[i], elems[j], spec);
    return g;
}

std::vector<std::vector<double>> gram_matrix(const ProblemSpec& spec, const Window& window,
                                             const ScanOptions& options) {
    return gram_matrix(spec, find_eigenvalues(spec, window, options));
}

}  // namespace dirac
