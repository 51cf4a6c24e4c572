#include "diracspec/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

#include "diracspec/errors.hpp"
#include "diracspec/resolvent.hpp"

namespace dirac {

namespace {

double numerator(const ProblemSpec& spec, double lambda, const Grid& grid) {
    const Spinor pa = psi_at_left(spec, lambda, grid);
    return spec.alpha_prime[0] * pa.y1 - spec.alpha_prime[1] * pa.y2;
}

double m_unchecked(const ProblemSpec& spec, double lambda, const Grid& grid) {
    return numerator(spec, lambda, grid) / (spec.d1() * char_delta(spec, lambda, grid));
}

double checked_delta(const ProblemSpec& spec, double lambda, const Grid& grid) {
    const double delta = char_delta(spec, lambda, grid);
    if (!(std::fabs(delta) > near_spectrum_threshold(lambda))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "near spectrum: lambda too close to an eigenvalue (lambda = " << lambda << ")";
        throw NearSpectrumError(msg.str());
    }
    return delta;
}

/// Grid valid at lambda that coincides with `base` whenever base already resolves it.
Grid covering_grid(const ProblemSpec& spec, const Grid& base, double bound, double lambda) {
    return std::fabs(lambda) <= bound ? base : make_grid(spec, lambda);
}

}  // namespace

PiecewiseSolution weyl_solution(const ProblemSpec& spec, double lambda, const Grid& grid) {
    const double delta = checked_delta(spec, lambda, grid);
    auto sol = solve_psi(spec, lambda, grid);
    sol.kind = SolutionKind::weyl;
    for (auto& seg : sol.values)
        for (auto& y : seg) y = (1.0 / delta) * y;
    return sol;
}

PiecewiseSolution weyl_solution(const ProblemSpec& spec, double lambda) {
    return weyl_solution(spec, lambda, make_grid(spec, lambda));
}

double weyl_function(const ProblemSpec& spec, double lambda, const Grid& grid) {
    const double delta = checked_delta(spec, lambda, grid);
    return numerator(spec, lambda, grid) / (spec.d1() * delta);
}

double weyl_function(const ProblemSpec& spec, double lambda) {
    return weyl_function(spec, lambda, make_grid(spec, lambda));
}

double residue_at(const ProblemSpec& spec, const SpectralDatum& datum, const Grid& grid) {
    const double l = datum.lambda;
    const auto estimate = [&](double eps) {
        return 0.5 * eps * (m_unchecked(spec, l + eps, grid) - m_unchecked(spec, l - eps, grid));
    };
    const double e1 = estimate(1e-3);
    const double e2 = estimate(5e-4);
    const double e3 = estimate(2.5e-4);
    const double r1 = (4.0 * e2 - e1) / 3.0;
    const double r2 = (4.0 * e3 - e2) / 3.0;
    const double r = (16.0 * r2 - r1) / 15.0;
    if (!std::isfinite(r) || std::fabs(r1 - r2) > 1e-3 * std::fabs(r)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "residue extrapolation did not settle at lambda = " << l;
        throw NumericalError(msg.str());
    }
    return r;
}

WeylSample partial_fraction(const ProblemSpec& spec, double lambda, int N, const SpectrumWindow& spectrum) {
    if (N < 0) throw std::invalid_argument("partial_fraction: N must be nonnegative");
    WeylSample s;
    s.lambda = lambda;
    s.N = N;
    int found = 0;
    double sum = 0.0;
    for (const auto& d : spectrum.data) {
        if (d.n < -N || d.n > N) continue;
        if (!(d.mu > 0.0)) throw NumericalError("partial_fraction needs normalizers; run spectral_data first");
        sum += 1.0 / (d.mu * (d.lambda - lambda));
        ++found;
    }
    if (found != 2 * N + 1) {
        std::ostringstream msg;
        msg << "window too small for N = " << N << " (found " << found << " of " << 2 * N + 1 << " eigenvalues)";
        throw NumericalError(msg.str());
    }
    const double bound = std::max(std::fabs(spectrum.window.lo), std::fabs(spectrum.window.hi));
    s.m_value = weyl_function(spec, lambda, covering_grid(spec, spectrum.grid, bound, lambda));
    s.pf_truncated = sum;
    s.pf_error = std::fabs(s.m_value - sum);
    return s;
}

double char_delta1(const ProblemSpec& spec, double tau, const Grid& grid) { return numerator(spec, tau, grid); }

double char_delta1(const ProblemSpec& spec, double tau) { return char_delta1(spec, tau, make_grid(spec, tau)); }

std::vector<double> find_aux_eigenvalues(const ProblemSpec& spec, const Window& window, const ScanOptions& options) {
    if (window.empty()) return {};
    const Grid grid = window_grid(spec, window, options.grid);
    const auto f = [&](double t) { return numerator(spec, t, grid); };
    return roots_in(f, brackets_of(f, scan_points(spec, window, options, Characteristic::auxiliary)));
}

bool interlaced(const std::vector<double>& lambdas, const std::vector<double>& taus, double tol) {
    std::vector<std::pair<double, int>> all;
    for (double l : lambdas) all.emplace_back(l, 0);
    for (double t : taus) all.emplace_back(t, 1);
    std::sort(all.begin(), all.end());
    for (std::size_t k = 1; k < all.size(); ++k) {
        if (all[k].second == all[k - 1].second) return false;
        if (all[k].first - all[k - 1].first < tol) return false;
    }
    return true;
}

std::vector<double> midgap_grid(std::vector<double> values, double margin) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] - values[k - 1] > 10.0 * margin) out.push_back(0.5 * (values[k] + values[k - 1]));
    return out;
}

namespace {

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    const auto directed = [](const std::vector<double>& x, const std::vector<double>& y) {
        double worst = 0.0;
        for (double v : x) {
            double best = std::numeric_limits<double>::infinity();
            for (double w : y) best = std::min(best, std::fabs(v - w));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

const SpectralDatum* by_index(const SpectrumWindow& w, int n) {
    for (const auto& d : w.data)
        if (d.n == n) return &d;
    return nullptr;
}

const char* verdict(bool same) { return same ? "indistinguishable" : "distinct"; }

}  // namespace

ComparisonReport compare_problems(const ProblemSpec& a, const ProblemSpec& b, const Window& window,
                                  std::optional<std::vector<double>> weyl_grid, const CompareTolerances& tol,
                                  const ScanOptions& options) {
    validate(a);
    validate(b);
    ComparisonReport rep;
    rep.window = window;
    rep.tol = tol;
    const auto solve = [&](const ProblemSpec& spec) {
        return std::make_pair(spectral_data(spec, window, options), find_aux_eigenvalues(spec, window, options));
    };
    auto job_b = std::async(std::launch::async, solve, std::cref(b));
    const auto [sa, ta] = solve(a);
    const auto [sb, tb] = job_b.get();
    const auto la = sa.lambdas();
    const auto lb = sb.lambdas();
    rep.count_a = la.size();
    rep.count_b = lb.size();
    rep.aux_count_a = ta.size();
    rep.aux_count_b = tb.size();
    rep.lambda_distance = hausdorff(la, lb);
    rep.tau_distance = hausdorff(ta, tb);

    const double inf = std::numeric_limits<double>::infinity();
    if (la.size() == lb.size()) {
        for (std::size_t k = 0; k < la.size(); ++k)
            rep.mu_deviation = std::max(rep.mu_deviation, std::fabs(sa.data[k].mu - sb.data[k].mu) /
                                                              std::max(std::fabs(sa.data[k].mu), 1e-300));
    } else {
        rep.mu_deviation = inf;
    }
    for (int n = 0; n < 10; ++n) {
        const auto* da = by_index(sa, n);
        const auto* db = by_index(sb, n);
        if (!da && !db) continue;
        rep.max_index_deviation =
            (da && db) ? std::max(rep.max_index_deviation, std::fabs(da->lambda - db->lambda)) : inf;
    }

    std::vector<double> grid_points;
    if (weyl_grid) {
        grid_points = *weyl_grid;
    } else {
        auto merged = la;
        merged.insert(merged.end(), lb.begin(), lb.end());
        grid_points = midgap_grid(merged);
    }
    rep.weyl_points = grid_points.size();
    const double bound = std::max(std::fabs(window.lo), std::fabs(window.hi));
    for (double l : grid_points) {
        try {
            const double ma = weyl_function(a, l, covering_grid(a, sa.grid, bound, l));
            const double mb = weyl_function(b, l, covering_grid(b, sb.grid, bound, l));
            rep.weyl_deviation =
                std::max(rep.weyl_deviation, std::fabs(ma - mb) / std::max({1.0, std::fabs(ma), std::fabs(mb)}));
        } catch (const NearSpectrumError&) {
            rep.weyl_deviation = inf;
        }
    }

    const bool same_lambda = la.size() == lb.size() && rep.lambda_distance <= tol.eigenvalue;
    const bool same_tau = ta.size() == tb.size() && rep.tau_distance <= tol.eigenvalue;
    rep.weyl_verdict = rep.weyl_deviation <= tol.weyl_relative;
    rep.spectral_data_verdict = same_lambda && rep.mu_deviation <= tol.mu_relative;
    rep.two_spectra_verdict = same_lambda && same_tau;
    return rep;
}

std::string ComparisonReport::describe() const {
    std::ostringstream out;
    out.precision(6);
    out << "window: [" << window.lo << ", " << window.hi << "]\n";
    out << "eigenvalues: " << count_a << " vs " << count_b << ", hausdorff distance " << lambda_distance << "\n";
    out << "auxiliary eigenvalues: " << aux_count_a << " vs " << aux_count_b << ", hausdorff distance "
        << tau_distance << "\n";
    out << "normalizer max relative deviation: " << mu_deviation << "\n";
    out << "max eigenvalue deviation (n = 0..9): " << max_index_deviation << "\n";
    out << "weyl function max deviation over " << weyl_points << " mid-gap points: " << weyl_deviation << "\n";
    out << "tolerances: eigenvalue " << tol.eigenvalue << ", normalizer " << tol.mu_relative << ", weyl "
        << tol.weyl_relative << "\n";
    out << "weyl function: " << verdict(weyl_verdict) << "\n";
    out << "spectral data (lambda_n, mu_n): " << verdict(spectral_data_verdict) << "\n";
    out << "two spectra (lambda_n, tau_n): " << verdict(two_spectra_verdict) << "\n";
    out << "overall: " << verdict(indistinguishable()) << "\n";
    return out.str();
}

}  // namespace dirac
