#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diracspec/model.hpp"
#include "diracspec/propagate.hpp"
#include "diracspec/spectrum.hpp"

namespace dirac {

/// Phi(x, lambda) = psi(x, lambda) / Delta(lambda). Throws NearSpectrumError.
PiecewiseSolution weyl_solution(const ProblemSpec& spec, double lambda, const Grid& grid);
PiecewiseSolution weyl_solution(const ProblemSpec& spec, double lambda);

/// M(lambda) = (a'_1 psi_1(a) - a'_2 psi_2(a)) / (d1 Delta). Throws NearSpectrumError.
double weyl_function(const ProblemSpec& spec, double lambda, const Grid& grid);
double weyl_function(const ProblemSpec& spec, double lambda);

/// Residue of M at an eigenvalue: the symmetric average of (lambda - lambda_n) M
/// at lambda_n +- eps for eps in {1e-3, 5e-4, 2.5e-4}, extrapolated in eps^2.
/// Throws NumericalError when the extrapolation does not settle.
double residue_at(const ProblemSpec& spec, const SpectralDatum& datum, const Grid& grid);

struct WeylSample {
    double lambda = 0.0;
    double m_value = 0.0;
    double pf_truncated = 0.0;
    double pf_error = 0.0;
    int N = 0;
};

/// Sum of 1 / (mu_n (lambda_n - lambda)) over |n| <= N against M(lambda).
/// Throws NumericalError("window too small ...") if some index is missing.
WeylSample partial_fraction(const ProblemSpec& spec, double lambda, int N, const SpectrumWindow& spectrum);

/// Characteristic function of the auxiliary problem with left condition
/// a'_1 y1(a) - a'_2 y2(a) = 0.
double char_delta1(const ProblemSpec& spec, double tau, const Grid& grid);
double char_delta1(const ProblemSpec& spec, double tau);

/// Zeros of char_delta1 in the window.
std::vector<double> find_aux_eigenvalues(const ProblemSpec& spec, const Window& window,
                                         const ScanOptions& options = {});

/// True when the merged sorted sequence alternates between the two sets;
/// values closer than tol are treated as a violation.
bool interlaced(const std::vector<double>& lambdas, const std::vector<double>& taus, double tol = 1e-6);

/// Midpoints of consecutive values whose gap exceeds 10 * margin.
std::vector<double> midgap_grid(std::vector<double> values, double margin = 1e-3);

struct CompareTolerances {
    double eigenvalue = 1e-7;
    double mu_relative = 1e-6;
    double weyl_relative = 1e-6;
};

struct ComparisonReport {
    Window window;
    CompareTolerances tol;
    std::size_t count_a = 0, count_b = 0;
    std::size_t aux_count_a = 0, aux_count_b = 0;
    double lambda_distance = 0.0;  ///< Hausdorff distance of the eigenvalue sets
    double tau_distance = 0.0;     ///< Hausdorff distance of the auxiliary eigenvalue sets
    double mu_deviation = 0.0;     ///< max relative normalizer difference, index-matched
    double weyl_deviation = 0.0;   ///< max |M_A - M_B| / max(1, |M_A|) on the mid-gap grid
    double max_index_deviation = 0.0;  ///< max |lambda_n - lambda~_n| over n = 0..9
    std::size_t weyl_points = 0;
    bool weyl_verdict = false;         ///< Weyl function agreement
    bool spectral_data_verdict = false;  ///< {lambda_n, mu_n} agreement
    bool two_spectra_verdict = false;    ///< {lambda_n}, {tau_n} agreement

    bool indistinguishable() const { return weyl_verdict && spectral_data_verdict && two_spectra_verdict; }
    /// Multi-line text report with one verdict line per criterion.
    std::string describe() const;
};

/// Compares two problems on a window. The Weyl grid defaults to the mid-gaps of
/// the union of both spectra, so the verdict is symmetric in A and B.
ComparisonReport compare_problems(const ProblemSpec& a, const ProblemSpec& b, const Window& window,
                                  std::optional<std::vector<double>> weyl_grid = std::nullopt,
                                  const CompareTolerances& tol = {}, const ScanOptions& options = {});

}  // namespace dirac
