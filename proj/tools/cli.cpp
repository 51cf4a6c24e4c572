#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "diracspec/errors.hpp"
#include "diracspec/inverse_fit.hpp"
#include "diracspec/propagate.hpp"
#include "diracspec/resolvent.hpp"
#include "diracspec/spectrum.hpp"
#include "diracspec/weyl.hpp"

namespace dirac::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string problem;
    std::vector<double> window;
    std::string out = ".";
    int grid = 0;
    double tol = -1.0;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Window window_of(const std::vector<double>& w) {
    if (w.size() != 2) throw InputError("--window needs two values");
    if (!(std::isfinite(w[0]) && std::isfinite(w[1]))) throw InputError("window bounds must be finite");
    if (w[0] > w[1]) throw InputError("window is reversed (lo > hi)");
    return {w[0], w[1]};
}

ScanOptions scan_options(const Common& c) {
    ScanOptions o;
    if (c.grid > 0) o.grid.steps_per_segment = c.grid + (c.grid % 2);
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path output_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (!fs::is_directory(p)) throw InputError("output directory " + dir + " is not writable");
    return p;
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw InputError("cannot write " + (dir / name).string());
    f << std::setprecision(17);
    return f;
}

void write_trajectory(std::ostream& f, const PiecewiseSolution& s) {
    f << "x,y1,y2,segment\n";
    for (int i = 0; i < kSegments; ++i) {
        const auto& v = s.values[static_cast<std::size_t>(i)];
        for (int k = 0; k < s.grid[i].size(); ++k)
            f << s.grid[i].node(k) << ',' << v[static_cast<std::size_t>(k)].y1 << ','
              << v[static_cast<std::size_t>(k)].y2 << ',' << i + 1 << '\n';
    }
}

int cmd_spectrum(const Common& c, bool aux, bool eigenfunctions, std::ostream& out) {
    const auto spec = load_problem(read_file(c.problem));
    const Window w = window_of(c.window);
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    const auto opts = scan_options(c);
    const auto data = spectral_data(spec, w, opts);
    std::vector<double> taus;
    if (aux) taus = find_aux_eigenvalues(spec, w, opts);

    const auto dir = output_dir(c.out);
    auto csv = open_csv(dir, "spectrum.csv");
    csv << "n,lambda,mu,kappa,delta_dot,lemma4_residual\n";
    out << std::setprecision(12);
    for (const auto& d : data.data) {
        csv << d.n << ',' << d.lambda << ',' << d.mu << ',' << d.kappa << ',' << d.delta_dot << ','
            << d.lemma4_residual << '\n';
        out << "n=" << d.n << " lambda=" << d.lambda << " mu=" << d.mu << " kappa=" << d.kappa
            << " delta_dot=" << d.delta_dot << " lemma4_residual=" << std::setprecision(3) << d.lemma4_residual
            << (d.lemma4_residual <= tol ? " ok" : " CHECK") << std::setprecision(12) << '\n';
    }
    for (const auto& warn : data.warnings) out << "warning: " << warn << '\n';
    out << data.size() << " eigenvalues in [" << w.lo << ", " << w.hi << "]\n";
    if (aux) {
        auto a = open_csv(dir, "aux_spectrum.csv");
        a << "k,tau\n";
        for (std::size_t k = 0; k < taus.size(); ++k) a << k << ',' << taus[k] << '\n';
        out << taus.size() << " auxiliary eigenvalues; interlacing "
            << (interlaced(data.lambdas(), taus) ? "holds" : "fails") << '\n';
    }
    if (eigenfunctions) {
        for (const auto& d : data.data) {
            auto f = open_csv(dir, "eigenfunction_" + std::to_string(d.n) + ".csv");
            write_trajectory(f, solve_phi(spec, d.lambda, data.grid));
        }
    }
    return kSuccess;
}

int cmd_delta_trace(const Common& c, int samples, std::ostream& out) {
    const auto spec = load_problem(read_file(c.problem));
    const Window w = window_of(c.window);
    if (samples < 2) throw InputError("--samples must be at least 2");
    const Grid grid = window_grid(spec, w, scan_options(c).grid);
    const auto dir = output_dir(c.out);
    auto csv = open_csv(dir, "delta_trace.csv");
    csv << "lambda,delta,delta0,sign_change\n";
    double prev = 0.0;
    int changes = 0;
    for (int k = 0; k < samples; ++k) {
        const double l = k == samples - 1 ? w.hi : w.lo + (w.hi - w.lo) * k / (samples - 1);
        const double d = char_delta(spec, l, grid);
        const bool change = k > 0 && ((prev < 0.0 && d >= 0.0) || (prev > 0.0 && d <= 0.0));
        changes += change;
        csv << l << ',' << d << ',' << char_delta0(spec, l) << ',' << (change ? 1 : 0) << '\n';
        prev = d;
    }
    out << samples << " samples, " << changes << " sign changes\n";
    return kSuccess;
}

int cmd_resolvent(const Common& c, double lambda, const std::string& rhs_path, std::ostream& out) {
    const auto spec = load_problem(read_file(c.problem));
    const auto rhs = rhs_path.empty() ? RhsField::zero() : load_rhs(read_file(rhs_path));
    const double tol = c.tol > 0 ? c.tol : 1e-6;
    Grid grid = make_grid(spec, lambda, scan_options(c).grid);
    const auto res = resolvent_apply(spec, lambda, rhs, grid);
    const auto dir = output_dir(c.out);
    {
        auto csv = open_csv(dir, "resolvent.csv");
        csv << "x,U1,U2,segment\n";
        for (int i = 0; i < kSegments; ++i)
            for (int k = 0; k < grid[i].size(); ++k) {
                const auto& u = res.u.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                csv << grid[i].node(k) << ',' << u.y1 << ',' << u.y2 << ',' << i + 1 << '\n';
            }
    }
    std::ostringstream rep;
    rep << std::setprecision(6);
    rep << "lambda: " << lambda << "\n";
    rep << "delta: " << res.delta << "\n";
    rep << "max |U|: " << res.residual.scale << "\n";
    rep << "equation residual: " << res.residual.equation << (res.residual.equation <= tol ? " ok" : " FAIL") << "\n";
    for (std::size_t k = 0; k < 6; ++k)
        rep << "condition l" << k + 1 << " residual: " << res.residual.conditions[k] << "\n";
    out << rep.str();
    std::ofstream(dir / "resolvent_report.txt") << rep.str();
    return kSuccess;
}

int cmd_weyl(const Common& c, int N, std::ostream& out) {
    const auto spec = load_problem(read_file(c.problem));
    const Window w = window_of(c.window);
    if (N < 0) throw InputError("--N must be nonnegative");
    const auto data = spectral_data(spec, w, scan_options(c));
    const auto grid_points = midgap_grid(data.lambdas());
    std::vector<WeylSample> samples;
    for (double l : grid_points) samples.push_back(partial_fraction(spec, l, N, data));
    if (grid_points.empty()) partial_fraction(spec, w.lo - 10.0, N, data);

    const auto dir = output_dir(c.out);
    auto csv = open_csv(dir, "weyl.csv");
    csv << "lambda,M,pf_truncated,pf_error,N\n";
    for (const auto& s : samples)
        csv << s.lambda << ',' << s.m_value << ',' << s.pf_truncated << ',' << s.pf_error << ',' << s.N << '\n';

    auto res = open_csv(dir, "residues.csv");
    res << "n,lambda,mu,residue,expected,relative_error\n";
    out << std::setprecision(10);
    for (const auto& d : data.data) {
        const double r = residue_at(spec, d, data.grid);
        const double expected = -1.0 / d.mu;
        const double rel = std::fabs(r - expected) / std::fabs(expected);
        res << d.n << ',' << d.lambda << ',' << d.mu << ',' << r << ',' << expected << ',' << rel << '\n';
        out << "n=" << d.n << " lambda=" << d.lambda << " residue=" << r << " -1/mu=" << expected
            << " relative_error=" << std::setprecision(3) << rel << std::setprecision(10) << '\n';
    }
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, s.pf_error);
    out << samples.size() << " mid-gap points, max partial-fraction error " << worst << " at N=" << N << '\n';
    return kSuccess;
}

int cmd_compare(const Common& c, const std::string& other, std::ostream& out) {
    const auto a = load_problem(read_file(c.problem));
    const auto b = load_problem(read_file(other));
    const Window w = window_of(c.window);
    CompareTolerances tol;
    if (c.tol > 0) tol.eigenvalue = c.tol;
    const auto rep = compare_problems(a, b, w, std::nullopt, tol, scan_options(c));
    const auto text = rep.describe();
    out << text;
    const auto dir = output_dir(c.out);
    std::ofstream(dir / "compare_report.txt") << text;
    return kSuccess;
}

std::vector<double> read_column(const std::string& path, const std::string& column) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + " is empty");
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) throw InputError(path + " has no column '" + column + "'");
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        for (std::size_t k = 0; k <= col; ++k)
            if (!std::getline(ls, cell, ',')) throw InputError(path + ": short row");
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
        } catch (const std::exception&) {
            throw InputError(path + ": bad number '" + cell + "'");
        }
    }
    return out;
}

bool has_column(const std::string& path, const std::string& column) {
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        if (cell == column) return true;
    return false;
}

int cmd_fit(const Common& c, const std::string& family_path, const std::string& target_path,
            const std::string& aux_path, int max_iterations, int grid_points, std::ostream& out) {
    const auto family = load_family(read_file(family_path));
    FitTarget target;
    target.lambdas = read_column(target_path, "lambda");
    if (target.lambdas.empty()) throw InputError("target spectrum is empty");
    std::sort(target.lambdas.begin(), target.lambdas.end());
    if (family.data == FitData::spectral_data) {
        if (!has_column(target_path, "mu")) throw InputError("spectral-data fits need a mu column");
        target.mus = read_column(target_path, "mu");
    }
    if (family.data == FitData::two_spectra) {
        if (aux_path.empty()) throw InputError("two-spectra fits need --aux-target");
        auto taus = read_column(aux_path, "tau");
        std::sort(taus.begin(), taus.end());
        target.taus = taus;
    }
    if (!c.window.empty()) {
        target.window = window_of(c.window);
    } else {
        std::vector<double> all = target.lambdas;
        if (target.taus) all.insert(all.end(), target.taus->begin(), target.taus->end());
        std::sort(all.begin(), all.end());
        const double pad_lo = all.size() > 1 ? 0.5 * (all[1] - all[0]) : 0.5;
        const double pad_hi = all.size() > 1 ? 0.5 * (all.back() - all[all.size() - 2]) : 0.5;
        target.window = {all.front() - pad_lo, all.back() + pad_hi};
    }
    FitConfig cfg;
    cfg.max_iterations = max_iterations;
    cfg.grid_points = grid_points;
    cfg.scan = scan_options(c);
    const auto res = fit_parameters(family, target, cfg);

    const auto dir = output_dir(c.out);
    {
        auto csv = open_csv(dir, "fit_trace.csv");
        csv << "iteration,phase,mismatch";
        for (const auto& p : family.free) csv << ',' << slot_name(p.slot);
        csv << '\n';
        for (const auto& row : res.trace) {
            csv << row.iteration << ',' << row.phase << ',' << row.mismatch;
            for (double v : row.values) csv << ',' << v;
            csv << '\n';
        }
    }
    std::ostringstream rep;
    rep << std::setprecision(12);
    rep << "family:";
    for (const auto& p : family.free) rep << ' ' << slot_name(p.slot) << " in [" << p.lo << ", " << p.hi << "]";
    rep << "\ndata: "
        << (family.data == FitData::eigenvalues ? "eigenvalues"
            : family.data == FitData::spectral_data ? "eigenvalues and normalizers"
                                                    : "two spectra")
        << "\nwindow: [" << target.window.lo << ", " << target.window.hi << "]\n";
    for (std::size_t k = 0; k < family.free.size(); ++k)
        rep << "recovered " << slot_name(family.free[k].slot) << " = " << res.values[k] << "\n";
    rep << "initial mismatch: " << res.initial_mismatch << "\n";
    rep << "final mismatch: " << res.mismatch << "\n";
    rep << "simplex iterations: " << res.iterations << "\n";
    rep << "mismatch evaluations: " << res.evaluations << "\n";
    rep << "converged: " << (res.converged ? "yes" : "no") << "\n";
    out << rep.str();
    std::ofstream(dir / "fit_report.txt") << rep.str();
    return res.converged ? kSuccess : kNotConverged;
}

void add_common(CLI::App* cmd, Common& c, bool window_required) {
    cmd->add_option("--problem", c.problem, "Problem document (JSON)")->required();
    auto* w = cmd->add_option("--window", c.window, "Spectral window lo hi")->expected(2)->allow_extra_args(false);
    if (window_required) w->required();
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--grid", c.grid, "Minimum RK4 steps per segment");
    cmd->add_option("--tol", c.tol, "Tolerance override");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral toolkit for Dirac operators with eigenparameter-dependent conditions", "diracspec"};
    app.require_subcommand(1);

    Common common;
    bool aux = false, eigenfunctions = false;
    int samples = 1001, N = 25, max_iterations = 400, grid_points = 7;
    double lambda = 0.0;
    std::string rhs, other, family, target, aux_target;

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and spectral data in a window");
    add_common(spectrum, common, true);
    spectrum->add_flag("--aux", aux, "Also write the auxiliary spectrum");
    spectrum->add_flag("--eigenfunctions", eigenfunctions, "Write one trajectory CSV per eigenvalue");

    auto* trace = app.add_subcommand("delta-trace", "Sampled characteristic function");
    add_common(trace, common, false);
    trace->add_option("--range", common.window, "Range lo hi")->expected(2)->allow_extra_args(false);
    trace->add_option("--samples", samples, "Number of samples");

    auto* resolvent = app.add_subcommand("resolvent", "Apply the resolvent to a right-hand side");
    add_common(resolvent, common, false);
    resolvent->add_option("--lambda", lambda, "Spectral parameter")->required();
    resolvent->add_option("--rhs", rhs, "Right-hand side document (JSON)");

    auto* weyl = app.add_subcommand("weyl", "Weyl function, partial fractions and residues");
    add_common(weyl, common, true);
    weyl->add_option("--N", N, "Truncation order of the partial-fraction sum");

    auto* compare = app.add_subcommand("compare", "Compare two problems spectrally");
    add_common(compare, common, true);
    compare->add_option("--other", other, "Second problem document")->required();

    auto* fit = app.add_subcommand("fit", "Recover family parameters from target spectra");
    fit->add_option("--family", family, "Family document (JSON)")->required();
    fit->add_option("--target", target, "Target spectrum CSV (lambda and optional mu columns)")->required();
    fit->add_option("--aux-target", aux_target, "Target auxiliary spectrum CSV (tau column)");
    fit->add_option("--window", common.window, "Spectral window lo hi")->expected(2)->allow_extra_args(false);
    fit->add_option("--out", common.out, "Output directory");
    fit->add_option("--grid", common.grid, "Minimum RK4 steps per segment");
    fit->add_option("--max-iterations", max_iterations, "Simplex iteration cap");
    fit->add_option("--grid-points", grid_points, "Coarse grid points per dimension");

    std::vector<std::string> argv_store{"diracspec"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(common, aux, eigenfunctions, out);
        if (trace->parsed()) {
            if (common.window.empty()) throw InputError("delta-trace needs --range lo hi");
            return cmd_delta_trace(common, samples, out);
        }
        if (resolvent->parsed()) return cmd_resolvent(common, lambda, rhs, out);
        if (weyl->parsed()) return cmd_weyl(common, N, out);
        if (compare->parsed()) return cmd_compare(common, other, out);
        if (fit->parsed()) return cmd_fit(common, family, target, aux_target, max_iterations, grid_points, out);
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const Error& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::out_of_range& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace dirac::cli
