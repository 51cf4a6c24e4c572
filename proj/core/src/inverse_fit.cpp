#include "diracspec/inverse_fit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "diracspec/errors.hpp"
#include "diracspec/weyl.hpp"

namespace dirac {

namespace {

constexpr std::array<std::pair<Slot, const char*>, 15> kSlotNames{{
    {Slot::p0, "p0"},
    {Slot::q0, "q0"},
    {Slot::r0, "r0"},
    {Slot::alpha1, "alpha1"},
    {Slot::alpha2, "alpha2"},
    {Slot::alpha3, "alpha3"},
    {Slot::alpha4, "alpha4"},
    {Slot::alpha5, "alpha5"},
    {Slot::alpha6, "alpha6"},
    {Slot::alpha_prime1, "alpha_prime1"},
    {Slot::alpha_prime2, "alpha_prime2"},
    {Slot::gamma1, "gamma1"},
    {Slot::gamma2, "gamma2"},
    {Slot::gamma_prime1, "gamma_prime1"},
    {Slot::gamma_prime2, "gamma_prime2"},
}};

}  // namespace

std::string slot_name(Slot s) {
    for (const auto& [slot, name] : kSlotNames)
        if (slot == s) return name;
    return "?";
}

Slot slot_from_name(std::string_view name) {
    for (const auto& [slot, n] : kSlotNames)
        if (name == n) return slot;
    throw ParseError("unknown parameter slot '" + std::string(name) + "'");
}

double get_slot(const ProblemSpec& s, Slot slot) {
    const auto& c = s.potential.constant_value();
    switch (slot) {
        case Slot::p0: return c.p;
        case Slot::q0: return c.q;
        case Slot::r0: return c.r;
        case Slot::alpha1: return s.alpha[0];
        case Slot::alpha2: return s.alpha[1];
        case Slot::alpha3: return s.trans[0].scale;
        case Slot::alpha4: return s.trans[0].shift;
        case Slot::alpha5: return s.trans[1].scale;
        case Slot::alpha6: return s.trans[1].shift;
        case Slot::alpha_prime1: return s.alpha_prime[0];
        case Slot::alpha_prime2: return s.alpha_prime[1];
        case Slot::gamma1: return s.gamma[0];
        case Slot::gamma2: return s.gamma[1];
        case Slot::gamma_prime1: return s.gamma_prime[0];
        case Slot::gamma_prime2: return s.gamma_prime[1];
    }
    return 0.0;
}

void set_slot(ProblemSpec& s, Slot slot, double v) {
    if (slot == Slot::p0 || slot == Slot::q0 || slot == Slot::r0) {
        if (s.potential.kind() == PotentialField::Kind::table)
            throw ValidationError("potential slots need a zero or constant potential");
        auto c = s.potential.constant_value();
        (slot == Slot::p0 ? c.p : slot == Slot::q0 ? c.q : c.r) = v;
        s.potential = PotentialField::constant(c.p, c.q, c.r);
        return;
    }
    switch (slot) {
        case Slot::alpha1: s.alpha[0] = v; break;
        case Slot::alpha2: s.alpha[1] = v; break;
        case Slot::alpha3: s.trans[0].scale = v; break;
        case Slot::alpha4: s.trans[0].shift = v; break;
        case Slot::alpha5: s.trans[1].scale = v; break;
        case Slot::alpha6: s.trans[1].shift = v; break;
        case Slot::alpha_prime1: s.alpha_prime[0] = v; break;
        case Slot::alpha_prime2: s.alpha_prime[1] = v; break;
        case Slot::gamma1: s.gamma[0] = v; break;
        case Slot::gamma2: s.gamma[1] = v; break;
        case Slot::gamma_prime1: s.gamma_prime[0] = v; break;
        case Slot::gamma_prime2: s.gamma_prime[1] = v; break;
        default: break;
    }
}

ProblemSpec ParameterFamily::at(const std::vector<double>& values) const {
    if (values.size() != free.size()) throw std::invalid_argument("parameter vector has the wrong length");
    ProblemSpec s = base;
    for (std::size_t k = 0; k < free.size(); ++k) set_slot(s, free[k].slot, values[k]);
    return s;
}

std::vector<double> ParameterFamily::base_values() const {
    std::vector<double> out;
    for (const auto& p : free) out.push_back(std::clamp(get_slot(base, p.slot), p.lo, p.hi));
    return out;
}

void validate_family(const ParameterFamily& family) {
    validate(family.base);
    if (family.free.empty()) throw ValidationError("family has no free parameters");
    if (family.free.size() > 12) throw ValidationError("family has too many free parameters");
    for (std::size_t k = 0; k < family.free.size(); ++k) {
        const auto& p = family.free[k];
        if (!(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo <= p.hi))
            throw ValidationError("bounds of " + slot_name(p.slot) + " are not an ordered finite pair");
        for (std::size_t j = 0; j < k; ++j)
            if (family.free[j].slot == p.slot) throw ValidationError("slot " + slot_name(p.slot) + " listed twice");
        if (family.data == FitData::two_spectra &&
            (p.slot == Slot::alpha1 || p.slot == Slot::alpha2 || p.slot == Slot::alpha_prime1 ||
             p.slot == Slot::alpha_prime2))
            throw ValidationError("two-spectra fits cannot free " + slot_name(p.slot));
    }
    // d1 and d2 are multilinear in the slots and positivity is linear, so corners suffice.
    const std::size_t n = family.free.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = (mask >> k) & 1U ? family.free[k].hi : family.free[k].lo;
        try {
            validate(family.at(v));
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("family box contains an invalid problem: ") + e.what());
        }
    }
}

ParameterFamily load_family(std::string_view text) {
    using json = nlohmann::json;
    ParameterFamily fam;
    fam.base = load_problem(text);
    const json doc = json::parse(text);
    if (!doc.contains("family") || !doc["family"].is_object()) throw ParseError("missing field family");
    const auto& f = doc["family"];
    if (!f.contains("free") || !f["free"].is_array()) throw ParseError("family.free must be an array");
    for (const auto& p : f["free"]) {
        if (!p.is_object() || !p.contains("slot") || !p["slot"].is_string() || !p.contains("lo") ||
            !p["lo"].is_number() || !p.contains("hi") || !p["hi"].is_number())
            throw ParseError("family.free entries need slot, lo and hi");
        fam.free.push_back({slot_from_name(p["slot"].get<std::string>()), p["lo"].get<double>(), p["hi"].get<double>()});
    }
    if (f.contains("data")) {
        if (!f["data"].is_string()) throw ParseError("family.data must be a string");
        const auto d = f["data"].get<std::string>();
        if (d == "eigenvalues")
            fam.data = FitData::eigenvalues;
        else if (d == "spectral_data")
            fam.data = FitData::spectral_data;
        else if (d == "two_spectra")
            fam.data = FitData::two_spectra;
        else
            throw ParseError("unknown family.data '" + d + "'");
    }
    validate_family(fam);
    return fam;
}

FitTarget make_target(const ProblemSpec& spec, int count, FitData data, const ScanOptions& options) {
    if (count < 1) throw std::invalid_argument("make_target: count must be positive");
    const double s = asymptotic_spacing(spec);
    Window search{-4.0 * s - 1.0, (count + 4) * s + 1.0};
    SpectrumWindow sw;
    const SpectralDatum* prev = nullptr;
    const SpectralDatum* next = nullptr;
    for (int attempt = 0; attempt < 8; ++attempt) {
        sw = find_eigenvalues(spec, search, options);
        prev = next = nullptr;
        const SpectralDatum* last = nullptr;
        for (const auto& d : sw.data) {
            if (d.n == -1) prev = &d;
            if (d.n == count - 1) last = &d;
            if (d.n == count) next = &d;
        }
        if (last && next && (prev || attempt >= 3)) break;
        if (!(last && next)) search.hi += (count + 4) * s;
        if (!prev) search.lo -= 4.0 * s;
    }
    const SpectralDatum* first = nullptr;
    const SpectralDatum* last = nullptr;
    for (const auto& d : sw.data) {
        if (d.n == 0) first = &d;
        if (d.n == count - 1) last = &d;
    }
    if (!first || !last || !next) throw NumericalError("make_target: could not locate the requested eigenvalues");
    FitTarget t;
    t.window.lo = prev ? 0.5 * (prev->lambda + first->lambda) : first->lambda - 0.5 * s;
    t.window.hi = 0.5 * (last->lambda + next->lambda);
    const auto final = data == FitData::spectral_data ? spectral_data(spec, t.window, options)
                                                      : find_eigenvalues(spec, t.window, options);
    t.lambdas = final.lambdas();
    if (data == FitData::spectral_data) {
        std::vector<double> mus;
        for (const auto& d : final.data) mus.push_back(d.mu);
        t.mus = mus;
    }
    if (data == FitData::two_spectra) t.taus = find_aux_eigenvalues(spec, t.window, options);
    return t;
}

namespace {

/// Offsets (into target, into candidate) of the best sorted-order alignment,
/// or nullopt when the counts differ by more than one.
struct Alignment {
    std::size_t ta = 0, ca = 0, len = 0;
    double cost = 0.0;
};

std::optional<Alignment> align(const std::vector<double>& target, const std::vector<double>& cand) {
    const auto nt = target.size(), nc = cand.size();
    if (nt > nc + 1 || nc > nt + 1) return std::nullopt;
    const auto len = std::min(nt, nc);
    const auto cost = [&](std::size_t ta, std::size_t ca) {
        double c = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            const double d = target[ta + k] - cand[ca + k];
            c += d * d;
        }
        return c;
    };
    Alignment best{0, 0, len, cost(0, 0)};
    if (nt != nc) {
        const Alignment other = nt > nc ? Alignment{1, 0, len, cost(1, 0)} : Alignment{0, 1, len, cost(0, 1)};
        if (other.cost < best.cost) best = other;
    }
    return best;
}

}  // namespace

double spectral_mismatch(const ProblemSpec& candidate, const FitTarget& target, const ScanOptions& options) {
    if (target.window.empty()) throw std::invalid_argument("spectral_mismatch: empty window");
    if (target.lambdas.empty()) throw std::invalid_argument("spectral_mismatch: empty target");
    try {
        validate(candidate);
        const auto sw = target.mus ? spectral_data(candidate, target.window, options)
                                   : find_eigenvalues(candidate, target.window, options);
        const auto lam = sw.lambdas();
        const auto al = align(target.lambdas, lam);
        if (!al) return kMismatchPenalty;
        double total = al->cost;
        if (target.mus) {
            const auto& mus = *target.mus;
            for (std::size_t k = 0; k < al->len; ++k) {
                if (al->ta + k >= mus.size()) break;
                const double d = mus[al->ta + k] - sw.data[al->ca + k].mu;
                total += d * d;
            }
        }
        if (target.taus) {
            const auto taus = find_aux_eigenvalues(candidate, target.window, options);
            const auto at = align(*target.taus, taus);
            if (!at) return kMismatchPenalty;
            total += at->cost;
        }
        return std::isfinite(total) ? std::min(total, kMismatchPenalty) : kMismatchPenalty;
    } catch (const NumericalError&) {
        return kMismatchPenalty;
    } catch (const ValidationError&) {
        return kMismatchPenalty;
    }
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& step,
                          int max_iterations, double x_tolerance, double f_tolerance,
                          const std::function<void(int, const std::vector<double>&, double)>& on_iteration) {
    const std::size_t n = x0.size();
    const auto project = [&](std::vector<double> x) {
        for (std::size_t k = 0; k < n; ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
        return x;
    };
    SimplexResult res;
    const auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };

    std::vector<std::vector<double>> xs{project(x0)};
    for (std::size_t k = 0; k < n; ++k) {
        auto x = xs[0];
        x[k] += step[k];
        if (x[k] > hi[k]) x[k] = xs[0][k] - step[k];
        xs.push_back(project(x));
    }
    std::vector<double> fs;
    for (const auto& x : xs) fs.push_back(eval(x));

    std::vector<std::size_t> order(n + 1);
    const auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        std::vector<std::vector<double>> nx;
        std::vector<double> nf;
        for (auto i : order) {
            nx.push_back(xs[i]);
            nf.push_back(fs[i]);
        }
        xs = std::move(nx);
        fs = std::move(nf);
    };
    const auto converged = [&] {
        double size = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const double width = hi[k] > lo[k] ? hi[k] - lo[k] : 1.0;
                size = std::max(size, std::fabs(xs[i][k] - xs[0][k]) / width);
            }
        return size <= x_tolerance || fs[n] - fs[0] <= f_tolerance;
    };

    sort_simplex();
    while (res.iterations < max_iterations) {
        if (converged()) {
            res.converged = true;
            break;
        }
        ++res.iterations;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += xs[i][k] / static_cast<double>(n);
        const auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k) x[k] = centroid[k] + t * (xs[n][k] - centroid[k]);
            return project(x);
        };
        const auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fs[0]) {
            const auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            const bool outside = fr < fs[n];
            const auto xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fs[n])) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k) xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
                    fs[i] = eval(xs[i]);
                }
            }
        }
        sort_simplex();
        if (on_iteration) on_iteration(res.iterations, xs[0], fs[0]);
    }
    if (!res.converged && converged()) res.converged = true;
    res.x = xs[0];
    res.f = fs[0];
    return res;
}

FitResult fit_parameters(const ParameterFamily& family, const FitTarget& target, const FitConfig& config) {
    validate_family(family);
    const std::size_t n = family.free.size();
    FitResult out;
    const auto f = [&](const std::vector<double>& v) {
        ++out.evaluations;
        return spectral_mismatch(family.at(v), target, config.scan);
    };

    out.values = family.base_values();
    out.mismatch = f(out.values);
    out.initial_mismatch = out.mismatch;
    out.trace.push_back({0, "base", out.values, out.mismatch});
    if (out.mismatch <= config.f_tolerance) {
        out.converged = true;
        return out;
    }

    const int g = std::max(1, config.grid_points);
    std::vector<std::vector<double>> points;
    std::vector<int> idx(n, 0);
    for (bool more = true; more;) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& p = family.free[k];
            v[k] = g == 1 ? 0.5 * (p.lo + p.hi) : p.lo + (p.hi - p.lo) * idx[k] / (g - 1);
        }
        points.push_back(std::move(v));
        more = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (++idx[k] < g) {
                more = true;
                break;
            }
            idx[k] = 0;
        }
    }
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<double> values(points.size());
    for (std::size_t begin = 0; begin < points.size(); begin += workers) {
        const std::size_t end = std::min(points.size(), begin + workers);
        std::vector<std::future<double>> jobs;
        for (std::size_t k = begin; k < end; ++k)
            jobs.push_back(std::async(std::launch::async, [&, k] {
                return spectral_mismatch(family.at(points[k]), target, config.scan);
            }));
        for (std::size_t k = begin; k < end; ++k) values[k] = jobs[k - begin].get();
    }
    out.evaluations += static_cast<int>(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        out.trace.push_back({0, "grid", points[k], values[k]});
        if (values[k] < out.mismatch) {
            out.mismatch = values[k];
            out.values = points[k];
        }
    }
    if (out.mismatch <= config.f_tolerance) {
        out.converged = true;
        return out;
    }

    std::vector<double> lo, hi, step;
    for (const auto& p : family.free) {
        lo.push_back(p.lo);
        hi.push_back(p.hi);
        step.push_back(0.5 * (p.hi - p.lo) / std::max(1, g - 1));
    }
    const auto simplex = nelder_mead(
        f, out.values, lo, hi, step, config.max_iterations, config.x_tolerance, config.f_tolerance,
        [&](int it, const std::vector<double>& x, double m) { out.trace.push_back({it, "simplex", x, m}); });
    out.iterations = simplex.iterations;
    out.converged = simplex.converged;
    if (simplex.f <= out.mismatch) {
        out.mismatch = simplex.f;
        out.values = simplex.x;
    }
    return out;
}

}  // namespace dirac
