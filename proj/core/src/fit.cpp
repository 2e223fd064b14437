#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "eitcool/dynamics.hpp"
#include "eitcool/errors.hpp"

namespace eitcool {

namespace {

struct LinearPart {
    double a;
    double c;
    double sse;
};

// For fixed w the model is linear in (a, c).
LinearPart solve_linear(const std::vector<double>& tau, const std::vector<double>& y, double w) {
    double s11 = 0, s1e = 0, see = 0, sy = 0, sey = 0;
    const double n = static_cast<double>(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double e = std::exp(-w * tau[i]);
        s1e += e;
        see += e * e;
        sy += y[i];
        sey += e * y[i];
    }
    s11 = n;
    const double det = s11 * see - s1e * s1e;
    LinearPart lp{};
    if (std::abs(det) <= 1e-300) {
        lp.a = sy / n;
        lp.c = 0.0;
    } else {
        lp.a = (see * sy - s1e * sey) / det;
        lp.c = (s11 * sey - s1e * sy) / det;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double r = lp.a + lp.c * std::exp(-w * tau[i]) - y[i];
        sse += r * r;
    }
    lp.sse = sse;
    return lp;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

}  // namespace

FitOptions default_fit_options(const ModelParams& params) {
    FitOptions o;
    if (params.gamma_total > 0.0) o.t_start = 5.0 / params.gamma_total;
    return o;
}

CoolingFit extract_cooling_rate(const TimeSeries& series, std::string_view observable, const FitOptions& options) {
    const std::vector<double> values = series.column(observable);
    const auto& times = series.times();
    std::vector<double> tau, y;
    double t0 = std::numeric_limits<double>::quiet_NaN(), t1 = t0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < options.t_start || times[i] > options.t_end) continue;
        if (tau.empty()) t0 = times[i];
        tau.push_back(times[i] - t0);
        y.push_back(values[i]);
        t1 = times[i];
    }
    if (tau.size() < 4) throw FitError("extract_cooling_rate: fewer than 4 samples in the fit window");
    const double span = tau.back();
    double min_dt = span;
    for (std::size_t i = 1; i < tau.size(); ++i) min_dt = std::min(min_dt, tau[i] - tau[i - 1]);

    // Coarse log-spaced scan of the decay rate, then Brent refinement.
    const double lo = std::log(1e-3 / span), hi = std::log(30.0 / min_dt);
    constexpr int grid = 400;
    int best = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid; ++k) {
        const double lw = lo + (hi - lo) * k / grid;
        const double sse = solve_linear(tau, y, std::exp(lw)).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best = k;
        }
    }
    const double step = (hi - lo) / grid;
    const double blo = lo + step * std::max(0, best - 1);
    const double bhi = lo + step * std::min(grid, best + 1);
    auto objective = [&](double lw) { return solve_linear(tau, y, std::exp(lw)).sse; };
    const auto found = boost::math::tools::brent_find_minima(objective, blo, bhi, 52);
    double w = std::exp(found.first);
    LinearPart lp = solve_linear(tau, y, w);
    double a = lp.a, c = lp.c;

    // Gauss-Newton polish on (a, c, w).
    for (int it = 0; it < 30; ++it) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        double sse = 0.0;
        for (std::size_t i = 0; i < tau.size(); ++i) {
            const double e = std::exp(-w * tau[i]);
            const double r = a + c * e - y[i];
            const Eigen::Vector3d j(1.0, e, -c * tau[i] * e);
            jtj += j * j.transpose();
            jtr += j * r;
            sse += r * r;
        }
        const Eigen::Vector3d delta = jtj.ldlt().solve(-jtr);
        if (!delta.allFinite()) break;
        const double a2 = a + delta(0), c2 = c + delta(1), w2 = w + delta(2);
        if (!(w2 > 0.0)) break;
        double sse2 = 0.0;
        for (std::size_t i = 0; i < tau.size(); ++i) {
            const double r = a2 + c2 * std::exp(-w2 * tau[i]) - y[i];
            sse2 += r * r;
        }
        if (sse2 > sse) break;
        a = a2;
        c = c2;
        w = w2;
        if (std::abs(delta(2)) <= 1e-15 * w) break;
    }

    double sse = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double r = a + c * std::exp(-w * tau[i]) - y[i];
        sse += r * r;
    }
    CoolingFit fit;
    fit.w_fit = w;
    fit.n_ss_fit = a;
    fit.n0_fit = a + c;
    fit.amplitude = c;
    fit.fit_window = {t0, t1};
    fit.residual_rms = std::sqrt(sse / static_cast<double>(tau.size()));

    if (!(w >= 0.0)) throw FitError("extract_cooling_rate: negative decay rate");
    if (w * span < options.min_efolds) {
        throw FitError("extract_cooling_rate: fit window covers only " + fmt(w * span) +
                       " e-folds of the decay; extend t_final");
    }
    if (fit.residual_rms > options.max_relative_residual * std::abs(c)) {
        throw FitError("extract_cooling_rate: residual rms " + fmt(fit.residual_rms) + " exceeds " +
                       fmt(options.max_relative_residual) + " of the decay amplitude " + fmt(std::abs(c)) +
                       "; the tail is not a single damped exponential (underdamped fit window)");
    }
    return fit;
}

}  // namespace eitcool
