#include "eitcool/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SVD>
#include <boost/numeric/odeint.hpp>

#include "eitcool/errors.hpp"
#include "eitcool/generator.hpp"
#include "eitcool/parallel.hpp"

namespace eitcool {

namespace odeint = boost::numeric::odeint;

TimeSeries::TimeSeries(std::vector<double> times, std::vector<std::string> names,
                       std::vector<std::vector<double>> records, std::vector<double> leakage, SolverStats meta)
    : times_(std::move(times)),
      names_(std::move(names)),
      records_(std::move(records)),
      leakage_(std::move(leakage)),
      meta_(meta) {
    if (records_.size() != times_.size() || leakage_.size() != times_.size()) {
        throw DimensionError("TimeSeries: times, records and leakage differ in length");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) throw DomainError("TimeSeries: times must be strictly increasing");
    }
    for (const auto& r : records_) {
        if (r.size() != names_.size()) throw DimensionError("TimeSeries: record width does not match names");
    }
    const std::size_t tr = column_index("trace");
    for (const auto& r : records_) {
        if (std::abs(r[tr] - 1.0) > 1e-6) throw SolverError("TimeSeries: trace drifted beyond 1e-6");
    }
}

std::size_t TimeSeries::column_index(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw DomainError("TimeSeries: no observable '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

std::vector<double> TimeSeries::column(std::string_view name) const {
    const std::size_t k = column_index(name);
    std::vector<double> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r[k]);
    return out;
}

double TimeSeries::value(std::size_t sample, std::string_view name) const {
    return records_.at(sample)[column_index(name)];
}

namespace {

using State = std::vector<cplx>;

struct Rhs {
    const LindbladGenerator* gen;
    std::size_t* evaluations;
    void operator()(const State& x, State& dxdt, double) const {
        gen->apply(x.data(), dxdt.data());
        ++*evaluations;
    }
};

double leakage_of(const HilbertSpace& space, const Matrix& rho) {
    const std::size_t nf = space.fock_dim();
    if (nf < 3) return 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < space.internal_dim(); ++i)
        for (std::size_t n = nf - 2; n < nf; ++n) {
            const auto k = static_cast<Eigen::Index>(space.index(i, n));
            p += rho(k, k).real();
        }
    return p;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

}  // namespace

Evolution evolve_full(const LindbladModel& model, const DensityMatrix& rho0, double t_final, std::size_t sample_count,
                      const EvolveOptions& opt) {
    const auto wall0 = std::chrono::steady_clock::now();
    if (!(rho0.space() == model.space())) throw DimensionError("evolve: initial state lives on a different space");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw DomainError("evolve: t_final must be > 0");
    if (sample_count < 2) throw DomainError("evolve: sample_count must be >= 2");
    for (double tol : {opt.rel_tol, opt.abs_tol}) {
        if (!(tol > 0.0 && tol <= 1e-2)) throw DomainError("evolve: tolerances must lie in (0, 1e-2]");
    }

    const HilbertSpace& space = model.space();
    const auto d = static_cast<Eigen::Index>(space.dim());
    const LindbladGenerator gen(model);

    std::vector<std::string> names;
    std::vector<Matrix> obs_t;  // transposed, so Tr(Oρ) is a plain elementwise sum
    for (const auto& o : model.observables()) {
        names.push_back(o.name);
        obs_t.push_back(o.op.matrix().transpose());
    }
    names.push_back("trace");

    std::vector<double> times(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i) {
        times[i] = t_final * static_cast<double>(i) / static_cast<double>(sample_count - 1);
    }
    times.back() = t_final;

    std::vector<std::size_t> checkpoints;
    if (opt.positivity_checkpoints > 0) {
        const std::size_t k = std::min(opt.positivity_checkpoints, sample_count);
        for (std::size_t j = 0; j < k; ++j) {
            checkpoints.push_back(k == 1 ? sample_count - 1 : j * (sample_count - 1) / (k - 1));
        }
    }

    SolverStats stats;
    stats.rel_tol = opt.rel_tol;
    stats.abs_tol = opt.abs_tol;
    std::vector<std::vector<double>> records;
    std::vector<double> leakage;
    records.reserve(sample_count);
    leakage.reserve(sample_count);
    Matrix sample(d, d);

    auto record = [&](std::size_t idx, const State& x) {
        Eigen::Map<const Matrix> raw(x.data(), d, d);
        stats.max_hermiticity_residual =
            std::max(stats.max_hermiticity_residual, (raw - raw.adjoint()).cwiseAbs().maxCoeff());
        sample = (raw + raw.adjoint()) / 2.0;
        std::vector<double> row;
        row.reserve(names.size());
        for (const auto& o : obs_t) row.push_back(o.cwiseProduct(sample).sum().real());
        const double tr = sample.trace().real();
        row.push_back(tr);
        stats.max_trace_error = std::max(stats.max_trace_error, std::abs(tr - 1.0));
        const double leak = leakage_of(space, sample);
        stats.max_leakage = std::max(stats.max_leakage, leak);
        if (leak > opt.leakage_threshold) {
            throw SolverError("evolve: Fock truncation inadequate, population " + fmt(leak) +
                              " in the top two levels at t = " + fmt(times[idx]) + " exceeds " +
                              fmt(opt.leakage_threshold) + "; increase fock_dim");
        }
        if (std::binary_search(checkpoints.begin(), checkpoints.end(), idx)) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(sample, Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            stats.min_eigenvalue = std::min(stats.min_eigenvalue.value_or(lo), lo);
            if (lo < opt.positivity_floor) {
                throw SolverError("evolve: eigenvalue " + fmt(lo) + " of the state below positivity floor at t = " +
                                  fmt(times[idx]));
            }
        }
        records.push_back(std::move(row));
        leakage.push_back(leak);
    };

    State x(rho0.matrix().data(), rho0.matrix().data() + d * d);
    State tmp(x.size());
    record(0, x);

    using Stepper = odeint::runge_kutta_dopri5<State, double, State, double, odeint::range_algebra>;
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, Stepper());
    const Rhs rhs{&gen, &stats.rhs_evaluations};
    const double min_step = opt.min_step_fraction * std::max(1.0, t_final);
    stepper.initialize(x, 0.0, std::min(1e-3, t_final / static_cast<double>(sample_count)));

    try {
        std::size_t next = 1;
        while (next < sample_count) {
            while (stepper.current_time() < times[next]) {
                stepper.do_step(rhs);
                ++stats.steps;
                if (stepper.current_time_step() < min_step) {
                    throw SolverError("evolve: step-size underflow at t = " + fmt(stepper.current_time()) +
                                      " (step " + fmt(stepper.current_time_step()) +
                                      "); the problem is stiff at these tolerances, try rescaling rel_tol/abs_tol");
                }
                if (stats.steps > opt.max_steps) throw SolverError("evolve: step budget exhausted");
            }
            while (next < sample_count && times[next] <= stepper.current_time()) {
                stepper.calc_state(times[next], tmp);
                record(next, tmp);
                ++next;
            }
        }
    } catch (const odeint::step_adjustment_error& e) {
        throw SolverError(std::string("evolve: step-size underflow (") + e.what() +
                          "); try rescaling rel_tol/abs_tol");
    }

    Eigen::Map<const Matrix> last(tmp.data(), d, d);
    Matrix final_rho = (last + last.adjoint()) / 2.0;
    final_rho /= final_rho.trace();
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    TimeSeries series(std::move(times), std::move(names), std::move(records), std::move(leakage), stats);
    return {std::move(series), DensityMatrix(space, std::move(final_rho))};
}

TimeSeries evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, std::size_t sample_count,
                  const EvolveOptions& options) {
    return evolve_full(model, rho0, t_final, sample_count, options).series;
}

TimeSeries evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, std::size_t sample_count,
                  double rel_tol, double abs_tol) {
    EvolveOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = abs_tol;
    return evolve(model, rho0, t_final, sample_count, o);
}

DensityMatrix steady_state(const LindbladModel& model, const SteadyStateOptions& options) {
    const LindbladGenerator gen(model);
    const Matrix l = gen.dense_liouvillian();
    const auto d = static_cast<Eigen::Index>(model.space().dim());
    const Eigen::Index n = d * d;
    Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (n >= 2 && !(s(n - 2) > options.uniqueness_ratio * s(0))) {
        throw SolverError("steady_state: generator has a degenerate null space (second-smallest singular value " +
                          fmt(s(n - 2)) + ", largest " + fmt(s(0)) + ")");
    }
    const Vector v = svd.matrixV().col(n - 1);
    Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw SolverError("steady_state: null vector has zero trace");
    rho /= tr;
    rho = (rho + rho.adjoint()) / 2.0;
    const double residual = gen.apply(rho).cwiseAbs().maxCoeff();
    if (residual > options.residual_limit) {
        throw SolverError("steady_state: residual " + fmt(residual) + " exceeds " + fmt(options.residual_limit));
    }
    return DensityMatrix(model.space(), std::move(rho));
}

std::vector<double> draw_detunings(double delta_max, std::size_t samples, std::uint64_t seed) {
    if (!(delta_max >= 0.0)) throw DomainError("draw_detunings: delta_max must be >= 0");
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        // 53-bit uniform on [0, 1); independent of the standard library's distributions.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        out.push_back((2.0 * u - 1.0) * delta_max);
    }
    return out;
}

MonteCarloResult monte_carlo_detuning(const ModelParams& base, double delta_max, std::size_t samples,
                                      std::uint64_t seed, std::size_t fock_dim, double t_final,
                                      const MonteCarloOptions& options) {
    if (samples < 1) throw DomainError("monte_carlo_detuning: samples must be >= 1");
    std::vector<double> deltas = draw_detunings(delta_max, samples, seed);
    std::vector<std::optional<TimeSeries>> runs(samples);
    parallel_for(samples, options.threads, [&](std::size_t i) {
        try {
            ModelParams p = base;
            p.nuclear_shift = base.nuclear_shift + deltas[i];
            const LindbladModel model = build_model_three_level(p, fock_dim);
            const DensityMatrix rho0 = make_initial_state(model.space(), options.initial);
            runs[i] = evolve(model, rho0, t_final, options.sample_count, options.evolve);
        } catch (const Error& e) {
            throw SolverError("monte_carlo_detuning: realization " + std::to_string(i) + " failed: " + e.what());
        }
    });

    const TimeSeries& first = *runs.front();
    const std::size_t nt = first.size();
    const std::size_t nk = first.names().size();
    std::vector<std::vector<double>> sum(nt, std::vector<double>(nk, 0.0));
    std::vector<double> leak(nt, 0.0);
    SolverStats stats = first.meta();
    stats.steps = stats.rhs_evaluations = 0;
    stats.wall_seconds = 0.0;
    for (const auto& r : runs) {
        for (std::size_t i = 0; i < nt; ++i) {
            for (std::size_t k = 0; k < nk; ++k) sum[i][k] += r->records()[i][k];
            leak[i] = std::max(leak[i], r->leakage()[i]);
        }
        const auto& m = r->meta();
        stats.steps += m.steps;
        stats.rhs_evaluations += m.rhs_evaluations;
        stats.wall_seconds += m.wall_seconds;
        stats.max_hermiticity_residual = std::max(stats.max_hermiticity_residual, m.max_hermiticity_residual);
        stats.max_trace_error = std::max(stats.max_trace_error, m.max_trace_error);
        stats.max_leakage = std::max(stats.max_leakage, m.max_leakage);
    }
    const double inv = 1.0 / static_cast<double>(samples);
    for (auto& row : sum)
        for (auto& v : row) v *= inv;

    TimeSeries mean(first.times(), first.names(), std::move(sum), std::move(leak), stats);
    const std::vector<double> n = mean.column("n");
    // Tail average over the last 5% of samples.
    const std::size_t tail = std::max<std::size_t>(1, nt / 20);
    double n_ss = 0.0;
    for (std::size_t i = nt - tail; i < nt; ++i) n_ss += n[i];
    n_ss /= static_cast<double>(tail);
    std::optional<double> cooling_time;
    for (std::size_t i = 0; i < nt; ++i) {
        if (n[i] <= 1.1 * n_ss) {
            cooling_time = mean.times()[i];
            break;
        }
    }
    return {std::move(mean), n_ss, cooling_time, std::move(deltas)};
}

}  // namespace eitcool
