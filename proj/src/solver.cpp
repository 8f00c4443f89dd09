#include "fpf/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <random>
#include <thread>

namespace fpf {

void SolverConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("solver alpha must lie in (0, 1]");
    if (!(tol > 0.0)) throw Error("solver tol must be positive");
    if (restarts < 1) throw Error("solver needs at least one restart");
}

double fixed_point_residual(const Circuit& c, std::span<const double> x) {
    std::vector<double> fx = evaluate(c, x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = std::fabs(fx[i] - x[i]);
        if (std::isnan(d)) return d;
        r = std::max(r, d);
    }
    return r;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

class Run {
public:
    Run(const Circuit& c, const Box& domain, const SolverConfig& cfg)
        : c_(c), lo_(domain.lo_d()), hi_(domain.hi_d()), cfg_(cfg), n_(c.input_arity()) {
        if (c.output_arity() != n_) throw InvalidWiring("fixed-point circuit must be square");
        if (domain.dim() != n_) throw InvalidWiring("domain dimension != circuit arity");
        fx_.resize(n_);
        fh_.resize(n_);
    }

    FixedPointReport solve(std::vector<double> x) {
        project(x);
        double res = residual_at(x);
        record(res);
        std::size_t sweep = 64;
        std::size_t round = 0;
        while (res > cfg_.tol && iters_ < cfg_.max_iters) {
            if (cfg_.newton) {
                res = polish(x, round % 2 == 0);
                if (res <= cfg_.tol) break;
            }
            ++round;
            std::size_t budget = cfg_.newton ? std::min(sweep, cfg_.max_iters - iters_)
                                             : cfg_.max_iters - iters_;
            res = damped(x, res, budget);
            sweep = std::min<std::size_t>(sweep * 2, 4096);
        }
        if (cfg_.newton && res <= cfg_.tol && res > 0.0) {
            // A few exact Newton steps usually take a damped-converged point to machine precision.
            std::vector<double> y = x;
            lm_polish(y, 0.0, 10);
            if (residual_at(y) < res) x.swap(y);
        }
        FixedPointReport rep;
        rep.residual = fixed_point_residual(c_, x);
        rep.point = std::move(x);
        rep.iterations = iters_;
        rep.converged = rep.residual <= cfg_.tol;
        rep.trace = std::move(trace_);
        return rep;
    }

private:
    void project(std::vector<double>& x) const {
        for (std::size_t i = 0; i < n_; ++i) x[i] = std::clamp(x[i], lo_[i], hi_[i]);
    }

    double residual_at(const std::vector<double>& x) {
        evaluate_into(c_, x, fx_, work_);
        double r = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite(fx_[i])) throw DivergedToNaN("non-finite circuit output at coordinate " + std::to_string(i));
            r = std::max(r, std::fabs(fx_[i] - x[i]));
        }
        return r;
    }

    void record(double res) {
        if (iters_ == 0 || (iters_ & (iters_ - 1)) == 0) trace_.push_back(res);
    }

    void tick(double res) {
        ++iters_;
        record(res);
    }

    // Damped sweeps with Anderson mixing; fx_ holds F(x) on entry.
    double damped(std::vector<double>& x, double res, std::size_t budget) {
        const double a = cfg_.alpha;
        const std::size_t mem = cfg_.anderson;
        std::deque<VectorXd> dg, df;
        VectorXd g_prev, f_prev;
        std::vector<double> g(n_);
        double best = res;
        for (std::size_t k = 0; k < budget && res > cfg_.tol; ++k) {
            for (std::size_t i = 0; i < n_; ++i) g[i] = std::clamp((1 - a) * x[i] + a * fx_[i], lo_[i], hi_[i]);
            if (cfg_.extragradient) {
                evaluate_into(c_, g, fh_, work_);
                for (std::size_t i = 0; i < n_; ++i) g[i] = std::clamp(x[i] + a * (fh_[i] - g[i]), lo_[i], hi_[i]);
            }
            std::vector<double> next = g;
            if (mem > 0) {
                VectorXd gv = Eigen::Map<VectorXd>(g.data(), static_cast<Index>(n_));
                VectorXd xv = Eigen::Map<VectorXd>(x.data(), static_cast<Index>(n_));
                VectorXd fv = gv - xv;
                if (g_prev.size() == static_cast<Index>(n_)) {
                    dg.push_back(gv - g_prev);
                    df.push_back(fv - f_prev);
                    if (dg.size() > mem) {
                        dg.pop_front();
                        df.pop_front();
                    }
                }
                g_prev = gv;
                f_prev = fv;
                if (!df.empty()) {
                    MatrixXd F(static_cast<Index>(n_), static_cast<Index>(df.size()));
                    MatrixXd G(static_cast<Index>(n_), static_cast<Index>(dg.size()));
                    for (std::size_t j = 0; j < df.size(); ++j) {
                        F.col(static_cast<Index>(j)) = df[j];
                        G.col(static_cast<Index>(j)) = dg[j];
                    }
                    VectorXd gamma = F.colPivHouseholderQr().solve(fv);
                    if (gamma.allFinite() && gamma.lpNorm<Eigen::Infinity>() < 1e4) {
                        VectorXd nv = gv - G * gamma;
                        for (std::size_t i = 0; i < n_; ++i) next[i] = nv(static_cast<Index>(i));
                        project(next);
                    }
                }
            }
            double r_next = residual_at(next);
            if (next != g) {
                // Keep the Anderson point only when it improves on the best residual of this sweep.
                if (r_next < best) {
                    best = r_next;
                } else {
                    dg.clear();
                    df.clear();
                    g_prev.resize(0);
                    next = g;
                    r_next = residual_at(next);
                }
            }
            best = std::min(best, r_next);
            x.swap(next);
            res = r_next;
            tick(res);
        }
        return res;
    }

    // Smoothed residual r_tau(x) = F_tau(x) - x; returns 0.5 ||r_tau||^2 and fills fs_.
    double smoothed_merit(const std::vector<double>& x, double tau) {
        fs_.resize(n_);
        evaluate_smoothed(c_, x, fs_, work_, tau);
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite(fs_[i])) return std::numeric_limits<double>::infinity();
            m += 0.5 * (fs_[i] - x[i]) * (fs_[i] - x[i]);
        }
        return m;
    }

    // Projected Levenberg-Marquardt on r_tau(x) with bound freezing; tau = 0 is the true residual.
    void lm_polish(std::vector<double>& x, double tau, std::size_t max_steps) {
        std::vector<double> fx, jac, trial(n_);
        double lambda = 1e-6;
        std::size_t stalls = 0;
        for (std::size_t step = 0; step < max_steps && iters_ < cfg_.max_iters; ++step) {
            evaluate_jacobian(c_, x, fx, jac, tau);
            VectorXd r(static_cast<Index>(n_));
            for (std::size_t i = 0; i < n_; ++i) r(static_cast<Index>(i)) = fx[i] - x[i];
            const double rinf = r.lpNorm<Eigen::Infinity>();
            if (tau == 0.0 ? rinf <= 1e-3 * cfg_.tol : rinf <= 1e-3 * tau) break;
            MatrixXd J = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                jac.data(), static_cast<Index>(n_), static_cast<Index>(n_));
            J.diagonal().array() -= 1.0;
            const double merit = 0.5 * r.squaredNorm();
            VectorXd grad = J.transpose() * r;

            std::vector<Index> freeidx;
            for (std::size_t i = 0; i < n_; ++i) {
                const double gi = grad(static_cast<Index>(i));
                if ((x[i] <= lo_[i] && gi > 0) || (x[i] >= hi_[i] && gi < 0)) continue;
                freeidx.push_back(static_cast<Index>(i));
            }
            if (freeidx.empty()) break;
            const Index nf = static_cast<Index>(freeidx.size());
            MatrixXd Jf(static_cast<Index>(n_), nf);
            for (Index q = 0; q < nf; ++q) Jf.col(q) = J.col(freeidx[static_cast<std::size_t>(q)]);
            MatrixXd H0 = Jf.transpose() * Jf;
            VectorXd rhs = -(Jf.transpose() * r);
            const double scale = std::max(1.0, H0.diagonal().maxCoeff());
            bool accepted = false;
            for (int attempt = 0; attempt < 6 && !accepted; ++attempt) {
                MatrixXd H = H0;
                H.diagonal().array() += lambda * scale;
                VectorXd delta = H.ldlt().solve(rhs);
                if (!delta.allFinite()) {
                    lambda *= 100;
                    continue;
                }
                double t = 1.0;
                for (int ls = 0; ls < 20; ++ls, t *= 0.5) {
                    trial = x;
                    for (Index q = 0; q < nf; ++q) {
                        std::size_t i = static_cast<std::size_t>(freeidx[static_cast<std::size_t>(q)]);
                        trial[i] = std::clamp(x[i] + t * delta(q), lo_[i], hi_[i]);
                    }
                    if (smoothed_merit(trial, tau) < merit * (1.0 - 1e-4 * t)) {
                        x = trial;
                        accepted = true;
                        lambda = std::max(lambda * (ls == 0 ? 0.1 : 0.5), 1e-12);
                        break;
                    }
                }
                if (!accepted) lambda *= 100;
            }
            ++iters_;
            if (!accepted && (++stalls >= 2 || lambda > 1e10)) break;
        }
    }

    // Smoothing continuation: LM on r_tau for decreasing tau, finishing on the true residual.
    double polish(std::vector<double>& x, bool continuation) {
        if (continuation)
            for (double tau = 1.0; tau > 1e-9; tau *= 0.1) lm_polish(x, tau, 20);
        lm_polish(x, 0.0, 60);
        double res = residual_at(x);
        record(res);
        return res;
    }

    const Circuit& c_;
    std::vector<double> lo_, hi_;
    const SolverConfig& cfg_;
    std::size_t n_;
    std::vector<double> fx_, fs_, fh_, work_;
    std::vector<double> trace_;
    std::size_t iters_ = 0;
};

std::vector<double> random_start(const Box& domain, std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto lo = domain.lo_d(), hi = domain.hi_d();
    std::vector<double> x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + u(rng) * (hi[i] - lo[i]);
    return x;
}

}  // namespace

FixedPointReport iterate(const Circuit& c, const Box& domain, const SolverConfig& cfg,
                         std::optional<std::vector<double>> start) {
    cfg.validate();
    std::vector<double> x;
    if (start) {
        x = *start;
        if (x.size() != domain.dim()) throw InvalidWiring("start point dimension != domain");
    } else {
        auto lo = domain.lo_d(), hi = domain.hi_d();
        for (std::size_t i = 0; i < lo.size(); ++i) x.push_back(0.5 * (lo[i] + hi[i]));
    }
    Run run(c, domain, cfg);
    return run.solve(std::move(x));
}

std::size_t restart_threads() {
    const char* env = std::getenv("FPF_THREADS");
    if (!env) return 1;
    long v = std::strtol(env, nullptr, 10);
    return v >= 1 ? static_cast<std::size_t>(v) : 1;
}

FixedPointReport multistart(const Circuit& c, const Box& domain, const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t threads = std::max<std::size_t>(1, std::min(restart_threads(), cfg.restarts));
    std::optional<FixedPointReport> best;
    auto better = [](const FixedPointReport& a, const FixedPointReport& b) {
        return a.residual < b.residual || (a.residual == b.residual && a.restart < b.restart);
    };
    for (std::size_t base = 0; base < cfg.restarts; base += threads) {
        const std::size_t batch = std::min(threads, cfg.restarts - base);
        std::vector<FixedPointReport> reps(batch);
        std::vector<std::exception_ptr> errs(batch);
        auto job = [&](std::size_t j) {
            try {
                reps[j] = iterate(c, domain, cfg, random_start(domain, cfg.seed, base + j));
                reps[j].restart = base + j;
            } catch (...) {
                errs[j] = std::current_exception();
            }
        };
        if (batch == 1) {
            job(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t j = 0; j < batch; ++j) pool.emplace_back(job, j);
            for (auto& t : pool) t.join();
        }
        for (std::size_t j = 0; j < batch; ++j) {
            if (errs[j]) std::rethrow_exception(errs[j]);
            if (reps[j].converged) return std::move(reps[j]);
            if (!best || better(reps[j], *best)) best = std::move(reps[j]);
        }
    }
    return std::move(*best);
}

std::vector<std::vector<double>> grid_fixed_points(const Circuit& c, const Box& domain,
                                                   std::size_t resolution, double tol) {
    const std::size_t d = domain.dim();
    if (d > kGridMaxDim)
        throw DimensionTooLarge("grid oracle supports total dimension <= 3, got " + std::to_string(d));
    if (resolution < 2) resolution = 2;
    auto lo = domain.lo_d(), hi = domain.hi_d();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= resolution;
    auto coord = [&](std::size_t flat) {
        std::vector<double> x(d);
        for (std::size_t i = 0; i < d; ++i) {
            std::size_t k = flat % resolution;
            flat /= resolution;
            x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(k) / static_cast<double>(resolution - 1);
        }
        return x;
    };
    std::vector<double> res(total);
    for (std::size_t f = 0; f < total; ++f) res[f] = fixed_point_residual(c, coord(f));

    SolverConfig polish;
    polish.tol = tol;
    polish.max_iters = 400;
    polish.anderson = 0;
    std::vector<std::vector<double>> found;
    for (std::size_t f = 0; f < total; ++f) {
        bool minimum = true;
        std::size_t stride = 1;
        for (std::size_t i = 0; i < d && minimum; ++i, stride *= resolution) {
            std::size_t k = (f / stride) % resolution;
            if (k > 0 && res[f - stride] < res[f]) minimum = false;
            if (k + 1 < resolution && res[f + stride] < res[f]) minimum = false;
        }
        if (!minimum) continue;
        std::vector<double> x = coord(f);
        if (res[f] > 10 * tol) {
            FixedPointReport r = iterate(c, domain, polish, x);
            x = r.point;
        }
        if (fixed_point_residual(c, x) > 10 * tol) continue;
        bool dup = false;
        for (const auto& p : found) {
            double dist = 0.0;
            for (std::size_t i = 0; i < d; ++i) dist = std::max(dist, std::fabs(p[i] - x[i]));
            if (dist <= 1e-6) dup = true;
        }
        if (!dup) found.push_back(std::move(x));
    }
    return found;
}

}  // namespace fpf
