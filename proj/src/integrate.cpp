#include "gstab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gstab {

namespace {

using FieldFn = std::function<void(const Vec&, Vec&)>;

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with the Shampine dense-output interpolant.
// ---------------------------------------------------------------------------

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0,
                 kA74 = 125.0 / 192.0, kA75 = -2187.0 / 6784.0,
                 kA76 = 11.0 / 84.0;

// 5th-order minus 4th-order weights (error estimate).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

// Interpolant weights: x(theta) = x0 + h * sum_m theta^m q_m,
// q_m = sum_j P[j][m-1] k_j.
constexpr double kP[7][4] = {
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
     -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
     87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
     -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
     701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
     -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0,
     69997945.0 / 29380423.0}};

class Dopri5 {
public:
    explicit Dopri5(int n) : n_(n) {
        for (auto& k : k_) k.resize(n);
        ytmp_.resize(n);
        y0_.resize(n);
        for (auto& q : q_) q.resize(n);
    }

    void invalidate_fsal() { fsal_ = false; }

    /// One trial step from (t, y) of size h. Returns the scaled error
    /// norm (accept iff <= 1); NaN signals a non-finite field value.
    double attempt(const FieldFn& f, const Vec& y, double h, double abs_tol,
                   double rel_tol, Vec& y_out) {
        y0_ = y;
        h_ = h;
        dense_ready_ = false;
        if (!fsal_) f(y, k_[0]);
        ytmp_ = y + h * (kA21 * k_[0]);
        f(ytmp_, k_[1]);
        ytmp_ = y + h * (kA31 * k_[0] + kA32 * k_[1]);
        f(ytmp_, k_[2]);
        ytmp_ = y + h * (kA41 * k_[0] + kA42 * k_[1] + kA43 * k_[2]);
        f(ytmp_, k_[3]);
        ytmp_ = y + h * (kA51 * k_[0] + kA52 * k_[1] + kA53 * k_[2] + kA54 * k_[3]);
        f(ytmp_, k_[4]);
        ytmp_ = y + h * (kA61 * k_[0] + kA62 * k_[1] + kA63 * k_[2] + kA64 * k_[3] +
                         kA65 * k_[4]);
        f(ytmp_, k_[5]);
        y_out = y + h * (kA71 * k_[0] + kA73 * k_[2] + kA74 * k_[3] + kA75 * k_[4] +
                         kA76 * k_[5]);
        f(y_out, k_[6]);

        double sum = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double e = h * (kE1 * k_[0][i] + kE3 * k_[2][i] + kE4 * k_[3][i] +
                                  kE5 * k_[4][i] + kE6 * k_[5][i] + kE7 * k_[6][i]);
            const double sc =
                abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_out[i]));
            const double r = e / sc;
            sum += r * r;
        }
        const double err = std::sqrt(sum / n_);
        if (!y_out.allFinite() || !std::isfinite(err)) {
            return y_out.allFinite() ? std::numeric_limits<double>::infinity()
                                     : std::numeric_limits<double>::quiet_NaN();
        }
        return err;
    }

    /// Commit the last attempted step (enables FSAL reuse of k7).
    void accept() {
        k_[0] = k_[6];
        fsal_ = true;
    }

    void prepare_dense() {
        if (dense_ready_) return;
        for (int m = 0; m < 4; ++m) {
            q_[m].setZero();
            for (int j = 0; j < 7; ++j) {
                if (kP[j][m] != 0.0) q_[m] += kP[j][m] * k_[j];
            }
        }
        dense_ready_ = true;
    }

    /// State at fraction theta in [0,1] of the last attempted step.
    void dense_into(double theta, Vec& out) const {
        out = y0_ + (h_ * theta) *
                        (q_[0] + theta * (q_[1] + theta * (q_[2] + theta * q_[3])));
    }

private:
    int n_;
    bool fsal_ = false;
    bool dense_ready_ = false;
    Vec k_[7], ytmp_, y0_, q_[4];
    double h_ = 0.0;
};

// ---------------------------------------------------------------------------
// Scalar root localization on a bracket, bisection with secant acceleration.
// ---------------------------------------------------------------------------

template <typename Fn>
double localize_root(const Fn& g, double ta, double tb, double ga, double gb,
                     double value_tol) {
    double t_best = std::abs(ga) < std::abs(gb) ? ta : tb;
    double g_best = std::abs(ga) < std::abs(gb) ? ga : gb;
    for (int it = 0; it < 128 && std::abs(g_best) > value_tol; ++it) {
        double tm;
        if (gb != ga) {
            tm = tb - gb * (tb - ta) / (gb - ga);  // secant proposal
            const double lo = std::min(ta, tb), hi = std::max(ta, tb);
            const double margin = 0.01 * (hi - lo);
            if (!(tm > lo + margin && tm < hi - margin)) tm = 0.5 * (ta + tb);
        } else {
            tm = 0.5 * (ta + tb);
        }
        const double gm = g(tm);
        if (std::abs(gm) < std::abs(g_best)) {
            g_best = gm;
            t_best = tm;
        }
        if ((ga <= 0.0) == (gm <= 0.0)) {
            ta = tm;
            ga = gm;
        } else {
            tb = tm;
            gb = gm;
        }
        if (std::abs(tb - ta) < 1e-16 * std::max(1.0, std::abs(tb))) break;
    }
    return t_best;
}

struct NormalComponents {
    double a = 0.0;  // grad_s . f+
    double b = 0.0;  // grad_s . f-
    double scale = 1.0;
};

NormalComponents normal_components(const SwitchingSurface& sf, const Vec& x) {
    Vec g = sf.gradient(x);
    Vec fp = sf.branch_plus(x);
    Vec fm = sf.branch_minus(x);
    NormalComponents nc;
    nc.a = g.dot(fp);
    nc.b = g.dot(fm);
    nc.scale = std::max(1.0, g.norm() * std::max(fp.norm(), fm.norm()));
    return nc;
}

constexpr double kTangencyRel = 1e-12;

}  // namespace

const char* to_string(SurfaceMode m) {
    switch (m) {
        case SurfaceMode::cross_up: return "cross_up";
        case SurfaceMode::cross_down: return "cross_down";
        case SurfaceMode::sliding: return "sliding";
    }
    return "?";
}

SurfaceMode detect_mode(const SwitchingSurface& surface, const Vec& x) {
    const auto nc = normal_components(surface, x);
    const double tol = kTangencyRel * nc.scale;
    if (std::abs(nc.a) <= tol || std::abs(nc.b) <= tol) {
        throw DegenerateTangency("branch field tangent to surface (a or b ~ 0)");
    }
    if (nc.a < 0.0 && nc.b > 0.0) return SurfaceMode::sliding;
    if (nc.a > 0.0 && nc.b > 0.0) return SurfaceMode::cross_up;
    if (nc.a < 0.0 && nc.b < 0.0) return SurfaceMode::cross_down;
    throw DegenerateTangency("repelling set-valued gap (b < 0 < a)");
}

Vec slide_field(const SwitchingSurface& surface, const Vec& x) {
    Vec fp = surface.branch_plus(x);
    Vec fm = surface.branch_minus(x);
    Vec g = surface.gradient(x);
    const double a = g.dot(fp);
    const double b = g.dot(fm);
    const double den = b - a;
    const double scale = std::max(1.0, g.norm() * std::max(fp.norm(), fm.norm()));
    if (std::abs(den) <= kTangencyRel * scale) {
        if ((fp - fm).norm() <= 1e-12 * std::max(1.0, fp.norm())) return fp;
        throw DegenerateTangency("vanishing gap denominator in sliding field");
    }
    const double alpha = b / den;
    return alpha * fp + (1.0 - alpha) * fm;
}

LieDerivative lie_derivative(const PiecewiseSmoothSystem& system,
                             const std::function<void(const Vec&, Vec&)>& grad_V,
                             const Vec& x, double event_tol) {
    Vec g(x.size());
    grad_V(x, g);
    LieDerivative out;
    if (!system.has_surface()) {
        out.value = g.dot(system.smooth_part()(x));
        out.mode = FieldMode::smooth;
        return out;
    }
    const SwitchingSurface& sf = system.surface();
    const double s = sf.value(x);
    if (std::abs(s) > event_tol) {
        out.mode = s > 0.0 ? FieldMode::plus : FieldMode::minus;
        out.value = g.dot(s > 0.0 ? sf.branch_plus(x) : sf.branch_minus(x));
        return out;
    }
    switch (detect_mode(sf, x)) {
        case SurfaceMode::sliding:
            out.mode = FieldMode::sliding;
            out.value = g.dot(slide_field(sf, x));
            break;
        case SurfaceMode::cross_up:
            out.mode = FieldMode::plus;
            out.crossing_branch = true;
            out.value = g.dot(sf.branch_plus(x));
            break;
        case SurfaceMode::cross_down:
            out.mode = FieldMode::minus;
            out.crossing_branch = true;
            out.value = g.dot(sf.branch_minus(x));
            break;
    }
    return out;
}

namespace {

enum class RunMode { smooth, plus, minus, sliding };

FieldMode to_field_mode(RunMode m) {
    switch (m) {
        case RunMode::smooth: return FieldMode::smooth;
        case RunMode::plus: return FieldMode::plus;
        case RunMode::minus: return FieldMode::minus;
        case RunMode::sliding: return FieldMode::sliding;
    }
    return FieldMode::smooth;
}

constexpr double kSlidingExitDelta = 1e-9;
constexpr long kMaxSteps = 20'000'000;

struct DetectOutcome {
    bool off_surface = false;  // perturbation pushed the state off the band
    SurfaceMode mode = SurfaceMode::cross_up;
    int region = 0;
};

class Integrator {
public:
    Integrator(const PiecewiseSmoothSystem& system, const IntegratorConfig& cfg,
               const IntegrateOptions& opts)
        : sys_(system), cfg_(cfg), opts_(opts), stepper_(system.dim()),
          rng_(0x5DEECE66DULL) {}

    IntegrationResult run(const Vec& x0);

private:
    FieldFn active_field() const;
    void record_sample(double t, const Vec& x);
    bool check_convergence(double t, const Vec& x);
    DetectOutcome robust_detect(Vec& x);
    void enter_surface_point(double t, Vec& x, bool record_entry_events);
    bool project_to_surface(Vec& x) const;
    double filippov_alpha(const Vec& x) const;

    const PiecewiseSmoothSystem& sys_;
    IntegratorConfig cfg_;
    const IntegrateOptions& opts_;
    Dopri5 stepper_;
    std::mt19937_64 rng_;

    Trajectory traj_;
    std::optional<SectionHit> hit_;
    RunMode mode_ = RunMode::smooth;

    // convergence-window tracking
    bool holding_ = false;
    double hold_start_ = 0.0;

    // section-watch tracking
    bool armed_ = false;
    double g_prev_ = 0.0;
};

FieldFn Integrator::active_field() const {
    switch (mode_) {
        case RunMode::smooth: {
            const SmoothField& f = sys_.smooth_part();
            return [&f](const Vec& x, Vec& out) { f.evaluate_into(x, out); };
        }
        case RunMode::plus: {
            const SmoothField& f = sys_.surface().branch_plus;
            return [&f](const Vec& x, Vec& out) { f.evaluate_into(x, out); };
        }
        case RunMode::minus: {
            const SmoothField& f = sys_.surface().branch_minus;
            return [&f](const Vec& x, Vec& out) { f.evaluate_into(x, out); };
        }
        case RunMode::sliding: {
            const SwitchingSurface& sf = sys_.surface();
            return [&sf](const Vec& x, Vec& out) { out = slide_field(sf, x); };
        }
    }
    return nullptr;
}

void Integrator::record_sample(double t, const Vec& x) {
    traj_.samples.push_back({t, x, to_field_mode(mode_)});
}

bool Integrator::check_convergence(double t, const Vec& x) {
    if (!opts_.convergence) return false;
    const auto& target = *opts_.convergence;
    const double dist = distance_to_stationary(target.set, x);
    bool holds = dist <= target.dist_tol;
    if (holds) {
        Vec f(sys_.dim());
        if (mode_ == RunMode::sliding) {
            f = slide_field(sys_.surface(), x);
        } else {
            sys_.field_into(x, f, mode_ == RunMode::plus ? +1
                                   : mode_ == RunMode::minus ? -1 : 0);
        }
        holds = f.norm() <= target.field_tol;
    }
    if (!holds) {
        holding_ = false;
        return false;
    }
    if (!holding_) {
        holding_ = true;
        hold_start_ = t;
        return false;
    }
    return t - hold_start_ >= target.window;
}

DetectOutcome Integrator::robust_detect(Vec& x) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return {false, detect_mode(sys_.surface(), x), 0};
        } catch (const DegenerateTangency&) {
            Vec d(x.size());
            for (int i = 0; i < x.size(); ++i) d[i] = gauss(rng_);
            x += 1e-8 * d.normalized();
            const double s = sys_.surface().value(x);
            if (std::abs(s) > cfg_.event_tol) {
                return {true, SurfaceMode::cross_up, s > 0.0 ? +1 : -1};
            }
        }
    }
    throw DegenerateTangency("degenerate tangency persists after perturbation");
}

/// Decide the mode at an on-surface point and update mode_/events.
void Integrator::enter_surface_point(double t, Vec& x, bool record_events) {
    const DetectOutcome d = robust_detect(x);
    if (d.off_surface) {
        mode_ = d.region > 0 ? RunMode::plus : RunMode::minus;
        return;
    }
    switch (d.mode) {
        case SurfaceMode::sliding:
            if (record_events)
                traj_.events.push_back({t, EventKind::sliding_entry, x});
            mode_ = RunMode::sliding;
            break;
        case SurfaceMode::cross_up:
            if (record_events) traj_.events.push_back({t, EventKind::crossing, x});
            mode_ = RunMode::plus;
            break;
        case SurfaceMode::cross_down:
            if (record_events) traj_.events.push_back({t, EventKind::crossing, x});
            mode_ = RunMode::minus;
            break;
    }
}

bool Integrator::project_to_surface(Vec& x) const {
    const SwitchingSurface& sf = sys_.surface();
    for (int it = 0; it < 4; ++it) {
        const double s = sf.value(x);
        if (std::abs(s) <= 0.1 * cfg_.event_tol) return true;
        Vec g = sf.gradient(x);
        const double g2 = g.squaredNorm();
        if (g2 == 0.0) return false;
        x -= (s / g2) * g;
    }
    return std::abs(sf.value(x)) <= cfg_.event_tol;
}

double Integrator::filippov_alpha(const Vec& x) const {
    const auto nc = normal_components(sys_.surface(), x);
    const double den = nc.b - nc.a;
    if (std::abs(den) <= kTangencyRel * nc.scale) {
        throw DegenerateTangency("vanishing gap denominator during sliding");
    }
    return nc.b / den;
}

IntegrationResult Integrator::run(const Vec& x0) {
    const int n = sys_.dim();
    if (x0.size() != n) throw std::invalid_argument("integrate: dimension mismatch");
    if (!x0.allFinite()) throw std::invalid_argument("integrate: non-finite start");

    Vec x = x0;
    double t = 0.0;

    // Initial mode.
    if (!sys_.has_surface()) {
        mode_ = RunMode::smooth;
    } else {
        const double s0 = sys_.surface().value(x);
        if (std::abs(s0) <= cfg_.event_tol) {
            enter_surface_point(t, x, /*record_events=*/true);
        } else {
            mode_ = s0 > 0.0 ? RunMode::plus : RunMode::minus;
        }
    }

    record_sample(t, x);

    if (opts_.section) {
        g_prev_ = opts_.section->g(x);
        armed_ = std::abs(g_prev_) > opts_.section->arm_tol;
    }

    double max_step = cfg_.max_step;
    if (opts_.convergence)
        max_step = std::min(max_step, 0.5 * opts_.convergence->window);

    // Initial step size guess, refined by the controller.
    double h;
    {
        Vec f(n);
        try {
            FieldFn ff = active_field();
            ff(x, f);
        } catch (const DegenerateTangency&) {
            f.setZero();
        }
        h = std::min(max_step, 0.01 * (1.0 + x.norm()) / (1.0 + f.norm()));
    }

    Vec x_new(n), x_ev(n), x_tmp(n);
    FieldFn field = active_field();

    auto finish = [&](TerminalStatus st) {
        traj_.terminal_status = st;
        return IntegrationResult{std::move(traj_), hit_};
    };

    for (long step = 0; step < kMaxSteps; ++step) {
        const double remaining = cfg_.horizon - t;
        if (remaining <= 1e-14 * std::max(1.0, cfg_.horizon)) {
            return finish(TerminalStatus::horizon_reached);
        }
        h = std::min({h, max_step, remaining});
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            return finish(TerminalStatus::integrator_failure);
        }

        double err;
        try {
            err = stepper_.attempt(field, x, h, cfg_.abs_tol, cfg_.rel_tol, x_new);
        } catch (const DegenerateTangency&) {
            return finish(TerminalStatus::integrator_failure);
        }
        if (std::isnan(err)) return finish(TerminalStatus::integrator_failure);
        if (err > 1.0) {
            stepper_.invalidate_fsal();
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            continue;
        }

        const bool in_branch =
            mode_ == RunMode::plus || mode_ == RunMode::minus;

        // --- Surface-crossing detection on the accepted proposal ---
        double theta_cut = 1.0;
        bool surface_cut = false;
        if (in_branch && sys_.has_surface()) {
            const SwitchingSurface& sf = sys_.surface();
            const int region = mode_ == RunMode::plus ? +1 : -1;
            const double s_end = sf.value(x_new);
            const double s_start = sf.value(x);
            if (s_start * region < -cfg_.event_tol) {
                // Already past the surface at step start: event now.
                theta_cut = 0.0;
                surface_cut = true;
            } else if (s_end * region < -cfg_.event_tol) {
                stepper_.prepare_dense();
                auto s_of = [&](double th) {
                    stepper_.dense_into(th, x_tmp);
                    return sf.value(x_tmp);
                };
                theta_cut = localize_root(s_of, 0.0, 1.0, s_start, s_end,
                                          cfg_.event_tol);
                surface_cut = true;
            }
        }

        // --- Section-watch check on [0, theta_cut] ---
        if (opts_.section) {
            const auto& w = *opts_.section;
            double g_cut;
            if (theta_cut >= 1.0) {
                g_cut = w.g(x_new);
                x_ev = x_new;
            } else {
                stepper_.prepare_dense();
                stepper_.dense_into(theta_cut, x_ev);
                g_cut = w.g(x_ev);
            }
            const bool right_direction = w.direction >= 0 ? (g_prev_ < 0.0 && g_cut > 0.0)
                                                          : (g_prev_ > 0.0 && g_cut < 0.0);
            if (armed_ && right_direction) {
                stepper_.prepare_dense();
                auto g_of = [&](double th) {
                    stepper_.dense_into(th, x_tmp);
                    return w.g(x_tmp);
                };
                const double theta_w =
                    localize_root(g_of, 0.0, theta_cut, g_prev_, g_cut, cfg_.event_tol);
                stepper_.dense_into(theta_w, x_ev);
                const double t_w = t + theta_w * h;
                record_sample(t_w, x_ev);
                hit_ = SectionHit{t_w, x_ev};
                return finish(TerminalStatus::horizon_reached);
            }
        }

        if (surface_cut) {
            // Truncate the step at the surface event.
            stepper_.prepare_dense();
            if (theta_cut <= 0.0) {
                x_ev = x;
            } else {
                stepper_.dense_into(theta_cut, x_ev);
            }
            const double t_ev = t + theta_cut * h;
            record_sample(t_ev, x_ev);  // endpoint of the old-mode arc
            t = t_ev;
            x = x_ev;
            enter_surface_point(t, x, /*record_events=*/true);
            field = active_field();
            stepper_.invalidate_fsal();
            if (opts_.section) {
                const double g = opts_.section->g(x);
                armed_ = armed_ || std::abs(g) > opts_.section->arm_tol;
                g_prev_ = g;
            }
            if (check_convergence(t, x)) return finish(TerminalStatus::converged);
            continue;
        }

        // --- Sliding bookkeeping: projection and exit test ---
        if (mode_ == RunMode::sliding) {
            bool exited = false;
            double alpha_end;
            try {
                if (!project_to_surface(x_new)) {
                    return finish(TerminalStatus::integrator_failure);
                }
                alpha_end = filippov_alpha(x_new);
            } catch (const DegenerateTangency&) {
                return finish(TerminalStatus::integrator_failure);
            }
            if (alpha_end < kSlidingExitDelta || alpha_end > 1.0 - kSlidingExitDelta) {
                // Locate the moment alpha hits the admissible boundary.
                const bool upper = alpha_end > 0.5;
                const double boundary = upper ? 1.0 - kSlidingExitDelta : kSlidingExitDelta;
                stepper_.prepare_dense();
                auto excess = [&](double th) {
                    stepper_.dense_into(th, x_tmp);
                    if (!project_to_surface(x_tmp)) return 0.0;
                    return upper ? filippov_alpha(x_tmp) - boundary
                                 : boundary - filippov_alpha(x_tmp);
                };
                double theta_x = 1.0;
                try {
                    const double e0 = excess(0.0);
                    const double e1 = excess(1.0);
                    if (e0 < 0.0 && e1 > 0.0)
                        theta_x = localize_root(excess, 0.0, 1.0, e0, e1, 1e-12);
                } catch (const DegenerateTangency&) {
                    theta_x = 1.0;
                }
                stepper_.dense_into(theta_x, x_new);
                if (!project_to_surface(x_new)) {
                    return finish(TerminalStatus::integrator_failure);
                }
                t += theta_x * h;
                x = x_new;
                record_sample(t, x);
                traj_.events.push_back({t, EventKind::sliding_exit, x});
                mode_ = upper ? RunMode::plus : RunMode::minus;
                field = active_field();
                stepper_.invalidate_fsal();
                exited = true;
            }
            if (exited) {
                if (opts_.section) {
                    const double g = opts_.section->g(x);
                    armed_ = armed_ || std::abs(g) > opts_.section->arm_tol;
                    g_prev_ = g;
                }
                if (check_convergence(t, x)) return finish(TerminalStatus::converged);
                continue;
            }
            // projection may have changed x_new; FSAL stage no longer exact
            stepper_.invalidate_fsal();
        } else {
            stepper_.accept();
        }

        // --- Commit the full step ---
        t += h;
        x = x_new;
        record_sample(t, x);

        if (opts_.section) {
            const double g = opts_.section->g(x);
            armed_ = armed_ || std::abs(g) > opts_.section->arm_tol;
            g_prev_ = g;
        }

        if (!x.allFinite()) return finish(TerminalStatus::integrator_failure);
        if (x.norm() > cfg_.divergence_radius) {
            return finish(TerminalStatus::diverged);
        }
        if (check_convergence(t, x)) return finish(TerminalStatus::converged);

        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= fac;
    }
    return finish(TerminalStatus::integrator_failure);
}

}  // namespace

IntegrationResult integrate(const PiecewiseSmoothSystem& system, const Vec& x0,
                            const IntegratorConfig& cfg, const IntegrateOptions& opts) {
    Integrator ig(system, cfg, opts);
    return ig.run(x0);
}

Trajectory integrate(const PiecewiseSmoothSystem& system, const Vec& x0,
                     const IntegratorConfig& cfg) {
    IntegrateOptions opts;
    Integrator ig(system, cfg, opts);
    return ig.run(x0).trajectory;
}

}  // namespace gstab
