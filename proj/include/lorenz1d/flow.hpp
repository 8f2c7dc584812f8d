#pragma once

#include "kneading.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace lorenz1d {

using Vec3 = std::array<double, 3>;

struct LorenzParams {
    double sigma = 10, rho = 28, mu = 8.0 / 3.0;
};

inline bool in_region_P(const LorenzParams& p)
{
    return p.sigma > 0 && p.mu > 0 && p.rho > std::max(1.0, (p.sigma + 1) * (p.sigma + 1) / (4 * p.sigma));
}

inline Vec3 vector_field(const LorenzParams& p, const Vec3& s)
{
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.mu * s[2]};
}

// p_1 (x > 0) and p_0 (x < 0)
inline std::array<Vec3, 2> nontrivial_fixed_points(const LorenzParams& p)
{
    if (!(p.rho > 1))
        throw PreconditionError("nontrivial fixed points need rho > 1");
    double q = std::sqrt(p.mu * (p.rho - 1));
    return {Vec3{q, q, p.rho - 1}, Vec3{-q, -q, p.rho - 1}};
}

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline Vec3 mirror_state(const Vec3& v) { return {-v[0], -v[1], v[2]}; }

namespace dopri {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

} // namespace dopri

// One accepted step with its continuous extension.
struct DenseStep {
    double t0 = 0, h = 0;
    Vec3 y0{}, y1{};
    std::array<Vec3, 5> rc{};

    Vec3 at(double t) const
    {
        double th = (t - t0) / h, th1 = 1 - th;
        Vec3 out;
        for (int i = 0; i < 3; ++i)
            out[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
        return out;
    }
    double t1() const { return t0 + h; }
};

// Adaptive Dormand-Prince 5(4) stepper with FSAL and dense output.
class Dopri5 {
public:
    Dopri5(const LorenzParams& p, Vec3 y, double t, double tol) : p_(p), y_(y), t_(t), tol_(tol)
    {
        if (!(tol >= 1e-12 && tol <= 1e-6))
            throw PreconditionError("integration tolerance must lie in [1e-12, 1e-6]");
        k1_ = vector_field(p_, y_);
        h_ = 1e-3;
    }

    double t() const { return t_; }
    const Vec3& y() const { return y_; }

    // Advances by one accepted step, never past t_end.
    DenseStep step(double t_end)
    {
        using namespace dopri;
        for (;;) {
            double h = std::min(h_, t_end - t_);
            if (h < 1e-14 * std::max(1.0, std::abs(t_)))
                throw NumericalError("step-size underflow");
            Vec3 y2, y3, y4, y5, y6, y7, k2, k3, k4, k5, k6, k7;
            for (int i = 0; i < 3; ++i)
                y2[i] = y_[i] + h * a21 * k1_[i];
            k2 = vector_field(p_, y2);
            for (int i = 0; i < 3; ++i)
                y3[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            k3 = vector_field(p_, y3);
            for (int i = 0; i < 3; ++i)
                y4[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = vector_field(p_, y4);
            for (int i = 0; i < 3; ++i)
                y5[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = vector_field(p_, y5);
            for (int i = 0; i < 3; ++i)
                y6[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = vector_field(p_, y6);
            for (int i = 0; i < 3; ++i)
                y7[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            k7 = vector_field(p_, y7);

            double err = 0;
            for (int i = 0; i < 3; ++i) {
                double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                double sc = tol_ + tol_ * std::max(std::abs(y_[i]), std::abs(y7[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / 3);
            if (!std::isfinite(err))
                err = 1e10;
            double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err > 1) {
                h_ = h * std::min(1.0, fac);
                continue;
            }
            DenseStep ds;
            ds.t0 = t_;
            ds.h = h;
            ds.y0 = y_;
            ds.y1 = y7;
            for (int i = 0; i < 3; ++i) {
                double ydiff = y7[i] - y_[i];
                double bspl = h * k1_[i] - ydiff;
                ds.rc[0][i] = y_[i];
                ds.rc[1][i] = ydiff;
                ds.rc[2][i] = bspl;
                ds.rc[3][i] = ydiff - h * k7[i] - bspl;
                ds.rc[4][i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            t_ += h;
            y_ = y7;
            k1_ = k7;
            if (h == h_ || fac < 1)
                h_ = h * fac;
            return ds;
        }
    }

private:
    LorenzParams p_;
    Vec3 y_;
    double t_;
    double tol_;
    Vec3 k1_;
    double h_;
};

struct Trajectory {
    std::vector<DenseStep> steps;

    Vec3 at(double t) const
    {
        if (steps.empty())
            throw PreconditionError("empty trajectory");
        auto it = std::lower_bound(steps.begin(), steps.end(), t,
                                   [](const DenseStep& s, double tt) { return s.t1() < tt; });
        if (it == steps.end())
            --it;
        return it->at(t);
    }
    Vec3 final() const { return steps.empty() ? Vec3{} : steps.back().y1; }
};

inline Trajectory integrate(const LorenzParams& p, const Vec3& s0, double T, double tol)
{
    if (!(tol >= 1e-12 && tol <= 1e-6))
        throw PreconditionError("integration tolerance must lie in [1e-12, 1e-6]");
    Trajectory tr;
    if (norm(vector_field(p, s0)) == 0) {
        DenseStep ds;
        ds.h = T;
        ds.y0 = ds.y1 = s0;
        ds.rc[0] = s0;
        tr.steps.push_back(ds);
        return tr;
    }
    Dopri5 st(p, s0, 0.0, tol);
    while (st.t() < T)
        tr.steps.push_back(st.step(T));
    return tr;
}

struct FlowOptions {
    double tol = 1e-10;
    double delta = 1e-8;
    double t_max = 200;
    double bound_x = 40, bound_y = 60;
    double near_w = 1e-5;
    double event_tol = 1e-10;
    double min_return_time = 1e-3;
};

struct CrossSection {
    double z, bound_x, bound_y;

    static CrossSection of(const LorenzParams& p, const FlowOptions& o) { return {p.rho - 1, o.bound_x, o.bound_y}; }
    bool inside(double x, double y) const { return std::abs(x) <= bound_x && std::abs(y) <= bound_y; }
};

struct ReturnRecord {
    double x = 0, y = 0;
    double return_time = 0;
    int symbol = 0;
};

enum class FlowStatus { ok, escape, timeout, near_w };

inline const char* to_string(FlowStatus s)
{
    switch (s) {
    case FlowStatus::escape: return "escape";
    case FlowStatus::timeout: return "timeout";
    case FlowStatus::near_w: return "near-W";
    default: return "ok";
    }
}

struct FlowTrace {
    FlowStatus status = FlowStatus::ok;
    std::vector<ReturnRecord> crossings;
    std::string symbols;
};

// Integrates from s0 and records downward crossings of the section until
// `max_crossings` are found or the run stops. The near-W guard is active
// only after `guard_after` crossings.
inline FlowTrace trace_crossings(const LorenzParams& p, const Vec3& s0, std::size_t max_crossings,
                                 const FlowOptions& o, std::size_t guard_after = 0)
{
    FlowTrace out;
    const auto sec = CrossSection::of(p, o);
    Dopri5 st(p, s0, 0.0, o.tol);
    double last_t = 0;
    while (out.crossings.size() < max_crossings) {
        if (st.t() >= o.t_max) {
            out.status = FlowStatus::timeout;
            return out;
        }
        DenseStep ds = st.step(o.t_max);
        if (out.crossings.size() >= guard_after && norm(ds.y1) < o.near_w) {
            out.status = FlowStatus::near_w;
            return out;
        }
        if (norm(ds.y1) > 1e4) {
            out.status = FlowStatus::escape;
            return out;
        }
        double g0 = ds.y0[2] - sec.z, g1 = ds.y1[2] - sec.z;
        if (!(g0 > 0 && g1 <= 0))
            continue;
        double lo = ds.t0, hi = ds.t1();
        while (hi - lo > o.event_tol) {
            double mid = 0.5 * (lo + hi);
            (ds.at(mid)[2] - sec.z > 0 ? lo : hi) = mid;
        }
        double tc = 0.5 * (lo + hi);
        if (tc - last_t < o.min_return_time)
            continue;
        Vec3 q = ds.at(tc);
        if (!sec.inside(q[0], q[1])) {
            out.status = FlowStatus::escape;
            return out;
        }
        int sym = q[0] < 0 ? 0 : 1;
        out.crossings.push_back({q[0], q[1], tc - last_t, sym});
        out.symbols.push_back(char('0' + sym));
        last_t = tc;
    }
    return out;
}

struct ReturnResult {
    FlowStatus status = FlowStatus::ok;
    ReturnRecord record;
};

inline ReturnResult first_return(const LorenzParams& p, double qx, double qy, const FlowOptions& o = {})
{
    const auto sec = CrossSection::of(p, o);
    if (!sec.inside(qx, qy))
        throw PreconditionError("section point outside lateral bounds");
    auto tr = trace_crossings(p, {qx, qy, sec.z}, 1, o);
    ReturnResult r;
    r.status = tr.status;
    if (tr.status == FlowStatus::ok)
        r.record = tr.crossings.front();
    return r;
}

// Unit eigenvector of the Jacobian at the origin for the positive eigenvalue.
inline Vec3 unstable_direction(const LorenzParams& p)
{
    double s1 = p.sigma + 1;
    double lam = 0.5 * (-s1 + std::sqrt(s1 * s1 + 4 * p.sigma * (p.rho - 1)));
    Vec3 v{1, (lam + p.sigma) / p.sigma, 0};
    double n = norm(v);
    return {v[0] / n, v[1] / n, 0};
}

struct FlowKneading {
    std::string omega0;     // offset-stable prefix of the x>0 separatrix, launch symbol first
    std::string omega1;     // x<0 separatrix, same length
    std::string omega0_raw; // full run at delta
    std::size_t mirror_index = 0;
    FlowStatus status = FlowStatus::ok;
    double fitted_beta = std::nan("");
    std::size_t match_len = 0;
    bool realizable = false;
    std::size_t k10 = 0;
};

inline std::size_t leading_zeros_after_one(const std::string& w)
{
    if (w.empty() || w[0] != '1')
        return 0;
    std::size_t k = 1;
    while (k < w.size() && w[k] == '0')
        ++k;
    return k - 1;
}

inline FlowKneading separatrix_kneading(const LorenzParams& p, std::size_t n_symbols, const FlowOptions& o = {})
{
    if (!in_region_P(p))
        throw PreconditionError("parameters outside region P");
    if (!(o.delta >= 1e-10 && o.delta <= 1e-6))
        throw PreconditionError("delta must lie in [1e-10, 1e-6]");
    const Vec3 v = unstable_direction(p);
    auto launch = [&](double d) {
        return trace_crossings(p, {d * v[0], d * v[1], d * v[2]}, n_symbols, o, 1);
    };
    auto plus = launch(o.delta);
    auto fine = launch(o.delta / 10);
    auto minus = launch(-o.delta);

    // The launch side is the 0th symbol, the section crossings follow.
    const std::string w_plus = "1" + plus.symbols, w_fine = "1" + fine.symbols, w_minus = "0" + minus.symbols;
    FlowKneading k;
    k.status = plus.status;
    k.omega0_raw = w_plus;
    std::size_t stable = common_prefix_length(w_plus, w_fine);
    k.omega0 = w_plus.substr(0, stable);
    k.omega1 = w_minus.substr(0, std::min(stable, w_minus.size()));
    k.mirror_index = common_prefix_length(flip(w_plus), w_minus);
    k.k10 = leading_zeros_after_one(k.omega0);
    if (!k.omega0.empty() && k.omega0[0] == '1') {
        auto fit = beta_from_kneading(k.omega0, std::min<std::size_t>(64, k.omega0.size()));
        k.fitted_beta = fit.beta;
        k.match_len = fit.match_len;
        k.realizable = fit.realizable;
    }
    return k;
}

struct TPointDiagnostic {
    std::size_t k10 = 0;
    double fitted_beta = std::nan("");
};

inline TPointDiagnostic t_point_proximity(const LorenzParams& p, std::size_t n_symbols = 64,
                                          const FlowOptions& o = {})
{
    auto k = separatrix_kneading(p, n_symbols, o);
    return {k.k10, k.fitted_beta};
}

} // namespace lorenz1d
