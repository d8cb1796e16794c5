#include "trp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace trp {

const char* status_name(SolveStatus s) noexcept {
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NumericFailure: return "numeric_failure";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenStep = 1e-12;
constexpr int kBlandTrigger = 40;
constexpr int kBetaRefreshPeriod = 128;

enum VarStateTag : signed char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

using Clock = std::chrono::steady_clock;

class Simplex {
public:
    Simplex(const MilpModel& m, bool relax, const SolveOptions& opts)
        : opts_(opts), model_(m) {
        if (!relax && m.num_integral() > 0)
            throw ModelError("model has integral variables; pass relax=true");
        build();
    }

    SolveResult run() {
        const auto start = Clock::now();
        SolveResult res;
        res.status = SolveStatus::NumericFailure;

        setup_basis();
        SolveStatus st = SolveStatus::Optimal;
        if (num_artificial_ > 0) {
            st = iterate(phase1_obj_);
            if (st == SolveStatus::Optimal) {
                const double infeas = -phase_objective(phase1_obj_);
                if (infeas > 1e-7) st = SolveStatus::Infeasible;
                // pin artificials to zero for phase 2
                for (int j = n_struct_ + m_; j < n_total_; ++j) lo_[j] = hi_[j] = 0.0;
            } else if (st == SolveStatus::Unbounded) {
                st = SolveStatus::NumericFailure; // phase-1 objective is bounded
            }
        }
        if (st == SolveStatus::Optimal) st = iterate(phase2_obj_);

        res.iterations = iterations_;
        res.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        res.status = st;
        if (st != SolveStatus::Optimal) {
            res.objective = 0.0;
            res.bound = st == SolveStatus::Infeasible ? -kInf : kInf;
            return res;
        }

        // Fresh factorization, then verify: never report a silently wrong point.
        if (!refactor() || !recompute_beta()) {
            res.status = SolveStatus::NumericFailure;
            return res;
        }
        std::vector<double> x = compose();
        std::string why;
        if (!check_feasible(model_, x, opts_.feas_tol, false, opts_.int_tol, &why)) {
            res.status = SolveStatus::NumericFailure;
            return res;
        }
        res.assignment = std::move(x);
        res.objective = eval_expr(model_.objective, res.assignment);
        res.bound = res.objective;
        res.status = SolveStatus::Optimal;
        return res;
    }

private:
    void build() {
        n_struct_ = static_cast<int>(model_.vars.size());
        m_ = static_cast<int>(model_.cons.size());
        n_total_ = n_struct_ + m_; // artificials appended later
        cols_.assign(n_total_, {});
        lo_.assign(n_total_, 0.0);
        hi_.assign(n_total_, 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            lo_[j] = model_.vars[j].lo;
            hi_[j] = model_.vars[j].hi;
        }
        rhs_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const auto& c = model_.cons[i];
            rhs_[i] = c.rhs;
            for (const auto& t : c.expr.terms) cols_[t.var].push_back({i, t.coef});
            const int s = n_struct_ + i;
            cols_[s].push_back({i, 1.0});
            switch (c.sense) {
            case ConSense::Le: lo_[s] = 0.0; hi_[s] = kInf; break;
            case ConSense::Ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
            case ConSense::Eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
            }
        }
        phase2_obj_.assign(n_total_, 0.0);
        for (const auto& t : model_.objective.terms) phase2_obj_[t.var] += t.coef;
    }

    void setup_basis() {
        state_.assign(n_total_, kAtLower);
        xval_.assign(n_total_, 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            if (std::isfinite(lo_[j])) {
                state_[j] = kAtLower;
                xval_[j] = lo_[j];
            } else if (std::isfinite(hi_[j])) {
                state_[j] = kAtUpper;
                xval_[j] = hi_[j];
            } else {
                state_[j] = kFreeZero;
                xval_[j] = 0.0;
            }
        }
        // slack basis; absorb residuals with artificials where a slack cannot
        basis_.resize(m_);
        beta_.assign(m_, 0.0);
        std::vector<double> resid(rhs_);
        for (int j = 0; j < n_struct_; ++j)
            if (xval_[j] != 0.0)
                for (const auto& [i, v] : cols_[j]) resid[i] -= v * xval_[j];

        num_artificial_ = 0;
        for (int i = 0; i < m_; ++i) {
            const int s = n_struct_ + i;
            if (resid[i] >= lo_[s] && resid[i] <= hi_[s]) {
                basis_[i] = s;
                beta_[i] = resid[i];
                state_[s] = kBasic;
            } else {
                const double clamped = std::clamp(resid[i], lo_[s], hi_[s]);
                state_[s] = clamped == lo_[s] ? kAtLower : kAtUpper;
                xval_[s] = clamped;
                const double r = resid[i] - clamped;
                const int a = n_total_;
                cols_.push_back({{i, r >= 0 ? 1.0 : -1.0}});
                lo_.push_back(0.0);
                hi_.push_back(kInf);
                xval_.push_back(0.0);
                state_.push_back(kBasic);
                phase2_obj_.push_back(0.0);
                basis_[i] = a;
                beta_[i] = std::abs(r);
                ++n_total_;
                ++num_artificial_;
            }
        }
        phase1_obj_.assign(n_total_, 0.0);
        for (int j = n_struct_ + m_; j < n_total_; ++j) phase1_obj_[j] = -1.0;

        // initial basis is diagonal: +1 slack rows, +-1 artificial rows
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i)
            binv_[static_cast<std::size_t>(i) * m_ + i] = cols_[basis_[i]].front().second;
    }

    double* binv_row(int i) { return binv_.data() + static_cast<std::size_t>(i) * m_; }

    // alpha = B^-1 * A_q
    void ftran(int q, std::vector<double>& alpha) {
        alpha.assign(m_, 0.0);
        for (const auto& [r, v] : cols_[q])
            for (int i = 0; i < m_; ++i)
                alpha[i] += v * binv_[static_cast<std::size_t>(i) * m_ + r];
    }

    double phase_objective(const std::vector<double>& c) const {
        double v = 0.0;
        for (int j = 0; j < n_total_; ++j) {
            if (state_[j] == kBasic) continue;
            if (c[j] != 0.0) v += c[j] * xval_[j];
        }
        for (int i = 0; i < m_; ++i)
            if (c[basis_[i]] != 0.0) v += c[basis_[i]] * beta_[i];
        return v;
    }

    SolveStatus iterate(const std::vector<double>& c) {
        const auto deadline = Clock::now() +
                              std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(
                                      std::isfinite(opts_.time_limit_s) ? opts_.time_limit_s
                                                                        : 1e9));
        std::vector<double> y(m_), alpha(m_);
        int degen_streak = 0;
        bool bland = false;
        const long long iter_cap = 50LL * (m_ + n_total_) + 20'000;
        for (long long it = 0;; ++it, ++iterations_) {
            if (it > iter_cap) return SolveStatus::NumericFailure;
            if ((it & 63) == 0 && Clock::now() > deadline) return SolveStatus::TimeLimit;
            if (it > 0 && it % kBetaRefreshPeriod == 0 && !recompute_beta())
                return SolveStatus::NumericFailure;

            // y = c_B^T B^-1
            std::fill(y.begin(), y.end(), 0.0);
            for (int i = 0; i < m_; ++i) {
                const double cb = c[basis_[i]];
                if (cb == 0.0) continue;
                const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
                for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
            }

            // pricing
            int q = -1;
            int dir = 0;
            double best = opts_.opt_tol;
            for (int j = 0; j < n_total_; ++j) {
                if (state_[j] == kBasic || lo_[j] >= hi_[j]) continue;
                double d = c[j];
                for (const auto& [i, v] : cols_[j]) d -= y[i] * v;
                int jdir = 0;
                if (state_[j] == kAtLower && d > opts_.opt_tol) jdir = +1;
                else if (state_[j] == kAtUpper && d < -opts_.opt_tol) jdir = -1;
                else if (state_[j] == kFreeZero && std::abs(d) > opts_.opt_tol)
                    jdir = d > 0 ? +1 : -1;
                if (jdir == 0) continue;
                if (bland) { q = j; dir = jdir; break; }
                if (std::abs(d) > best) { best = std::abs(d); q = j; dir = jdir; }
            }
            if (q < 0) return SolveStatus::Optimal;

            ftran(q, alpha);

            // ratio test: entering moves by dir * step
            double step = hi_[q] - lo_[q]; // own range; may be inf
            int leave_row = -1;
            double leave_bound = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double rate = -dir * alpha[i];
                if (std::abs(rate) <= kPivotTol) continue;
                const int bj = basis_[i];
                double limit;
                double bnd;
                if (rate > 0) {
                    if (!std::isfinite(hi_[bj])) continue;
                    limit = (hi_[bj] - beta_[i]) / rate;
                    bnd = hi_[bj];
                } else {
                    if (!std::isfinite(lo_[bj])) continue;
                    limit = (lo_[bj] - beta_[i]) / rate;
                    bnd = lo_[bj];
                }
                if (limit < -1e-9) limit = 0.0; // beta drift guard
                if (limit < step - 1e-12 ||
                    (leave_row >= 0 && limit < step + 1e-12 && basis_[i] < basis_[leave_row])) {
                    step = std::max(0.0, limit);
                    leave_row = i;
                    leave_bound = bnd;
                }
            }

            if (!std::isfinite(step)) return SolveStatus::Unbounded;

            if (step <= kDegenStep) {
                if (++degen_streak >= kBlandTrigger) bland = true;
            } else {
                degen_streak = 0;
                bland = false;
            }

            // apply movement to basics
            if (step > 0.0)
                for (int i = 0; i < m_; ++i)
                    if (std::abs(alpha[i]) > 0.0) beta_[i] -= dir * step * alpha[i];

            if (leave_row < 0) {
                // bound flip: entering runs to its opposite bound
                xval_[q] = dir > 0 ? hi_[q] : lo_[q];
                state_[q] = dir > 0 ? kAtUpper : kAtLower;
                if (state_[q] == kAtUpper && !std::isfinite(hi_[q]))
                    return SolveStatus::NumericFailure;
                continue;
            }

            // basis change
            const double enter_val =
                (state_[q] == kFreeZero ? 0.0 : xval_[q]) + dir * step;
            const int leaving = basis_[leave_row];
            const double piv = alpha[leave_row];
            if (std::abs(piv) <= kPivotTol) return SolveStatus::NumericFailure;

            state_[leaving] = leave_bound == lo_[leaving] ? kAtLower : kAtUpper;
            xval_[leaving] = leave_bound;
            basis_[leave_row] = q;
            state_[q] = kBasic;
            beta_[leave_row] = enter_val;

            // B^-1 update: scale pivot row, eliminate elsewhere
            double* prow = binv_row(leave_row);
            const double inv = 1.0 / piv;
            for (int k = 0; k < m_; ++k) prow[k] *= inv;
            for (int i = 0; i < m_; ++i) {
                if (i == leave_row) continue;
                const double f = alpha[i];
                if (f == 0.0) continue;
                double* row = binv_row(i);
                for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
            }
        }
    }

    // beta = B^-1 (b - N x_N)
    bool recompute_beta() {
        std::vector<double> r(rhs_);
        for (int j = 0; j < n_total_; ++j) {
            if (state_[j] == kBasic || xval_[j] == 0.0) continue;
            for (const auto& [i, v] : cols_[j]) r[i] -= v * xval_[j];
        }
        for (int i = 0; i < m_; ++i) {
            const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += row[k] * r[k];
            beta_[i] = s;
            if (!std::isfinite(s)) return false;
        }
        return true;
    }

    // Rebuild binv from the basis columns by Gauss-Jordan with partial pivoting.
    bool refactor() {
        std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int col = 0; col < m_; ++col)
            for (const auto& [i, v] : cols_[basis_[col]])
                mat[static_cast<std::size_t>(i) * m_ + col] = v;
        std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
        for (int col = 0; col < m_; ++col) {
            int piv = -1;
            double best = 1e-12;
            for (int i = col; i < m_; ++i) {
                const double v = std::abs(mat[static_cast<std::size_t>(i) * m_ + col]);
                if (v > best) { best = v; piv = i; }
            }
            if (piv < 0) return false;
            if (piv != col) {
                for (int k = 0; k < m_; ++k) {
                    std::swap(mat[static_cast<std::size_t>(piv) * m_ + k],
                              mat[static_cast<std::size_t>(col) * m_ + k]);
                    std::swap(inv[static_cast<std::size_t>(piv) * m_ + k],
                              inv[static_cast<std::size_t>(col) * m_ + k]);
                }
            }
            const double p = mat[static_cast<std::size_t>(col) * m_ + col];
            const double pinv = 1.0 / p;
            for (int k = 0; k < m_; ++k) {
                mat[static_cast<std::size_t>(col) * m_ + k] *= pinv;
                inv[static_cast<std::size_t>(col) * m_ + k] *= pinv;
            }
            for (int i = 0; i < m_; ++i) {
                if (i == col) continue;
                const double f = mat[static_cast<std::size_t>(i) * m_ + col];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    mat[static_cast<std::size_t>(i) * m_ + k] -=
                        f * mat[static_cast<std::size_t>(col) * m_ + k];
                    inv[static_cast<std::size_t>(i) * m_ + k] -=
                        f * inv[static_cast<std::size_t>(col) * m_ + k];
                }
            }
        }
        binv_ = std::move(inv);
        return true;
    }

    std::vector<double> compose() const {
        std::vector<double> x(static_cast<std::size_t>(n_struct_), 0.0);
        for (int j = 0; j < n_struct_; ++j) x[j] = xval_[j];
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_struct_) x[basis_[i]] = beta_[i];
        return x;
    }

    const SolveOptions opts_;
    const MilpModel& model_;

    int m_ = 0;
    int n_struct_ = 0;
    int n_total_ = 0;
    int num_artificial_ = 0;

    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lo_, hi_, rhs_;
    std::vector<double> phase1_obj_, phase2_obj_;

    std::vector<int> basis_;
    std::vector<signed char> state_;
    std::vector<double> xval_;
    std::vector<double> beta_;
    std::vector<double> binv_;

    long long iterations_ = 0;
};

} // namespace

SolveResult solve_lp(const MilpModel& m, bool relax_integrality, const SolveOptions& opts) {
    m.validate();
    Simplex s(m, relax_integrality, opts);
    return s.run();
}

} // namespace trp
