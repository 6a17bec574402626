#include "cotforge/simplex.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cotforge/errors.hpp"

namespace cotforge {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static double zero_tol() { return 1e-11; }      // "is this coefficient zero"
    static double price_tol() { return 1e-9; }      // reduced-cost optimality
    static double objective_tol() { return 1e-7; }  // positive objective = infeasible
    static double snap_tol() { return 1e-12; }      // basic values this close to 0 are 0
    static double from_double(double v) { return v; }
    static double to_double(const double& v) { return v; }
};

template <>
struct ScalarTraits<Rational> {
    static Rational zero_tol() { return 0; }
    static Rational price_tol() { return 0; }
    static Rational objective_tol() { return 0; }
    static Rational snap_tol() { return 0; }
    static Rational from_double(double v) {
        return Rational(static_cast<long long>(v));  // caller guarantees integrality
    }
    static double to_double(const Rational& v) { return static_cast<double>(v); }
};

enum class SolveStatus { Feasible, Infeasible, Stalled };

// Bounded-variable simplex for  max 1'y  s.t.  A y = 0, 0 <= y <= 1,
// where A is dim x m with columns cols[j]; this is the dual of the phase-1
// violation LP for the margin system rows[j] . w >= 1. Columns m..m+dim-1
// are artificial identity columns pinned to [0,0]; they form the starting
// basis (y = 0 is feasible since the right-hand side is zero).
//
// The whole run is degenerate (every feasible point of a feasible instance
// has objective 0), so anti-cycling matters more than pricing: basic values
// are snapped to exact zeros and ties in the ratio test resolve by smallest
// basis variable index (Bland). Dantzig pricing runs first for speed and
// hands over to Bland after a stall.
template <typename Scalar>
class BoundedDualSimplex {
public:
    BoundedDualSimplex(const std::vector<std::vector<double>>& rows, int dim)
        : d_(dim), m_(static_cast<int>(rows.size())) {
        cols_.resize(static_cast<std::size_t>(m_ + d_));
        for (int j = 0; j < m_; ++j) {
            auto& col = cols_[static_cast<std::size_t>(j)];
            col.resize(static_cast<std::size_t>(d_));
            for (int i = 0; i < d_; ++i)
                col[static_cast<std::size_t>(i)] = ScalarTraits<Scalar>::from_double(
                    rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < d_; ++i) {
            auto& col = cols_[static_cast<std::size_t>(m_ + i)];
            col.assign(static_cast<std::size_t>(d_), Scalar(0));
            col[static_cast<std::size_t>(i)] = Scalar(1);
        }
        status_.assign(static_cast<std::size_t>(m_ + d_), AtLower);
        basis_.resize(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) {
            basis_[static_cast<std::size_t>(i)] = m_ + i;
            status_[static_cast<std::size_t>(m_ + i)] = Basic;
        }
        binv_.assign(static_cast<std::size_t>(d_) * static_cast<std::size_t>(d_), Scalar(0));
        for (int i = 0; i < d_; ++i) binv_[idx(i, i)] = Scalar(1);
        xb_.assign(static_cast<std::size_t>(d_), Scalar(0));
    }

    SolveStatus solve(std::vector<double>& w, int& iterations) {
        const Scalar obj_tol = ScalarTraits<Scalar>::objective_tol();
        const long max_iters = 20000L + 200L * (m_ + d_);
        long stall = 0;
        bland_ = std::is_same_v<Scalar, Rational>;  // exact mode: Bland throughout
        long iter = 0;
        for (; iter < max_iters; ++iter) {
            if (objective_ > obj_tol) {
                iterations = static_cast<int>(iter);
                return SolveStatus::Infeasible;  // weak duality: min violation > 0
            }
            compute_multipliers();
            int enter = price(bland_);
            if (enter < 0 && std::is_same_v<Scalar, double>) {
                // Confirm optimality on a fresh factorization before trusting it.
                refactorize();
                compute_multipliers();
                enter = price(true);
            }
            if (enter < 0) break;
            if (!pivot(enter)) {
                if (++stall > 4L * (d_ + 16)) bland_ = true;
            } else {
                stall = 0;
            }
        }
        iterations = static_cast<int>(iter);
        if (iter >= max_iters) return SolveStatus::Stalled;
        if (objective_ > obj_tol) return SolveStatus::Infeasible;

        compute_multipliers();
        if constexpr (std::is_same_v<Scalar, Rational>) {
            // The certificate is exact in rationals; margins can sit exactly
            // at 1 there and round below 1.0 in double. Check exactly, then
            // convert with a slight scale-up to absorb conversion rounding.
            for (int j = 0; j < m_; ++j) {
                Scalar acc(0);
                const auto& col = cols_[static_cast<std::size_t>(j)];
                for (int i = 0; i < d_; ++i)
                    if (col[static_cast<std::size_t>(i)] != Scalar(0))
                        acc += pi_[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(i)];
                if (acc < Scalar(1)) throw Error("simplex: exact certificate violates a margin");
            }
        }
        w.resize(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i)
            w[static_cast<std::size_t>(i)] =
                ScalarTraits<Scalar>::to_double(pi_[static_cast<std::size_t>(i)]) *
                (std::is_same_v<Scalar, Rational> ? 1.0 + 1e-6 : 1.0);
        return SolveStatus::Feasible;
    }

private:
    enum Status : std::uint8_t { AtLower, AtUpper, Basic };

    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(d_) +
               static_cast<std::size_t>(c);
    }

    Scalar cost(int j) const { return j < m_ ? Scalar(1) : Scalar(0); }
    Scalar upper(int j) const { return j < m_ ? Scalar(1) : Scalar(0); }

    void compute_multipliers() {
        pi_.assign(static_cast<std::size_t>(d_), Scalar(0));
        for (int k = 0; k < d_; ++k) {
            const int j = basis_[static_cast<std::size_t>(k)];
            if (j >= m_) continue;  // artificial cost 0
            for (int i = 0; i < d_; ++i) pi_[static_cast<std::size_t>(i)] += binv_[idx(k, i)];
        }
    }

    Scalar reduced_cost(int j) const {
        Scalar rc = cost(j);
        const auto& col = cols_[static_cast<std::size_t>(j)];
        for (int i = 0; i < d_; ++i) {
            if (col[static_cast<std::size_t>(i)] != Scalar(0))
                rc -= pi_[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(i)];
        }
        return rc;
    }

    // Column norms for normalized pricing (computed lazily once).
    void ensure_norms() {
        if (!norms_.empty()) return;
        norms_.resize(static_cast<std::size_t>(m_));
        for (int j = 0; j < m_; ++j) {
            double acc = 0.0;
            for (const auto& v : cols_[static_cast<std::size_t>(j)]) {
                const double dv = ScalarTraits<Scalar>::to_double(v);
                acc += dv * dv;
            }
            norms_[static_cast<std::size_t>(j)] = acc > 0 ? std::sqrt(acc) : 1.0;
        }
    }

    int price(bool bland) {
        const Scalar tol = ScalarTraits<Scalar>::price_tol();
        ensure_norms();
        int best = -1;
        double best_score = 0.0;
        for (int j = 0; j < m_; ++j) {
            if (status_[static_cast<std::size_t>(j)] == Basic) continue;
            const Scalar rc = reduced_cost(j);
            Scalar gain(0);
            if (status_[static_cast<std::size_t>(j)] == AtLower && rc > tol)
                gain = rc;
            else if (status_[static_cast<std::size_t>(j)] == AtUpper && rc < -tol)
                gain = -rc;
            else
                continue;
            if (bland) return j;
            const double score =
                ScalarTraits<Scalar>::to_double(gain) / norms_[static_cast<std::size_t>(j)];
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        return best;
    }

    // Fixed total order for Bland's rule: artificials sort before real
    // columns, so they leave the basis as early as possible.
    int order_key(int j) const { return j >= m_ ? j - m_ : d_ + j; }

    // Ratio test + basis update. Returns whether the objective moved.
    bool pivot(int enter) {
        const Scalar zero_tol = ScalarTraits<Scalar>::zero_tol();
        const Scalar snap = ScalarTraits<Scalar>::snap_tol();
        const bool from_lower = status_[static_cast<std::size_t>(enter)] == AtLower;

        // u = B^{-1} A_enter
        std::vector<Scalar> u(static_cast<std::size_t>(d_), Scalar(0));
        const auto& col = cols_[static_cast<std::size_t>(enter)];
        for (int i = 0; i < d_; ++i) {
            if (col[static_cast<std::size_t>(i)] == Scalar(0)) continue;
            for (int k = 0; k < d_; ++k)
                u[static_cast<std::size_t>(k)] +=
                    binv_[idx(k, i)] * col[static_cast<std::size_t>(i)];
        }

        // Moving the entering variable by t >= 0 (increasing from lower /
        // decreasing from upper) changes basic k by -u_k * sign * t.
        const Scalar sign = from_lower ? Scalar(1) : Scalar(-1);
        Scalar limit = upper(enter);  // bound-flip distance
        int leave_row = -1;
        bool leave_to_upper = false;
        for (int k = 0; k < d_; ++k) {
            const Scalar uk = u[static_cast<std::size_t>(k)] * sign;
            Scalar allowed;
            bool to_upper;
            if (uk > zero_tol) {  // basic decreases toward its lower bound 0
                allowed = xb_[static_cast<std::size_t>(k)] / uk;
                to_upper = false;
            } else if (uk < -zero_tol) {  // basic increases toward its upper bound
                allowed =
                    (upper(basis_[static_cast<std::size_t>(k)]) - xb_[static_cast<std::size_t>(k)]) /
                    (-uk);
                to_upper = true;
            } else {
                continue;
            }
            if (allowed < Scalar(0)) allowed = Scalar(0);
            bool take = false;
            if (leave_row < 0 || allowed < limit) {
                take = true;
            } else if (allowed == limit) {
                // Tie. Bland mode: smallest order key (anti-cycling). Fast
                // mode: kick artificials first, then take the largest pivot.
                const int cur = basis_[static_cast<std::size_t>(leave_row)];
                const int cand = basis_[static_cast<std::size_t>(k)];
                if (bland_) {
                    take = order_key(cand) < order_key(cur);
                } else if ((cand >= m_) != (cur >= m_)) {
                    take = cand >= m_;
                } else {
                    Scalar mag_cur = u[static_cast<std::size_t>(leave_row)];
                    if (mag_cur < Scalar(0)) mag_cur = -mag_cur;
                    Scalar mag_cand = u[static_cast<std::size_t>(k)];
                    if (mag_cand < Scalar(0)) mag_cand = -mag_cand;
                    take = mag_cand > mag_cur;
                }
            }
            if (take) {
                limit = allowed;
                leave_row = k;
                leave_to_upper = to_upper;
            }
        }

        const Scalar t = limit;
        const Scalar rc = reduced_cost(enter);
        objective_ += (from_lower ? rc : -rc) * t;

        if (t != Scalar(0)) {
            for (int k = 0; k < d_; ++k) {
                xb_[static_cast<std::size_t>(k)] -= u[static_cast<std::size_t>(k)] * sign * t;
                if (snap != Scalar(0)) {
                    Scalar mag = xb_[static_cast<std::size_t>(k)];
                    if (mag < Scalar(0)) mag = -mag;
                    if (mag < snap) xb_[static_cast<std::size_t>(k)] = Scalar(0);
                }
            }
        }

        if (leave_row < 0) {
            // Bound flip: entering runs to its opposite bound, basis unchanged.
            status_[static_cast<std::size_t>(enter)] = from_lower ? AtUpper : AtLower;
            return t > Scalar(0);
        }

        const int leave = basis_[static_cast<std::size_t>(leave_row)];
        status_[static_cast<std::size_t>(leave)] = leave_to_upper ? AtUpper : AtLower;
        basis_[static_cast<std::size_t>(leave_row)] = enter;
        status_[static_cast<std::size_t>(enter)] = Basic;
        xb_[static_cast<std::size_t>(leave_row)] = from_lower ? t : upper(enter) - t;

        const Scalar piv = u[static_cast<std::size_t>(leave_row)];
        if (piv == Scalar(0)) throw Error("simplex: zero pivot");
        for (int i = 0; i < d_; ++i) binv_[idx(leave_row, i)] /= piv;
        for (int k = 0; k < d_; ++k) {
            if (k == leave_row) continue;
            const Scalar factor = u[static_cast<std::size_t>(k)];
            if (factor == Scalar(0)) continue;
            for (int i = 0; i < d_; ++i) binv_[idx(k, i)] -= factor * binv_[idx(leave_row, i)];
        }
        if (std::is_same_v<Scalar, double> && ++pivots_since_refactor_ >= 128) refactorize();
        return t > Scalar(0);
    }

    // Recompute B^{-1} and basic values from scratch (floating point hygiene).
    void refactorize() {
        pivots_since_refactor_ = 0;
        std::vector<Scalar> mat(static_cast<std::size_t>(d_) * static_cast<std::size_t>(2 * d_),
                                Scalar(0));
        auto at = [&](int r, int c) -> Scalar& {
            return mat[static_cast<std::size_t>(r) * static_cast<std::size_t>(2 * d_) +
                       static_cast<std::size_t>(c)];
        };
        for (int k = 0; k < d_; ++k) {
            const auto& col = cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])];
            for (int i = 0; i < d_; ++i) at(i, k) = col[static_cast<std::size_t>(i)];
            at(k, d_ + k) = Scalar(1);
        }
        for (int c = 0; c < d_; ++c) {
            int best = -1;
            Scalar best_abs(0);
            for (int r = c; r < d_; ++r) {
                Scalar a = at(r, c);
                if (a < Scalar(0)) a = -a;
                if (a > best_abs) {
                    best_abs = a;
                    best = r;
                }
            }
            if (best < 0) throw Error("simplex: singular basis during refactorization");
            if (best != c)
                for (int i = 0; i < 2 * d_; ++i) std::swap(at(c, i), at(best, i));
            const Scalar piv = at(c, c);
            for (int i = 0; i < 2 * d_; ++i) at(c, i) /= piv;
            for (int r = 0; r < d_; ++r) {
                if (r == c) continue;
                const Scalar factor = at(r, c);
                if (factor == Scalar(0)) continue;
                for (int i = 0; i < 2 * d_; ++i) at(r, i) -= factor * at(c, i);
            }
        }
        // The elimination permutes rows to identity in column order; columns
        // d_..2d_-1 now hold B^{-1} with row k matching basis slot k.
        for (int k = 0; k < d_; ++k)
            for (int i = 0; i < d_; ++i) binv_[idx(k, i)] = at(k, d_ + i);

        // x_B = -B^{-1} N x_N; only columns at their upper bound contribute.
        xb_.assign(static_cast<std::size_t>(d_), Scalar(0));
        for (int j = 0; j < m_; ++j) {
            if (status_[static_cast<std::size_t>(j)] != AtUpper) continue;
            const auto& col = cols_[static_cast<std::size_t>(j)];
            for (int k = 0; k < d_; ++k) {
                Scalar acc(0);
                for (int i = 0; i < d_; ++i)
                    if (col[static_cast<std::size_t>(i)] != Scalar(0))
                        acc += binv_[idx(k, i)] * col[static_cast<std::size_t>(i)];
                xb_[static_cast<std::size_t>(k)] -= acc;
            }
        }
        const Scalar snap = ScalarTraits<Scalar>::snap_tol();
        if (snap != Scalar(0)) {
            for (auto& v : xb_) {
                Scalar mag = v < Scalar(0) ? -v : v;
                if (mag < snap) v = Scalar(0);
            }
        }
        // Recompute the objective from scratch as well.
        objective_ = Scalar(0);
        for (int j = 0; j < m_; ++j)
            if (status_[static_cast<std::size_t>(j)] == AtUpper) objective_ += Scalar(1);
        for (int k = 0; k < d_; ++k)
            if (basis_[static_cast<std::size_t>(k)] < m_)
                objective_ += xb_[static_cast<std::size_t>(k)];
    }

    int d_;
    int m_;
    std::vector<std::vector<Scalar>> cols_;
    std::vector<Status> status_;
    std::vector<int> basis_;
    std::vector<Scalar> binv_;  // row k = row of B^{-1} for basis slot k
    std::vector<Scalar> xb_;
    std::vector<Scalar> pi_;
    std::vector<double> norms_;
    Scalar objective_{0};
    int pivots_since_refactor_ = 0;
    bool bland_ = false;
};

bool rows_are_integral(const std::vector<std::vector<double>>& rows) {
    for (const auto& row : rows)
        for (double v : row)
            if (v != std::floor(v) || std::abs(v) > 1e15) return false;
    return true;
}

bool margins_hold(const std::vector<std::vector<double>>& rows, const std::vector<double>& w) {
    for (const auto& row : rows) {
        double acc = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * w[i];
        if (!(acc >= 1.0)) return false;
    }
    return true;
}

SolveStatus solve_with(const std::vector<std::vector<double>>& rows, int dim, bool exact,
                       MarginSolveResult& res) {
    if (exact) {
        BoundedDualSimplex<Rational> solver(rows, dim);
        return solver.solve(res.w, res.iterations);
    }
    BoundedDualSimplex<double> solver(rows, dim);
    return solver.solve(res.w, res.iterations);
}

}  // namespace

MarginSolveResult solve_margin_system(const std::vector<std::vector<double>>& rows, int dim,
                                      SolverEngine engine) {
    if (dim <= 0) throw Error("solve_margin_system: dimension must be positive");
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != dim)
            throw Error("solve_margin_system: row length differs from dimension");

    MarginSolveResult res;
    if (rows.empty()) {
        res.feasible = true;
        res.w.assign(static_cast<std::size_t>(dim), 0.0);
        return res;
    }

    const bool integral = rows_are_integral(rows);
    const auto run_exact = [&]() {
        if (!integral) throw Error("exact engine requires integral row entries");
        const SolveStatus status = solve_with(rows, dim, true, res);
        if (status == SolveStatus::Stalled)
            throw Error("exact simplex did not terminate within its iteration budget");
        res.feasible = status == SolveStatus::Feasible;
        if (res.feasible && !margins_hold(rows, res.w))
            throw Error("exact solver produced a certificate that fails verification");
    };

    if (engine == SolverEngine::ExactRational) {
        run_exact();
        return res;
    }

    // Floating point first. A feasible verdict must survive exact margin
    // re-verification (after a slight scale-up absorbing the 1e-9 solver
    // tolerance); anything questionable escalates to the exact engine.
    const SolveStatus status = solve_with(rows, dim, false, res);
    if (status == SolveStatus::Feasible) {
        for (auto& v : res.w) v *= 1.0 + 1e-5;
        if (margins_hold(rows, res.w)) {
            res.feasible = true;
            return res;
        }
    }
    if (engine == SolverEngine::FloatingPoint) {
        if (status == SolveStatus::Stalled)
            throw Error("floating-point simplex did not converge; use the Auto engine");
        if (status == SolveStatus::Feasible)
            throw Error("floating-point solution failed margin verification");
        res.feasible = false;
        return res;
    }

    if (integral) {
        run_exact();
        return res;
    }
    if (status == SolveStatus::Stalled)
        throw Error("simplex did not converge and the input is not integral");
    res.feasible = false;
    return res;
}

}  // namespace cotforge
