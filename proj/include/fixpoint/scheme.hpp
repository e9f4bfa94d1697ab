#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixpoint/operators.hpp"
#include "fixpoint/spaces.hpp"

namespace fixpoint {

//! Parametric step-size sequence s_n = a / (n + b)^q, clamped to [0, 1].
//! a = 0 gives the identically-zero schedule (the Mann reduction).
class ScheduleSpec {
public:
    ScheduleSpec(double a, double b, double q);

    double value(long n) const;
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double q() const noexcept { return q_; }

    //! lim s_n = 0, decided symbolically from the parameters.
    bool vanishes() const noexcept { return a_ == 0.0 || q_ > 0.0; }
    //! sum s_n = inf, decided by the p-series rule, never by summation.
    bool sum_diverges() const noexcept { return a_ > 0.0 && q_ <= 1.0; }

private:
    double a_;
    double b_;
    double q_;
};

//! Full description of a multi-step run: operators T_1..T_p, the outer
//! schedule alpha, inner schedules beta^1..beta^{p-1}, and diagnostics.
struct IterationConfig {
    std::vector<OperatorSpec> operators;
    ScheduleSpec alpha;
    std::vector<ScheduleSpec> betas;
    Point x1;
    std::optional<Point> xstar;
    long n_max = 1000;
    double tol = 0.0;
    double diag_scale = 1.0;  // the M in d_n = M ||T_1^n y_n^1 - T_1^n x_{n+1}||
    NormTag norm_tag{2.0};

    std::size_t stage_count() const noexcept { return operators.size(); }
    void validate_config() const;
};

struct TraceRecord {
    long n = 0;
    Point x;                          // x_n
    std::vector<Point> ys;            // y_n^1 .. y_n^{p-1}
    std::optional<double> residual;   // ||x_n - xstar|| when xstar given
    double pair_gap = 0.0;            // ||y_n^1 - x_{n+1}||
    double dn = 0.0;                  // M ||T_1^n y_n^1 - T_1^n x_{n+1}||
};

//! Symbolic classification of the step-size hypotheses.
struct HypothesisReport {
    bool cond_i = false;   // alpha_n -> 0 and beta_n^1 -> 0
    bool cond_ii = false;  // sum alpha_n = inf
    bool p_valid = false;  // at least two operators
    std::string notes;
};

enum class Termination { converged, reached_n_max };

struct RunResult {
    std::vector<TraceRecord> trace;
    Termination termination = Termination::reached_n_max;
    long final_n = 0;
    std::optional<double> final_residual;
};

struct StepResult {
    Point x_next;
    std::vector<Point> ys;  // y^1 .. y^{p-1}
    Point t1n_y1;           // T_1^n y^1, reused by the d_n diagnostic
};

//! An iterate or operator power left the trusted range (|coord| > 1e150
//! or non-finite). Carries the offending stage and any complete records.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string stage, long step, std::vector<TraceRecord> partial);

    const std::string& stage() const noexcept { return stage_; }
    long step_index() const noexcept { return step_; }
    const std::vector<TraceRecord>& partial_trace() const noexcept { return partial_; }

private:
    std::string stage_;
    long step_;
    std::vector<TraceRecord> partial_;
};

HypothesisReport classify_hypotheses(const ScheduleSpec& alpha, const ScheduleSpec& beta1,
                                     std::size_t operator_count);
HypothesisReport classify_hypotheses(const IterationConfig& config);

//! One step of the scheme at index n: y^{p-1} from x_n, then y^i for
//! i = p-2..1, then x_{n+1} = (1-alpha_n) x_n + alpha_n T_1^n y^1.
StepResult step(const IterationConfig& config, const Point& x, long n);

//! Iterate from x_1 until n_max or, when xstar is given, until
//! ||x_{n+1} - xstar|| <= tol. The trace has one complete record per
//! step; on convergence a terminal record evaluates one extra step so
//! every row carries pair_gap and d_n.
RunResult run(const IterationConfig& config);

//! pass iff d_n <= M L pair_gap_n (within tolerance) for every record.
CheckReport dn_bound_check(const std::vector<TraceRecord>& trace, double lipschitz_bound,
                           double diag_scale);

}  // namespace fixpoint
