#include "fixpoint/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixpoint/errors.hpp"
#include "fixpoint/tolerances.hpp"

namespace fixpoint {

ScheduleSpec::ScheduleSpec(double a, double b, double q) : a_(a), b_(b), q_(q) {
    if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
        throw InvalidInput("schedule amplitude a must lie in [0, 1], got " +
                           std::to_string(a));
    }
    if (!std::isfinite(b) || b < 0.0) {
        throw InvalidInput("schedule shift b must be >= 0, got " + std::to_string(b));
    }
    if (!std::isfinite(q) || q < 0.0) {
        throw InvalidInput("schedule exponent q must be >= 0, got " + std::to_string(q));
    }
}

double ScheduleSpec::value(long n) const {
    if (n < 1) throw InvalidInput("schedule index must be >= 1");
    const double v = a_ / std::pow(static_cast<double>(n) + b_, q_);
    return std::min(1.0, std::max(0.0, v));
}

void IterationConfig::validate_config() const {
    if (operators.size() < 2) {
        throw InvalidInput("the scheme needs p >= 2 operators, got p = " +
                           std::to_string(operators.size()));
    }
    if (betas.size() + 1 != operators.size()) {
        throw InvalidInput("expected p - 1 = " + std::to_string(operators.size() - 1) +
                           " beta schedules, got " + std::to_string(betas.size()));
    }
    validate(x1);
    const std::size_t d = x1.dim();
    for (const auto& op : operators) {
        if (op.dim() != d) {
            throw InvalidInput("operator dimension " + std::to_string(op.dim()) +
                               " does not match iterate dimension " + std::to_string(d));
        }
    }
    if (xstar) {
        validate(*xstar);
        if (xstar->dim() != d) {
            throw InvalidInput("xstar dimension " + std::to_string(xstar->dim()) +
                               " does not match iterate dimension " + std::to_string(d));
        }
    }
    if (n_max < 1) throw InvalidInput("n_max must be >= 1");
    if (!std::isfinite(tol) || tol < 0.0) throw InvalidInput("tol must be >= 0");
    if (!std::isfinite(diag_scale) || diag_scale <= 0.0) {
        throw InvalidInput("diagnostic scale M must be > 0");
    }
}

DivergenceError::DivergenceError(std::string stage, long step,
                                 std::vector<TraceRecord> partial)
    : std::runtime_error("divergence at step " + std::to_string(step) + ", stage " + stage),
      stage_(std::move(stage)),
      step_(step),
      partial_(std::move(partial)) {}

namespace {

std::string schedule_note(const char* name, const ScheduleSpec& s) {
    std::ostringstream os;
    os << name << ": q=" << s.q();
    if (s.a() == 0.0) {
        os << " (zero schedule)";
    }
    os << " -> terms " << (s.vanishes() ? "vanish" : "do not vanish") << ", series "
       << (s.sum_diverges() ? "diverges" : "converges") << " (p-series rule)";
    return os.str();
}

}  // namespace

HypothesisReport classify_hypotheses(const ScheduleSpec& alpha, const ScheduleSpec& beta1,
                                     std::size_t operator_count) {
    HypothesisReport rep;
    rep.cond_i = alpha.vanishes() && beta1.vanishes();
    rep.cond_ii = alpha.sum_diverges();
    rep.p_valid = operator_count >= 2;
    rep.notes = schedule_note("alpha", alpha) + "; " + schedule_note("beta^1", beta1);
    return rep;
}

HypothesisReport classify_hypotheses(const IterationConfig& config) {
    config.validate_config();
    return classify_hypotheses(config.alpha, config.betas.front(), config.operators.size());
}

namespace {

// Throws when a stage output leaves the trusted range.
void guard(const Point& v, const char* stage, long n) {
    for (double c : v.coords) {
        if (!std::isfinite(c) || std::abs(c) > tol::kDivergenceGuard) {
            throw DivergenceError(stage, n, {});
        }
    }
}

Point guarded_power(const OperatorSpec& op, long n, const Point& x, const std::string& stage) {
    try {
        Point out = power_apply(op, n, x);
        guard(out, stage.c_str(), n);
        return out;
    } catch (const PowerOverflow&) {
        throw DivergenceError(stage, n, {});
    }
}

}  // namespace

StepResult step(const IterationConfig& config, const Point& x, long n) {
    if (n < 1) throw InvalidInput("step index must be >= 1");
    validate(x);
    const std::size_t p = config.operators.size();

    // Bottom-up: y^{p-1} depends only on x_n, each y^i on y^{i+1}.
    std::vector<Point> ys(p - 1);
    const double beta_last = config.betas[p - 2].value(n);
    Point t_last = guarded_power(config.operators[p - 1], n, x,
                                 "T_" + std::to_string(p) + "^n x_n");
    ys[p - 2] = lerp(x, t_last, beta_last);
    guard(ys[p - 2], "y^{p-1}", n);

    for (std::size_t i = p - 2; i >= 1; --i) {
        const double beta = config.betas[i - 1].value(n);
        Point t = guarded_power(config.operators[i], n, ys[i],
                                "T_" + std::to_string(i + 1) + "^n y^" + std::to_string(i + 1));
        ys[i - 1] = lerp(x, t, beta);
        guard(ys[i - 1], "y^i", n);
    }

    StepResult out;
    out.t1n_y1 = guarded_power(config.operators[0], n, ys[0], "T_1^n y^1");
    out.x_next = lerp(x, out.t1n_y1, config.alpha.value(n));
    guard(out.x_next, "x_{n+1}", n);
    out.ys = std::move(ys);
    return out;
}

namespace {

TraceRecord make_record(const IterationConfig& config, const Point& x, long n,
                        const StepResult& sr) {
    TraceRecord rec;
    rec.n = n;
    rec.x = x;
    rec.ys = sr.ys;
    if (config.xstar) {
        rec.residual = norm(difference(x, *config.xstar), config.norm_tag);
    }
    rec.pair_gap = norm(difference(sr.ys.front(), sr.x_next), config.norm_tag);
    const Point t1_next = guarded_power(config.operators[0], n, sr.x_next, "d_n diagnostic");
    rec.dn = config.diag_scale * norm(difference(sr.t1n_y1, t1_next), config.norm_tag);
    return rec;
}

}  // namespace

RunResult run(const IterationConfig& config) {
    config.validate_config();

    RunResult result;
    Point x = config.x1;
    for (long n = 1; n <= config.n_max; ++n) {
        StepResult sr;
        try {
            sr = step(config, x, n);
            result.trace.push_back(make_record(config, x, n, sr));
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.stage(), e.step_index(), std::move(result.trace));
        }

        if (config.xstar) {
            const double next_residual =
                norm(difference(sr.x_next, *config.xstar), config.norm_tag);
            if (next_residual <= config.tol) {
                // Terminal record: evaluate one extra step from x_{n+1} so the
                // final row still carries pair_gap and d_n.
                try {
                    const StepResult last = step(config, sr.x_next, n + 1);
                    result.trace.push_back(make_record(config, sr.x_next, n + 1, last));
                } catch (const DivergenceError& e) {
                    throw DivergenceError(e.stage(), e.step_index(), std::move(result.trace));
                }
                result.termination = Termination::converged;
                result.final_n = n + 1;
                result.final_residual = next_residual;
                return result;
            }
        }
        x = sr.x_next;
    }

    result.termination = Termination::reached_n_max;
    result.final_n = config.n_max;
    if (config.xstar) {
        result.final_residual = norm(difference(x, *config.xstar), config.norm_tag);
    }
    return result;
}

CheckReport dn_bound_check(const std::vector<TraceRecord>& trace, double lipschitz_bound,
                           double diag_scale) {
    if (trace.empty()) throw InvalidInput("trace must be nonempty");
    if (!(lipschitz_bound > 0.0)) throw InvalidInput("Lipschitz bound must be > 0");
    if (!(diag_scale > 0.0)) throw InvalidInput("diagnostic scale M must be > 0");

    CheckReport rep;
    rep.samples_tested = trace.size();
    for (const TraceRecord& rec : trace) {
        const double rhs = diag_scale * lipschitz_bound * rec.pair_gap;
        rep.n_tested = rec.n;
        if (!tol::leq_within(rec.dn, rhs)) {
            rep.passed = false;
            rep.first_violation = Violation{rec.n, {}, rec.dn, rhs};
            return rep;
        }
    }
    return rep;
}

}  // namespace fixpoint
