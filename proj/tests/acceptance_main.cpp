// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion re-derives its expected values independently of
// the library internals it exercises.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixpoint/counterexample.hpp"
#include "fixpoint/rational.hpp"
#include "fixpoint/scheme.hpp"
#include "fixpoint/spaces.hpp"
#include "fixpoint/operators.hpp"

namespace {

using namespace fixpoint;

struct Outcome {
    bool ok = false;
    std::string detail;
};

Outcome pass() { return {true, ""}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

bool rel_close(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

// The convergence workload shared by criteria 2, 4, and 7: p = 2,
// T_1 = T_2 = x/2, alpha_n = beta_n^1 = 1/(n+1), x_1 = 1, x* = 0.
IterationConfig desk_config(long n_max, double tol) {
    OperatorSpec half = OperatorSpec::toward_point({0.0}, 0.5);
    return IterationConfig{{half, half},
                           ScheduleSpec(1.0, 1.0, 1.0),
                           {ScheduleSpec(1.0, 1.0, 1.0)},
                           Point{1.0},
                           Point{0.0},
                           n_max,
                           tol,
                           1.0,
                           NormTag(2.0)};
}

// 1. |T^n y_n - T^n x_{n+1}| == 2^{n+1}/n >= 1 and |y_n - x_{n+1}| == 2/n,
//    exactly, for every n <= 4096, in under 30 seconds.
Outcome criterion_counterexample_exactness() {
    const auto start = std::chrono::steady_clock::now();
    const unsigned long n_max = 4096;
    for (unsigned long n = 1; n <= n_max; ++n) {
        const SequencePair s = example_sequences(n);
        const Rational pair = (s.auxiliary - s.principal).abs();
        if (pair != Rational(2) / Rational(static_cast<long long>(n))) {
            return fail("pair gap != 2/n at n = " + std::to_string(n));
        }
        const Rational powered =
            (doubling_power(n, s.auxiliary) - doubling_power(n, s.principal)).abs();
        const Rational closed = Rational::pow2(static_cast<long>(n) + 1) /
                                Rational(static_cast<long long>(n));
        if (powered != closed) {
            return fail("power gap != 2^(n+1)/n at n = " + std::to_string(n));
        }
        if (powered < Rational(1)) {
            return fail("power gap below 1 at n = " + std::to_string(n));
        }
        if (Rational::pow2(static_cast<long>(n) + 1) < Rational(static_cast<long long>(n))) {
            return fail("2^(n+1) < n at n = " + std::to_string(n));
        }
    }
    const GapSurvey survey = verify_note_claims(n_max);
    if (survey.n_verified != n_max || !survey.power_gap_matches_closed_form ||
        !survey.pair_gap_is_two_over_n || !survey.gap_at_least_one ||
        !survey.growth_dominates) {
        return fail("survey flags incomplete");
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - start);
    if (elapsed.count() >= 30) {
        return fail("took " + std::to_string(elapsed.count()) + "s, budget 30s");
    }
    return pass();
}

// 2. With Tx = x/2 and M = L = 1 the d_n tail maximum is exactly
//    2^(1-n0)/n0, below 1e-6 by n0 = 21, and dn_bound_check accepts the
//    actual halving trace at L = 1/2.
Outcome criterion_corrected_condition() {
    const ContractionDemo demo =
        corrected_demo(Rational(1, 2), 64, Rational(1), Rational(1));
    if (!demo.bound_holds || !demo.strictly_decreasing) {
        return fail("demo diagnostics not contracting");
    }
    for (unsigned long n0 = 1; n0 <= 40; ++n0) {
        const Rational want = Rational::pow2(1 - static_cast<long>(n0)) /
                              Rational(static_cast<long long>(n0));
        if (demo.tail_max(n0) != want) {
            return fail("tail max != 2^(1-n0)/n0 at n0 = " + std::to_string(n0));
        }
    }
    if (!(demo.tail_max(21) < Rational(1, 1000000))) {
        return fail("tail max at n0 = 21 not below 1e-6");
    }

    RunResult run_result = run(desk_config(200, 0.0));
    const CheckReport report = dn_bound_check(run_result.trace, 0.5, 1.0);
    if (!report.passed) {
        return fail("dn_bound_check rejected the halving trace at L = 1/2");
    }
    return pass();
}

// 3. The classify command on the doubling map: estimate exactly 2 at
//    n = 1, uniform-Lipschitz L = 100 first violated at n = 7 with the
//    witness ratio matching 2^7 to relative 1e-12, exit code 3.
Outcome criterion_refutation_via_cli() {
    const char* cli = std::getenv("FIXPOINT_CLI");
    if (!cli || !*cli) return fail("FIXPOINT_CLI not set");

    char tmpl[] = "/tmp/fixpoint-accept-XXXXXX";
    if (!mkdtemp(tmpl)) return fail("mkdtemp failed");
    const std::string dir = tmpl;
    const std::string config_path = dir + "/classify.json";
    const std::string report_path = dir + "/report.json";

    {
        std::ofstream config(config_path);
        config << R"({
  "schema": "fixpoint/1",
  "seed": 1,
  "classify": {
    "operator": {"kind": "scaling", "dim": 1, "factor": 2.0},
    "n_max": 50,
    "samples": 64,
    "checks": [
      {"check": "lipschitz_estimate", "n": 1},
      {"check": "uniform_lipschitz", "bound": 100.0}
    ]
  }
})";
        if (!config) return fail("cannot write " + config_path);
    }

    const std::string cmd = std::string(cli) + " classify --config " + config_path +
                            " --out " + report_path + " > " + dir + "/stdout.txt 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return fail("classify did not exit normally");
    if (WEXITSTATUS(status) != 3) {
        return fail("expected exit 3, got " + std::to_string(WEXITSTATUS(status)));
    }

    std::ifstream in(report_path);
    if (!in) return fail("classify wrote no report");
    nlohmann::json report;
    try {
        in >> report;
    } catch (const nlohmann::json::exception& e) {
        return fail(std::string("report unparsable: ") + e.what());
    }

    const auto& estimate = report["checks"][0];
    if (estimate["check"] != "lipschitz_estimate" || estimate["estimate"] != 2.0) {
        return fail("estimate at n = 1 is not exactly 2");
    }
    const auto& uniform = report["checks"][1];
    if (uniform["check"] != "uniform_lipschitz" || uniform["passed"] != false) {
        return fail("uniform-Lipschitz check did not fail");
    }
    const auto& violation = uniform["first_violation"];
    if (violation.is_null() || violation["n"] != 7) {
        return fail("first violation not at n = 7");
    }
    const double lhs = violation["lhs"].get<double>();
    if (!rel_close(lhs, 128.0, 1e-12)) {
        return fail("witness ratio " + std::to_string(lhs) + " not within 1e-12 of 2^7");
    }
    return pass();
}

// 4. The desk-scale config reaches residual <= 1e-3 within 1e4 steps,
//    residuals are nonincreasing from some n0 <= 100 on, and d_n stays
//    below 1e-2 for all n >= 50.
Outcome criterion_desk_convergence() {
    RunResult result = run(desk_config(10000, 1e-3));
    if (result.termination != Termination::converged) {
        return fail("did not converge within 1e4 steps");
    }
    if (!result.final_residual || !(*result.final_residual <= 1e-3)) {
        return fail("final residual above 1e-3");
    }

    long n0 = 1;
    for (std::size_t i = 0; i + 1 < result.trace.size(); ++i) {
        const double cur = *result.trace[i].residual;
        const double next = *result.trace[i + 1].residual;
        if (next > cur) n0 = result.trace[i + 1].n;
    }
    if (n0 > 100) {
        return fail("residuals still increasing at n = " + std::to_string(n0));
    }

    double worst_dn = 0.0;
    for (const TraceRecord& rec : result.trace) {
        if (rec.n >= 50 && rec.dn > worst_dn) worst_dn = rec.dn;
    }
    if (!(worst_dn < 1e-2)) {
        return fail("max d_n over n >= 50 is " + std::to_string(worst_dn));
    }
    return pass();
}

// 5a. Duality-map identities for p in {1.5, 2, 3, 4}.
Outcome criterion_duality_suite() {
    const double ps[] = {1.5, 2.0, 3.0, 4.0};
    SampleGen gen(811001);
    for (int rep = 0; rep < 1000; ++rep) {
        const NormTag tag(ps[rep % 4]);
        const std::size_t dim = 1 + static_cast<std::size_t>(gen.uniform(0.0, 5.0));
        const Point x = gen.point(dim, 10.0);
        const DualVector j = duality_map(x, tag);
        const double nx = norm(x, tag);

        const double pairing = duality_pairing(x, x, tag);
        if (std::abs(pairing - nx * nx) > 1e-9 * (1.0 + nx * nx)) {
            return fail("<x, j(x)> != ||x||^2 at rep " + std::to_string(rep));
        }
        Point j_point;
        j_point.coords = j.coords;
        const double dual_norm = norm(j_point, NormTag(tag.dual_exponent()));
        if (std::abs(dual_norm - nx) > 1e-9 * (1.0 + nx)) {
            return fail("||j(x)||_q != ||x|| at rep " + std::to_string(rep));
        }
        const double lambda = gen.uniform(-3.0, 3.0);
        Point scaled = x;
        for (std::size_t i = 0; i < dim; ++i) scaled[i] *= lambda;
        const DualVector j_scaled = duality_map(scaled, tag);
        for (std::size_t i = 0; i < dim; ++i) {
            const double want = lambda * j[i];
            if (std::abs(j_scaled[i] - want) > 1e-12 * (1.0 + std::abs(want))) {
                return fail("j not homogeneous at rep " + std::to_string(rep));
            }
        }
    }
    return pass();
}

// 5b. Starting at the operators' common fixed point keeps every level of
//     the scheme exactly there, bit for bit.
Outcome criterion_fixed_point_suite() {
    SampleGen gen(811002);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t dim = 1 + static_cast<std::size_t>(gen.uniform(0.0, 3.0));
        const Point center = gen.point(dim, 10.0);
        const std::size_t p = 2 + static_cast<std::size_t>(gen.uniform(0.0, 3.0));

        std::vector<OperatorSpec> operators;
        for (std::size_t i = 0; i < p; ++i) {
            operators.push_back(OperatorSpec::toward_point(center, gen.uniform(-0.9, 0.9)));
        }
        ScheduleSpec alpha(gen.uniform(0.0, 1.0), gen.uniform(0.0, 3.0),
                           gen.uniform(0.0, 2.0));
        std::vector<ScheduleSpec> betas;
        for (std::size_t i = 0; i + 1 < p; ++i) {
            betas.push_back(ScheduleSpec(gen.uniform(0.0, 1.0), gen.uniform(0.0, 3.0),
                                         gen.uniform(0.0, 2.0)));
        }
        IterationConfig config{operators, alpha,  betas, center, center,
                               8,         0.0,    1.0,   NormTag(2.0)};

        Point x = center;
        for (long n = 1; n <= 6; ++n) {
            StepResult step_result = step(config, x, n);
            if (!(step_result.x_next == center)) {
                return fail("iterate left the fixed point at rep " + std::to_string(rep));
            }
            for (const Point& y : step_result.ys) {
                if (!(y == center)) {
                    return fail("auxiliary level left the fixed point at rep " +
                                std::to_string(rep));
                }
            }
            x = step_result.x_next;
        }
    }
    return pass();
}

// 5c. With every beta == 0 the scheme is the Mann iteration; a direct
//     Mann loop must reproduce the trace bit for bit.
Outcome criterion_mann_reduction_suite() {
    SampleGen gen(811003);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t dim = 1 + static_cast<std::size_t>(gen.uniform(0.0, 2.0));

        OperatorSpec t1 = (rep % 2 == 0)
                              ? OperatorSpec::scaling(dim, gen.uniform(-1.2, 1.2))
                              : OperatorSpec::toward_point(gen.point(dim, 4.0),
                                                           gen.uniform(-0.9, 0.9));
        OperatorSpec inert = OperatorSpec::toward_point(gen.point(dim, 4.0),
                                                        gen.uniform(-0.9, 0.9));

        const double a = gen.uniform(0.05, 0.95);
        const double b = gen.uniform(0.0, 3.0);
        const double q = gen.uniform(0.0, 2.0);

        IterationConfig config{{t1, inert},
                               ScheduleSpec(a, b, q),
                               {ScheduleSpec(0.0, 0.0, 0.0)},
                               gen.point(dim, 4.0),
                               std::nullopt,
                               30,
                               0.0,
                               1.0,
                               NormTag(2.0)};
        RunResult result = run(config);

        Point oracle = config.x1;
        for (const TraceRecord& rec : result.trace) {
            if (!(rec.x == oracle)) {
                return fail("trace diverged from Mann oracle at rep " + std::to_string(rep) +
                            ", n = " + std::to_string(rec.n));
            }
            if (!(rec.ys[0] == oracle)) {
                return fail("y level is not the iterate at rep " + std::to_string(rep));
            }
            const double alpha = config.alpha.value(rec.n);
            const Point powered = power_apply(t1, rec.n, oracle);
            for (std::size_t i = 0; i < dim; ++i) {
                oracle[i] = oracle[i] + alpha * (powered[i] - oracle[i]);
            }
        }
    }
    return pass();
}

// 5d. Closed-form operator powers agree with n-fold application.
Outcome criterion_power_agreement_suite() {
    SampleGen gen(811004);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t dim = 1 + static_cast<std::size_t>(gen.uniform(0.0, 3.0));
        OperatorSpec op = (rep % 2 == 0)
                              ? OperatorSpec::scaling(dim, gen.uniform(-1.5, 1.5))
                              : OperatorSpec::toward_point(gen.point(dim, 5.0),
                                                           gen.uniform(-1.2, 1.2));
        const long n = 1 + static_cast<long>(gen.uniform(0.0, 64.0));
        const Point x = gen.point(dim, 5.0);

        const Point closed = power_apply(op, n, x);
        Point repeated = x;
        for (long k = 0; k < n; ++k) repeated = apply(op, repeated);

        for (std::size_t i = 0; i < dim; ++i) {
            const double scale = std::max(std::abs(repeated[i]), 1.0);
            if (std::abs(closed[i] - repeated[i]) > 1e-9 * scale) {
                return fail("power mismatch at rep " + std::to_string(rep) +
                            ", n = " + std::to_string(n));
            }
        }
    }
    return pass();
}

// 6. The nine (q_alpha, q_beta) combinations over {0, 1/2, 2} classify
//    exactly as the p-series rules demand.
Outcome criterion_classifier_table() {
    const double qs[] = {0.0, 0.5, 2.0};
    for (double qa : qs) {
        for (double qb : qs) {
            const HypothesisReport report = classify_hypotheses(
                ScheduleSpec(1.0, 1.0, qa), ScheduleSpec(1.0, 1.0, qb), 2);
            const bool want_i = qa > 0.0 && qb > 0.0;
            const bool want_ii = qa <= 1.0;
            if (report.cond_i != want_i || report.cond_ii != want_ii || !report.p_valid) {
                return fail("wrong verdict at q_alpha = " + std::to_string(qa) +
                            ", q_beta = " + std::to_string(qb));
            }
        }
    }
    return pass();
}

// 7. The first step of the desk config, evaluated by an exact-rational
//    oracle: y_1^1 = 3/4 and x_2 = 11/16; dyadic, so the doubles must
//    match bit for bit.
Outcome criterion_hand_values() {
    const Rational r(1, 2);       // T x = x / 2
    const Rational x1(1);         // x_1 = 1
    const Rational weight(1, 2);  // alpha_1 = beta_1^1 = 1/(1+1)

    const Rational one(1);
    const Rational y1 = (one - weight) * x1 + weight * (r * x1);
    const Rational x2 = (one - weight) * x1 + weight * (r * y1);
    if (y1 != Rational(3, 4) || x2 != Rational(11, 16)) {
        return fail("rational oracle off: y = " + y1.str() + ", x2 = " + x2.str());
    }

    StepResult engine = step(desk_config(10, 0.0), Point{1.0}, 1);
    if (engine.ys[0][0] != y1.to_double()) {
        return fail("engine y_1^1 = " + std::to_string(engine.ys[0][0]));
    }
    if (engine.x_next[0] != x2.to_double()) {
        return fail("engine x_2 = " + std::to_string(engine.x_next[0]));
    }
    return pass();
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"criterion 1: counterexample gap identities exact to n = 4096",
         criterion_counterexample_exactness},
        {"criterion 2: corrected-condition tail maxima and d_n bound",
         criterion_corrected_condition},
        {"criterion 3: classify CLI reproduces the refutation",
         criterion_refutation_via_cli},
        {"criterion 4: desk-scale convergence with decreasing residuals",
         criterion_desk_convergence},
        {"criterion 5a: duality-map identity suite (1000 cases)",
         criterion_duality_suite},
        {"criterion 5b: fixed-point invariance suite (1000 cases)",
         criterion_fixed_point_suite},
        {"criterion 5c: Mann-reduction equivalence suite (1000 cases)",
         criterion_mann_reduction_suite},
        {"criterion 5d: power closed-form agreement suite (1000 cases)",
         criterion_power_agreement_suite},
        {"criterion 6: hypothesis classifier truth table",
         criterion_classifier_table},
        {"criterion 7: hand-value regression against the rational oracle",
         criterion_hand_values},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        Outcome outcome;
        try {
            outcome = entry.fn();
        } catch (const std::exception& e) {
            outcome = fail(std::string("threw: ") + e.what());
        }
        if (outcome.ok) {
            std::printf("PASS  %s\n", entry.label);
        } else {
            std::printf("FAIL  %s (%s)\n", entry.label, outcome.detail.c_str());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
