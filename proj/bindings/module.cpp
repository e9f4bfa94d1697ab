#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fixpoint/config.hpp"
#include "fixpoint/counterexample.hpp"
#include "fixpoint/errors.hpp"
#include "fixpoint/rational.hpp"
#include "fixpoint/report.hpp"
#include "fixpoint/scheme.hpp"
#include "fixpoint/spaces.hpp"
#include "fixpoint/trace_io.hpp"

namespace py = pybind11;

namespace {

fixpoint::Point to_point(const std::vector<double>& coords) {
    fixpoint::Point p;
    p.coords = coords;
    return p;
}

std::vector<double> from_point(const fixpoint::Point& p) {
    return p.coords;
}

std::vector<std::pair<fixpoint::Point, fixpoint::Point>> to_pairs(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
    std::vector<std::pair<fixpoint::Point, fixpoint::Point>> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) out.emplace_back(to_point(a), to_point(b));
    return out;
}

std::vector<fixpoint::Point> to_points(const std::vector<std::vector<double>>& points) {
    std::vector<fixpoint::Point> out;
    out.reserve(points.size());
    for (const auto& c : points) out.push_back(to_point(c));
    return out;
}

py::dict record_dict(const fixpoint::TraceRecord& rec) {
    py::dict d;
    d["n"] = rec.n;
    d["x"] = from_point(rec.x);
    py::list ys;
    for (const auto& y : rec.ys) ys.append(from_point(y));
    d["ys"] = ys;
    d["residual"] = rec.residual ? py::object(py::float_(*rec.residual)) : py::object(py::none());
    d["pair_gap"] = rec.pair_gap;
    d["dn"] = rec.dn;
    return d;
}

py::dict hypotheses_dict(const fixpoint::HypothesisReport& hyp) {
    py::dict d;
    d["cond_i"] = hyp.cond_i;
    d["cond_ii"] = hyp.cond_ii;
    d["p_valid"] = hyp.p_valid;
    d["notes"] = hyp.notes;
    return d;
}

std::string trace_csv_text(const std::vector<fixpoint::TraceRecord>& trace,
                           fixpoint::TraceShape shape) {
    std::ostringstream os;
    fixpoint::write_trace_csv(os, trace, shape);
    return os.str();
}

const fixpoint::IterationConfig& require_iterate(const fixpoint::ExperimentConfig& config) {
    if (!config.iterate) {
        throw fixpoint::ConfigError("<python>: config has no 'iterate' section");
    }
    return *config.iterate;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "fixed-point iteration laboratory core";

    py::register_exception<fixpoint::ConfigError>(m, "ConfigError");
    py::register_exception<fixpoint::DivergenceError>(m, "DivergenceError");
    py::register_exception<fixpoint::PowerOverflow>(m, "PowerOverflow");
    py::register_exception<fixpoint::FixedPointPrecondition>(m, "FixedPointPrecondition");

    py::class_<fixpoint::NormTag>(m, "NormTag")
        .def(py::init<double>(), py::arg("p"))
        .def_property_readonly("p", &fixpoint::NormTag::p)
        .def_property_readonly("dual_exponent", &fixpoint::NormTag::dual_exponent)
        .def_property_readonly("is_hilbert", &fixpoint::NormTag::is_hilbert);

    m.def(
        "norm",
        [](const std::vector<double>& x, double p) {
            return fixpoint::norm(to_point(x), fixpoint::NormTag(p));
        },
        py::arg("x"), py::arg("p") = 2.0);
    m.def(
        "duality_map",
        [](const std::vector<double>& x, double p) {
            return fixpoint::duality_map(to_point(x), fixpoint::NormTag(p)).coords;
        },
        py::arg("x"), py::arg("p") = 2.0);
    m.def(
        "duality_pairing",
        [](const std::vector<double>& u, const std::vector<double>& x, double p) {
            return fixpoint::duality_pairing(to_point(u), to_point(x), fixpoint::NormTag(p));
        },
        py::arg("u"), py::arg("x"), py::arg("p") = 2.0);
    m.def(
        "lerp",
        [](const std::vector<double>& x, const std::vector<double>& z, double t) {
            return from_point(fixpoint::lerp(to_point(x), to_point(z), t));
        },
        py::arg("x"), py::arg("z"), py::arg("t"));

    py::class_<fixpoint::OperatorSpec>(m, "Operator")
        .def_static(
            "scaling",
            [](std::size_t dim, double factor) { return fixpoint::OperatorSpec::scaling(dim, factor); },
            py::arg("dim"), py::arg("factor"))
        .def_static(
            "toward_point",
            [](const std::vector<double>& center, double ratio) {
                return fixpoint::OperatorSpec::toward_point(to_point(center), ratio);
            },
            py::arg("center"), py::arg("ratio"))
        .def_static(
            "affine",
            [](const std::vector<double>& matrix, const std::vector<double>& offset) {
                return fixpoint::OperatorSpec::affine(matrix, to_point(offset));
            },
            py::arg("matrix"), py::arg("offset"))
        .def_static(
            "clamp",
            [](std::size_t dim, double lo, double hi) {
                return fixpoint::OperatorSpec::clamp(dim, lo, hi);
            },
            py::arg("dim"), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("dim", &fixpoint::OperatorSpec::dim)
        .def("describe", &fixpoint::OperatorSpec::describe)
        .def("__repr__", &fixpoint::OperatorSpec::describe);

    m.def(
        "apply",
        [](const fixpoint::OperatorSpec& op, const std::vector<double>& x) {
            return from_point(fixpoint::apply(op, to_point(x)));
        },
        py::arg("op"), py::arg("x"));
    m.def(
        "power_apply",
        [](const fixpoint::OperatorSpec& op, long n, const std::vector<double>& x) {
            return from_point(fixpoint::power_apply(op, n, to_point(x)));
        },
        py::arg("op"), py::arg("n"), py::arg("x"));

    py::class_<fixpoint::KSequence>(m, "KSequence")
        .def(py::init<double, double>(), py::arg("c"), py::arg("s"))
        .def_static("constant_one", &fixpoint::KSequence::constant_one)
        .def("at", &fixpoint::KSequence::at, py::arg("n"))
        .def_property_readonly("c", &fixpoint::KSequence::c)
        .def_property_readonly("s", &fixpoint::KSequence::s);

    py::class_<fixpoint::PsiSpec>(m, "Psi")
        .def(py::init<double, double>(), py::arg("scale"), py::arg("power"))
        .def("__call__", &fixpoint::PsiSpec::operator(), py::arg("t"))
        .def_property_readonly("scale", &fixpoint::PsiSpec::scale)
        .def_property_readonly("power", &fixpoint::PsiSpec::power);

    py::class_<fixpoint::Violation>(m, "Violation")
        .def_readonly("n", &fixpoint::Violation::n)
        .def_readonly("lhs", &fixpoint::Violation::lhs)
        .def_readonly("rhs", &fixpoint::Violation::rhs)
        .def_property_readonly("witnesses", [](const fixpoint::Violation& v) {
            std::vector<std::vector<double>> out;
            out.reserve(v.witnesses.size());
            for (const auto& w : v.witnesses) out.push_back(w.coords);
            return out;
        });

    py::class_<fixpoint::CheckReport>(m, "CheckReport")
        .def_readonly("passed", &fixpoint::CheckReport::passed)
        .def_readonly("first_violation", &fixpoint::CheckReport::first_violation)
        .def_readonly("n_tested", &fixpoint::CheckReport::n_tested)
        .def_readonly("samples_tested", &fixpoint::CheckReport::samples_tested)
        .def_readonly("notes", &fixpoint::CheckReport::notes);

    py::class_<fixpoint::SampleGen>(m, "SampleGen")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def(
            "point",
            [](fixpoint::SampleGen& g, std::size_t dim, double box) {
                return from_point(g.point(dim, box));
            },
            py::arg("dim"), py::arg("box") = 10.0)
        .def(
            "points",
            [](fixpoint::SampleGen& g, std::size_t count, std::size_t dim, double box) {
                std::vector<std::vector<double>> out;
                for (auto& p : g.points(count, dim, box)) out.push_back(std::move(p.coords));
                return out;
            },
            py::arg("count"), py::arg("dim"), py::arg("box") = 10.0)
        .def(
            "pairs",
            [](fixpoint::SampleGen& g, std::size_t count, std::size_t dim, double box) {
                std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
                for (auto& [a, b] : g.pairs(count, dim, box)) {
                    out.emplace_back(std::move(a.coords), std::move(b.coords));
                }
                return out;
            },
            py::arg("count"), py::arg("dim"), py::arg("box") = 10.0);

    m.def(
        "estimate_power_lipschitz",
        [](const fixpoint::OperatorSpec& op, long n,
           const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
           double p) {
            return fixpoint::estimate_power_lipschitz(op, n, to_pairs(pairs),
                                                      fixpoint::NormTag(p));
        },
        py::arg("op"), py::arg("n"), py::arg("pairs"), py::arg("p") = 2.0);
    m.def(
        "check_uniform_lipschitz",
        [](const fixpoint::OperatorSpec& op, double bound, long n_max,
           const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
           double p) {
            return fixpoint::check_uniform_lipschitz(op, bound, n_max, to_pairs(pairs),
                                                     fixpoint::NormTag(p));
        },
        py::arg("op"), py::arg("bound"), py::arg("n_max"), py::arg("pairs"),
        py::arg("p") = 2.0);
    m.def(
        "check_asymptotic_pseudocontractivity",
        [](const fixpoint::OperatorSpec& op, const fixpoint::KSequence& k, long n_max,
           const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
           double p) {
            return fixpoint::check_asymptotic_pseudocontractivity(op, k, n_max, to_pairs(pairs),
                                                                  fixpoint::NormTag(p));
        },
        py::arg("op"), py::arg("k"), py::arg("n_max"), py::arg("pairs"), py::arg("p") = 2.0);
    m.def(
        "check_star_condition",
        [](const fixpoint::OperatorSpec& op, const std::vector<double>& xstar,
           const fixpoint::KSequence& k, const fixpoint::PsiSpec& psi, long n_max,
           const std::vector<std::vector<double>>& samples, double p) {
            return fixpoint::check_star_condition(op, to_point(xstar), k, psi, n_max,
                                                  to_points(samples), fixpoint::NormTag(p));
        },
        py::arg("op"), py::arg("xstar"), py::arg("k"), py::arg("psi"), py::arg("n_max"),
        py::arg("samples"), py::arg("p") = 2.0);
    m.def(
        "assert_unique_fixed_point",
        [](const fixpoint::OperatorSpec& op, const std::vector<double>& xstar,
           const std::vector<std::vector<double>>& candidates, double p) {
            return fixpoint::assert_unique_fixed_point(op, to_point(xstar),
                                                       to_points(candidates),
                                                       fixpoint::NormTag(p));
        },
        py::arg("op"), py::arg("xstar"), py::arg("candidates"), py::arg("p") = 2.0);

    py::class_<fixpoint::ScheduleSpec>(m, "Schedule")
        .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("q"))
        .def("value", &fixpoint::ScheduleSpec::value, py::arg("n"))
        .def_property_readonly("vanishes", &fixpoint::ScheduleSpec::vanishes)
        .def_property_readonly("sum_diverges", &fixpoint::ScheduleSpec::sum_diverges);

    m.def(
        "classify_hypotheses",
        [](const fixpoint::ScheduleSpec& alpha, const fixpoint::ScheduleSpec& beta1,
           std::size_t operator_count) {
            return hypotheses_dict(fixpoint::classify_hypotheses(alpha, beta1, operator_count));
        },
        py::arg("alpha"), py::arg("beta1"), py::arg("operator_count"));

    // Whole-experiment entry points take the JSON config document itself,
    // so python callers exercise exactly the schema the CLI accepts.
    m.def(
        "iterate_json",
        [](const std::string& text) {
            const fixpoint::ExperimentConfig config = fixpoint::parse_config(text, "<python>");
            const fixpoint::IterationConfig& it = require_iterate(config);
            const fixpoint::TraceShape shape{it.x1.dim(), it.stage_count() - 1};
            const fixpoint::RunResult result = fixpoint::run(it);
            py::dict d;
            d["hypotheses"] = hypotheses_dict(fixpoint::classify_hypotheses(it));
            d["converged"] = result.termination == fixpoint::Termination::converged;
            d["final_n"] = result.final_n;
            d["final_residual"] = result.final_residual
                                      ? py::object(py::float_(*result.final_residual))
                                      : py::object(py::none());
            py::list rows;
            for (const auto& rec : result.trace) rows.append(record_dict(rec));
            d["trace"] = rows;
            d["csv"] = trace_csv_text(result.trace, shape);
            return d;
        },
        py::arg("config_text"));
    m.def(
        "step_json",
        [](const std::string& text, const std::vector<double>& x, long n) {
            const fixpoint::ExperimentConfig config = fixpoint::parse_config(text, "<python>");
            const fixpoint::IterationConfig& it = require_iterate(config);
            const fixpoint::StepResult sr = fixpoint::step(it, to_point(x), n);
            py::dict d;
            d["x_next"] = from_point(sr.x_next);
            py::list ys;
            for (const auto& y : sr.ys) ys.append(from_point(y));
            d["ys"] = ys;
            d["t1n_y1"] = from_point(sr.t1n_y1);
            return d;
        },
        py::arg("config_text"), py::arg("x"), py::arg("n"));
    m.def(
        "classify_json",
        [](const std::string& text) {
            const fixpoint::ExperimentConfig config = fixpoint::parse_config(text, "<python>");
            if (!config.classify) {
                throw fixpoint::ConfigError("<python>: config has no 'classify' section");
            }
            const fixpoint::ClassifyRun run = fixpoint::run_classify(
                *config.classify, config.norm, config.seed, config.seed_source);
            return py::make_tuple(run.report.dump(2) + "\n", run.all_passed);
        },
        py::arg("config_text"));
    m.def(
        "dn_bound_check_csv",
        [](const std::string& csv_text, double lipschitz_bound, double diag_scale) {
            std::istringstream is(csv_text);
            const fixpoint::ParsedTrace parsed = fixpoint::read_trace_csv(is, "<csv>");
            return fixpoint::dn_bound_check(parsed.records, lipschitz_bound, diag_scale);
        },
        py::arg("csv_text"), py::arg("lipschitz_bound"), py::arg("diag_scale") = 1.0);

    // Exact-arithmetic surface: rationals cross the boundary as canonical
    // "num/den" strings, which fractions.Fraction parses verbatim.
    m.def(
        "example_sequences",
        [](unsigned long n) {
            const fixpoint::SequencePair pair = fixpoint::example_sequences(n);
            return py::make_tuple(pair.auxiliary.str(), pair.principal.str());
        },
        py::arg("n"));
    m.def(
        "gap", [](unsigned long n) { return fixpoint::gap(n).str(); }, py::arg("n"));
    m.def(
        "doubling_power",
        [](unsigned long n, const std::string& x) {
            return fixpoint::doubling_power(n, fixpoint::Rational::from_string(x)).str();
        },
        py::arg("n"), py::arg("x"));
    m.def(
        "scaling_power",
        [](const std::string& factor, unsigned long n, const std::string& x) {
            return fixpoint::scaling_power(fixpoint::Rational::from_string(factor), n,
                                           fixpoint::Rational::from_string(x))
                .str();
        },
        py::arg("factor"), py::arg("n"), py::arg("x"));
    m.def(
        "verify_note_claims",
        [](unsigned long n_max) {
            const fixpoint::GapSurvey survey = fixpoint::verify_note_claims(n_max);
            py::dict d;
            d["n_verified"] = survey.n_verified;
            d["min_gap"] = survey.min_gap.str();
            d["min_gap_at"] = survey.min_gap_at;
            return d;
        },
        py::arg("n_max"));
    m.def(
        "epsilon_threshold",
        [](const std::string& epsilon) {
            return fixpoint::epsilon_threshold(fixpoint::Rational::from_string(epsilon));
        },
        py::arg("epsilon"));
    m.def(
        "corrected_demo",
        [](const std::string& contraction, unsigned long n_max, const std::string& diag_scale,
           const std::string& lipschitz) {
            const fixpoint::ContractionDemo demo = fixpoint::corrected_demo(
                fixpoint::Rational::from_string(contraction), n_max,
                fixpoint::Rational::from_string(diag_scale),
                fixpoint::Rational::from_string(lipschitz));
            py::dict d;
            d["n_verified"] = demo.n_verified;
            d["bound_holds"] = demo.bound_holds;
            d["strictly_decreasing"] = demo.strictly_decreasing;
            std::vector<std::string> dn;
            dn.reserve(demo.dn.size());
            for (const auto& v : demo.dn) dn.push_back(v.str());
            d["dn"] = dn;
            return d;
        },
        py::arg("contraction") = "1/2", py::arg("n_max") = 64ul, py::arg("diag_scale") = "1",
        py::arg("lipschitz") = "1");
}
