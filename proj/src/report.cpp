#include "fixpoint/report.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {

using nlohmann::ordered_json;

ordered_json point_json(const Point& p) {
    ordered_json a = ordered_json::array();
    for (double c : p.coords) a.push_back(c);
    return a;
}

ordered_json k_json(const KSequence& k) {
    return ordered_json{{"c", k.c()}, {"s", k.s()}};
}

ordered_json psi_json(const PsiSpec& psi) {
    return ordered_json{{"scale", psi.scale()}, {"power", psi.power()}};
}

//! Shared tail of every check section.
void fill_outcome(ordered_json& section, const CheckReport& rep) {
    section["passed"] = rep.passed;
    section["n_tested"] = rep.n_tested;
    section["samples_tested"] = rep.samples_tested;
    section["first_violation"] =
        rep.first_violation ? violation_json(*rep.first_violation) : ordered_json(nullptr);
    section["notes"] = rep.notes;
}

void fill_failure(ordered_json& section, const std::string& notes) {
    section["passed"] = false;
    section["n_tested"] = 0;
    section["samples_tested"] = 0;
    section["first_violation"] = nullptr;
    section["notes"] = notes;
}

}  // namespace

ordered_json operator_json(const OperatorSpec& op) {
    ordered_json j;
    j["kind"] = "";
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Scaling>) {
                j["kind"] = "scaling";
                j["dim"] = op.dim();
                j["factor"] = k.factor;
            } else if constexpr (std::is_same_v<K, TowardPoint>) {
                j["kind"] = "toward_point";
                j["center"] = point_json(k.center);
                j["ratio"] = k.ratio;
            } else if constexpr (std::is_same_v<K, Affine>) {
                j["kind"] = "affine";
                ordered_json rows = ordered_json::array();
                for (std::size_t r = 0; r < op.dim(); ++r) {
                    ordered_json row = ordered_json::array();
                    for (std::size_t c = 0; c < op.dim(); ++c) {
                        row.push_back(k.matrix[r * op.dim() + c]);
                    }
                    rows.push_back(std::move(row));
                }
                j["matrix"] = std::move(rows);
                j["offset"] = point_json(k.offset);
            } else {
                j["kind"] = "clamp";
                j["dim"] = op.dim();
                j["lo"] = k.lo;
                j["hi"] = k.hi;
            }
        },
        op.kind());
    return j;
}

ordered_json violation_json(const Violation& violation) {
    ordered_json j;
    j["n"] = violation.n;
    j["lhs"] = violation.lhs;
    j["rhs"] = violation.rhs;
    ordered_json w = ordered_json::array();
    for (const Point& p : violation.witnesses) w.push_back(point_json(p));
    j["witnesses"] = std::move(w);
    return j;
}

ordered_json check_report_json(const CheckReport& report) {
    ordered_json j;
    fill_outcome(j, report);
    return j;
}

ClassifyRun run_classify(const ClassifyConfig& config, NormTag norm, std::uint64_t seed,
                         const std::string& seed_source) {
    ClassifyRun run;
    ordered_json sections = ordered_json::array();

    for (const CheckRequest& request : config.checks) {
        ordered_json section;
        section["check"] = check_name(request);

        // Each check draws from a generator seeded identically, so the
        // inputs depend on the seed alone, never on the check list.
        SampleGen gen(seed);

        try {
            std::visit(
                [&](const auto& c) {
                    using C = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<C, LipschitzEstimateCheck>) {
                        auto pairs = gen.pairs(config.samples, config.op.dim(),
                                               config.box_half_width);
                        section["n"] = c.n;
                        const double est =
                            estimate_power_lipschitz(config.op, c.n, pairs, norm);
                        section["estimate"] = est;
                        CheckReport rep;
                        rep.n_tested = c.n;
                        rep.samples_tested = pairs.size();
                        rep.notes = "lower bound on the Lipschitz constant of T^n";
                        fill_outcome(section, rep);
                    } else if constexpr (std::is_same_v<C, UniformLipschitzCheck>) {
                        auto pairs = gen.pairs(config.samples, config.op.dim(),
                                               config.box_half_width);
                        section["bound"] = c.bound;
                        fill_outcome(section, check_uniform_lipschitz(config.op, c.bound,
                                                                      config.n_max, pairs,
                                                                      norm));
                    } else if constexpr (std::is_same_v<C, PseudocontractivityCheck>) {
                        auto pairs = gen.pairs(config.samples, config.op.dim(),
                                               config.box_half_width);
                        section["k"] = k_json(c.k);
                        fill_outcome(section,
                                     check_asymptotic_pseudocontractivity(
                                         config.op, c.k, config.n_max, pairs, norm));
                    } else if constexpr (std::is_same_v<C, StarConditionCheck>) {
                        auto samples = gen.points(config.samples, config.op.dim(),
                                                  config.box_half_width);
                        section["xstar"] = point_json(c.xstar);
                        section["k"] = k_json(c.k);
                        section["psi"] = psi_json(c.psi);
                        fill_outcome(section,
                                     check_star_condition(config.op, c.xstar, c.k, c.psi,
                                                          config.n_max, samples, norm));
                    } else {
                        auto candidates = gen.points(config.samples, config.op.dim(),
                                                     config.box_half_width);
                        section["xstar"] = point_json(c.xstar);
                        fill_outcome(section, assert_unique_fixed_point(config.op, c.xstar,
                                                                        candidates, norm));
                    }
                },
                request);
        } catch (const FixedPointPrecondition& e) {
            fill_failure(section, e.what());
            section["fixed_point_residual"] = e.residual();
        } catch (const PowerOverflow& e) {
            fill_failure(section, e.what());
        }

        if (!section["passed"].get<bool>()) run.all_passed = false;
        sections.push_back(std::move(section));
    }

    ordered_json report;
    report["schema"] = "fixpoint-report/1";
    report["seed"] = seed;
    report["seed_source"] = seed_source;
    report["norm"] = ordered_json{{"p", norm.p()}};
    report["operator"] = operator_json(config.op);
    report["n_max"] = config.n_max;
    report["samples"] = config.samples;
    report["box_half_width"] = config.box_half_width;
    report["checks"] = std::move(sections);
    report["all_passed"] = run.all_passed;
    run.report = std::move(report);
    return run;
}

void write_report_file(const std::string& path, const ordered_json& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open report for writing: " + path);
    out << report.dump(2) << '\n';
    out.flush();
    if (!out) throw InvalidInput("failed writing report: " + path);
}

}  // namespace fixpoint
