#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "fixpoint/config.hpp"
#include "fixpoint/operators.hpp"
#include "fixpoint/scheme.hpp"

namespace fixpoint {

//! Operator description in the config schema's own vocabulary, so a
//! report's operator block can be pasted back into a config.
nlohmann::ordered_json operator_json(const OperatorSpec& op);

nlohmann::ordered_json violation_json(const Violation& violation);
nlohmann::ordered_json check_report_json(const CheckReport& report);

struct ClassifyRun {
    nlohmann::ordered_json report;
    bool all_passed = true;
};

//! Executes every selected check and assembles the machine-readable
//! report. Samples are drawn fresh from the seed for each check, so the
//! outcome of one check never shifts another's inputs. Precondition
//! failures (a claimed fixed point that is not one) and power overflows
//! surface as failed sections, not exceptions.
ClassifyRun run_classify(const ClassifyConfig& config, NormTag norm, std::uint64_t seed,
                         const std::string& seed_source);

//! dump(2) plus trailing newline, byte-stable for equal documents.
void write_report_file(const std::string& path, const nlohmann::ordered_json& report);

}  // namespace fixpoint
