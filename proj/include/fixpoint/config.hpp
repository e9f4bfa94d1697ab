#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fixpoint/operators.hpp"
#include "fixpoint/scheme.hpp"

namespace fixpoint {

//! Rejected experiment description: parse failure, schema violation, or
//! any module-level invariant breach. The message carries a field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Checker selections for the classify command. Defaults mirror the
// checker contracts: pairs/samples are drawn fresh per check from the
// experiment seed, so checks never depend on their order in the file.

struct LipschitzEstimateCheck {
    long n = 1;
};

struct UniformLipschitzCheck {
    double bound = 1.0;
};

struct PseudocontractivityCheck {
    KSequence k = KSequence::constant_one();
};

struct StarConditionCheck {
    Point xstar;
    KSequence k = KSequence::constant_one();
    PsiSpec psi{0.5, 2.0};
};

struct UniqueFixedPointCheck {
    Point xstar;
};

using CheckRequest = std::variant<LipschitzEstimateCheck, UniformLipschitzCheck,
                                  PseudocontractivityCheck, StarConditionCheck,
                                  UniqueFixedPointCheck>;

//! Which checker a request selects, as it appears in configs and reports.
std::string check_name(const CheckRequest& request);

struct ClassifyConfig {
    OperatorSpec op = OperatorSpec::scaling(1, 1.0);
    long n_max = 64;
    std::size_t samples = 256;
    double box_half_width = 10.0;
    std::vector<CheckRequest> checks;
};

//! One experiment file: a versioned schema tag, a seed, the norm, and at
//! least one of the iterate / classify sections.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::string seed_source = "default";  // "default", "config", or "env:FIXPOINT_SEED"
    NormTag norm{2.0};
    std::optional<std::string> out;  // output path; command-line --out wins
    std::optional<IterationConfig> iterate;
    std::optional<ClassifyConfig> classify;
};

//! Parses and fully validates a config document. origin labels the
//! source (file path) in diagnostics. Unknown fields are errors.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

//! parse_config over the contents of path; missing or unreadable files
//! raise ConfigError.
ExperimentConfig load_config(const std::string& path);

//! Replaces the seed with the given override text (strict unsigned
//! decimal) and marks its source. Used for the FIXPOINT_SEED variable.
void apply_seed_override(ExperimentConfig& config, const std::string& text,
                         const std::string& source);

}  // namespace fixpoint
