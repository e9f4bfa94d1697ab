#include "fixpoint/config.hpp"

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

//! Re-labels invariant violations from the domain constructors with the
//! config field path that caused them.
template <typename F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InvalidInput& e) {
        fail(path, e.what());
    }
}

void expect_object(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const ordered_json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path + "." + it.key(), "unknown field");
    }
}

const ordered_json& member(const ordered_json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

const ordered_json* member_opt(const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double as_double(const ordered_json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long as_positive_long(const ordered_json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    const long long v = j.get<long long>();
    if (v < 1) fail(path, "expected a positive integer");
    return static_cast<long>(v);
}

std::uint64_t as_seed(const ordered_json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

std::string as_string(const ordered_json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Point as_point(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
    Point p;
    p.coords.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const ordered_json& c = j[i];
        if (!c.is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
        p.coords.push_back(c.get<double>());
    }
    return p;
}

ScheduleSpec parse_schedule(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"a", "b", "q"});
    const double a = as_double(member(j, path, "a"), path + ".a");
    const double b = as_double(member(j, path, "b"), path + ".b");
    const double q = as_double(member(j, path, "q"), path + ".q");
    return guarded(path, [&] { return ScheduleSpec(a, b, q); });
}

OperatorSpec parse_operator(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    const std::string kind = as_string(member(j, path, "kind"), path + ".kind");
    if (kind == "scaling") {
        reject_unknown(j, path, {"kind", "dim", "factor"});
        const long dim = as_positive_long(member(j, path, "dim"), path + ".dim");
        const double factor = as_double(member(j, path, "factor"), path + ".factor");
        return guarded(path, [&] {
            return OperatorSpec::scaling(static_cast<std::size_t>(dim), factor);
        });
    }
    if (kind == "toward_point") {
        reject_unknown(j, path, {"kind", "center", "ratio"});
        Point center = as_point(member(j, path, "center"), path + ".center");
        const double ratio = as_double(member(j, path, "ratio"), path + ".ratio");
        return guarded(path,
                       [&] { return OperatorSpec::toward_point(std::move(center), ratio); });
    }
    if (kind == "affine") {
        reject_unknown(j, path, {"kind", "matrix", "offset"});
        Point offset = as_point(member(j, path, "offset"), path + ".offset");
        const ordered_json& rows = member(j, path, "matrix");
        const std::string mpath = path + ".matrix";
        if (!rows.is_array() || rows.size() != offset.dim()) {
            fail(mpath, "expected " + std::to_string(offset.dim()) + " rows");
        }
        std::vector<double> flat;
        flat.reserve(offset.dim() * offset.dim());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const std::string rpath = mpath + "[" + std::to_string(r) + "]";
            if (!rows[r].is_array() || rows[r].size() != offset.dim()) {
                fail(rpath, "expected a row of " + std::to_string(offset.dim()) + " numbers");
            }
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                const ordered_json& cell = rows[r][c];
                if (!cell.is_number()) {
                    fail(rpath + "[" + std::to_string(c) + "]", "expected a number");
                }
                flat.push_back(cell.get<double>());
            }
        }
        return guarded(path,
                       [&] { return OperatorSpec::affine(std::move(flat), std::move(offset)); });
    }
    if (kind == "clamp") {
        reject_unknown(j, path, {"kind", "dim", "lo", "hi"});
        const long dim = as_positive_long(member(j, path, "dim"), path + ".dim");
        const double lo = as_double(member(j, path, "lo"), path + ".lo");
        const double hi = as_double(member(j, path, "hi"), path + ".hi");
        return guarded(path, [&] {
            return OperatorSpec::clamp(static_cast<std::size_t>(dim), lo, hi);
        });
    }
    fail(path + ".kind",
         "unknown operator kind '" + kind +
             "' (expected scaling, toward_point, affine, or clamp)");
}

KSequence parse_k(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"c", "s"});
    const double c = as_double(member(j, path, "c"), path + ".c");
    const double s = as_double(member(j, path, "s"), path + ".s");
    return guarded(path, [&] { return KSequence(c, s); });
}

PsiSpec parse_psi(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"scale", "power"});
    const double scale = as_double(member(j, path, "scale"), path + ".scale");
    const double power = as_double(member(j, path, "power"), path + ".power");
    return guarded(path, [&] { return PsiSpec(scale, power); });
}

CheckRequest parse_check(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    const std::string name = as_string(member(j, path, "check"), path + ".check");
    if (name == "lipschitz_estimate") {
        reject_unknown(j, path, {"check", "n"});
        LipschitzEstimateCheck c;
        if (const ordered_json* n = member_opt(j, "n")) {
            c.n = as_positive_long(*n, path + ".n");
        }
        return c;
    }
    if (name == "uniform_lipschitz") {
        reject_unknown(j, path, {"check", "bound"});
        UniformLipschitzCheck c;
        c.bound = as_double(member(j, path, "bound"), path + ".bound");
        if (!(c.bound > 0.0)) fail(path + ".bound", "expected a positive number");
        return c;
    }
    if (name == "asymptotically_pseudocontractive") {
        reject_unknown(j, path, {"check", "k"});
        PseudocontractivityCheck c;
        if (const ordered_json* k = member_opt(j, "k")) c.k = parse_k(*k, path + ".k");
        return c;
    }
    if (name == "star_condition") {
        reject_unknown(j, path, {"check", "xstar", "k", "psi"});
        StarConditionCheck c;
        c.xstar = as_point(member(j, path, "xstar"), path + ".xstar");
        if (const ordered_json* k = member_opt(j, "k")) c.k = parse_k(*k, path + ".k");
        if (const ordered_json* psi = member_opt(j, "psi")) c.psi = parse_psi(*psi, path + ".psi");
        return c;
    }
    if (name == "unique_fixed_point") {
        reject_unknown(j, path, {"check", "xstar"});
        UniqueFixedPointCheck c;
        c.xstar = as_point(member(j, path, "xstar"), path + ".xstar");
        return c;
    }
    fail(path + ".check", "unknown check '" + name + "'");
}

IterationConfig parse_iterate(const ordered_json& j, const std::string& path, NormTag norm) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"operators", "alpha", "betas", "x1", "xstar", "n_max", "tol", "diag_scale"});

    const ordered_json& ops = member(j, path, "operators");
    if (!ops.is_array() || ops.empty()) fail(path + ".operators", "expected a nonempty array");
    std::vector<OperatorSpec> operators;
    operators.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        operators.push_back(
            parse_operator(ops[i], path + ".operators[" + std::to_string(i) + "]"));
    }

    ScheduleSpec alpha = parse_schedule(member(j, path, "alpha"), path + ".alpha");

    const ordered_json& bs = member(j, path, "betas");
    if (!bs.is_array()) fail(path + ".betas", "expected an array");
    std::vector<ScheduleSpec> betas;
    betas.reserve(bs.size());
    for (std::size_t i = 0; i < bs.size(); ++i) {
        betas.push_back(parse_schedule(bs[i], path + ".betas[" + std::to_string(i) + "]"));
    }

    Point x1 = as_point(member(j, path, "x1"), path + ".x1");
    std::optional<Point> xstar;
    if (const ordered_json* xs = member_opt(j, "xstar")) {
        xstar = as_point(*xs, path + ".xstar");
    }

    IterationConfig config{std::move(operators), std::move(alpha),    std::move(betas),
                           std::move(x1),        std::move(xstar),    1000,
                           0.0,                  1.0,                 norm};
    if (const ordered_json* n = member_opt(j, "n_max")) {
        config.n_max = as_positive_long(*n, path + ".n_max");
    }
    if (const ordered_json* t = member_opt(j, "tol")) {
        config.tol = as_double(*t, path + ".tol");
    }
    if (const ordered_json* m = member_opt(j, "diag_scale")) {
        config.diag_scale = as_double(*m, path + ".diag_scale");
    }
    guarded(path, [&] {
        config.validate_config();
        return 0;
    });
    return config;
}

ClassifyConfig parse_classify(const ordered_json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"operator", "n_max", "samples", "box_half_width", "checks"});

    ClassifyConfig config;
    config.op = parse_operator(member(j, path, "operator"), path + ".operator");
    if (const ordered_json* n = member_opt(j, "n_max")) {
        config.n_max = as_positive_long(*n, path + ".n_max");
    }
    if (const ordered_json* s = member_opt(j, "samples")) {
        config.samples = static_cast<std::size_t>(as_positive_long(*s, path + ".samples"));
    }
    if (const ordered_json* b = member_opt(j, "box_half_width")) {
        config.box_half_width = as_double(*b, path + ".box_half_width");
        if (!(config.box_half_width > 0.0)) {
            fail(path + ".box_half_width", "expected a positive number");
        }
    }

    const ordered_json& checks = member(j, path, "checks");
    if (!checks.is_array() || checks.empty()) fail(path + ".checks", "expected a nonempty array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
        CheckRequest request = parse_check(checks[i], cpath);
        const Point* xstar = nullptr;
        if (const auto* star = std::get_if<StarConditionCheck>(&request)) xstar = &star->xstar;
        if (const auto* uniq = std::get_if<UniqueFixedPointCheck>(&request)) xstar = &uniq->xstar;
        if (xstar && xstar->dim() != config.op.dim()) {
            fail(cpath + ".xstar", "dimension mismatch with operator (expected " +
                                       std::to_string(config.op.dim()) + ")");
        }
        config.checks.push_back(std::move(request));
    }
    return config;
}

}  // namespace

std::string check_name(const CheckRequest& request) {
    struct Namer {
        std::string operator()(const LipschitzEstimateCheck&) const {
            return "lipschitz_estimate";
        }
        std::string operator()(const UniformLipschitzCheck&) const {
            return "uniform_lipschitz";
        }
        std::string operator()(const PseudocontractivityCheck&) const {
            return "asymptotically_pseudocontractive";
        }
        std::string operator()(const StarConditionCheck&) const { return "star_condition"; }
        std::string operator()(const UniqueFixedPointCheck&) const {
            return "unique_fixed_point";
        }
    };
    return std::visit(Namer{}, request);
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }

    expect_object(j, origin);
    reject_unknown(j, origin, {"schema", "seed", "norm", "out", "iterate", "classify"});

    const std::string schema = as_string(member(j, origin, "schema"), origin + ".schema");
    if (schema != "fixpoint/1") {
        fail(origin + ".schema", "unsupported schema '" + schema + "' (expected 'fixpoint/1')");
    }

    ExperimentConfig config;
    if (const ordered_json* seed = member_opt(j, "seed")) {
        config.seed = as_seed(*seed, origin + ".seed");
        config.seed_source = "config";
    }
    if (const ordered_json* norm = member_opt(j, "norm")) {
        const std::string npath = origin + ".norm";
        expect_object(*norm, npath);
        reject_unknown(*norm, npath, {"p"});
        const double p = as_double(member(*norm, npath, "p"), npath + ".p");
        config.norm = guarded(npath, [&] { return NormTag(p); });
    }
    if (const ordered_json* out = member_opt(j, "out")) {
        config.out = as_string(*out, origin + ".out");
        if (config.out->empty()) fail(origin + ".out", "expected a nonempty path");
    }
    if (const ordered_json* it = member_opt(j, "iterate")) {
        config.iterate = parse_iterate(*it, origin + ".iterate", config.norm);
    }
    if (const ordered_json* cl = member_opt(j, "classify")) {
        config.classify = parse_classify(*cl, origin + ".classify");
    }
    if (!config.iterate && !config.classify) {
        fail(origin, "config needs an 'iterate' or 'classify' section");
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

void apply_seed_override(ExperimentConfig& config, const std::string& text,
                         const std::string& source) {
    if (text.empty() || text.size() > 20) {
        throw ConfigError(source + ": expected an unsigned integer, got '" + text + "'");
    }
    std::uint64_t value = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9') {
            throw ConfigError(source + ": expected an unsigned integer, got '" + text + "'");
        }
        const std::uint64_t digit = static_cast<std::uint64_t>(ch - '0');
        if (value > (UINT64_MAX - digit) / 10) {
            throw ConfigError(source + ": seed out of range: '" + text + "'");
        }
        value = value * 10 + digit;
    }
    config.seed = value;
    config.seed_source = source;
}

}  // namespace fixpoint
