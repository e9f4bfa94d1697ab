#include "fixpoint/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixpoint/errors.hpp"
#include "fixpoint/tolerances.hpp"

namespace fixpoint {

namespace {

void require_dim(const OperatorSpec& op, const Point& x) {
    validate(x);
    if (x.dim() != op.dim()) {
        throw InvalidInput("operator of dimension " + std::to_string(op.dim()) +
                           " applied to point of dimension " + std::to_string(x.dim()));
    }
}

void require_finite_power(const Point& x, const OperatorSpec& op, long n) {
    if (!all_finite(x)) {
        throw PowerOverflow("power " + std::to_string(n) + " of " + op.describe() +
                            " overflowed");
    }
}

}  // namespace

OperatorSpec OperatorSpec::scaling(std::size_t dim, double factor) {
    if (dim == 0) throw InvalidInput("operator dimension must be >= 1");
    if (!std::isfinite(factor)) throw InvalidInput("scaling factor must be finite");
    return OperatorSpec(dim, Scaling{factor});
}

OperatorSpec OperatorSpec::toward_point(Point center, double ratio) {
    validate(center);
    if (!std::isfinite(ratio)) throw InvalidInput("toward_point ratio must be finite");
    const std::size_t dim = center.dim();
    return OperatorSpec(dim, TowardPoint{std::move(center), ratio});
}

OperatorSpec OperatorSpec::affine(std::vector<double> matrix, Point offset) {
    validate(offset);
    const std::size_t dim = offset.dim();
    if (matrix.size() != dim * dim) {
        throw InvalidInput("affine matrix must be dim x dim row-major, expected " +
                           std::to_string(dim * dim) + " entries, got " +
                           std::to_string(matrix.size()));
    }
    for (double v : matrix) {
        if (!std::isfinite(v)) throw InvalidInput("affine matrix entry non-finite");
    }
    return OperatorSpec(dim, Affine{std::move(matrix), std::move(offset)});
}

OperatorSpec OperatorSpec::clamp(std::size_t dim, double lo, double hi) {
    if (dim == 0) throw InvalidInput("operator dimension must be >= 1");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw InvalidInput("clamp bounds must be finite with lo <= hi");
    }
    return OperatorSpec(dim, Clamp{lo, hi});
}

std::string OperatorSpec::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Scaling>) {
                os << "scaling(factor=" << k.factor << ")";
            } else if constexpr (std::is_same_v<K, TowardPoint>) {
                os << "toward_point(center=" << to_string(k.center) << ", ratio=" << k.ratio
                   << ")";
            } else if constexpr (std::is_same_v<K, Affine>) {
                os << "affine(dim=" << dim_ << ")";
            } else {
                os << "clamp(lo=" << k.lo << ", hi=" << k.hi << ")";
            }
        },
        kind_);
    return os.str();
}

Point apply(const OperatorSpec& op, const Point& x) {
    require_dim(op, x);
    const std::size_t d = x.dim();
    Point out;
    out.coords.resize(d);
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Scaling>) {
                for (std::size_t i = 0; i < d; ++i) out[i] = k.factor * x[i];
            } else if constexpr (std::is_same_v<K, TowardPoint>) {
                for (std::size_t i = 0; i < d; ++i)
                    out[i] = k.center[i] + k.ratio * (x[i] - k.center[i]);
            } else if constexpr (std::is_same_v<K, Affine>) {
                for (std::size_t i = 0; i < d; ++i) {
                    double s = k.offset[i];
                    const double* row = k.matrix.data() + i * d;
                    for (std::size_t j = 0; j < d; ++j) s += row[j] * x[j];
                    out[i] = s;
                }
            } else {
                for (std::size_t i = 0; i < d; ++i)
                    out[i] = std::min(k.hi, std::max(k.lo, x[i]));
            }
        },
        op.kind());
    return out;
}

Point power_apply(const OperatorSpec& op, long n, const Point& x) {
    if (n < 1) throw InvalidInput("power index must be >= 1, got " + std::to_string(n));
    require_dim(op, x);

    if (const auto* s = std::get_if<Scaling>(&op.kind())) {
        const double f = std::pow(s->factor, static_cast<double>(n));
        if (!std::isfinite(f)) {
            throw PowerOverflow("factor^" + std::to_string(n) + " overflowed for " +
                                op.describe());
        }
        Point out;
        out.coords.resize(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) out[i] = f * x[i];
        require_finite_power(out, op, n);
        return out;
    }
    if (const auto* t = std::get_if<TowardPoint>(&op.kind())) {
        const double f = std::pow(t->ratio, static_cast<double>(n));
        if (!std::isfinite(f)) {
            throw PowerOverflow("ratio^" + std::to_string(n) + " overflowed for " +
                                op.describe());
        }
        Point out;
        out.coords.resize(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i)
            out[i] = t->center[i] + f * (x[i] - t->center[i]);
        require_finite_power(out, op, n);
        return out;
    }
    if (std::holds_alternative<Clamp>(op.kind())) {
        // Clamp is idempotent: T^n = T for every n >= 1.
        return apply(op, x);
    }

    Point cur = x;
    for (long k = 0; k < n; ++k) {
        cur = apply(op, cur);
        require_finite_power(cur, op, n);
    }
    return cur;
}

KSequence::KSequence(double c, double s) : c_(c), s_(s) {
    if (!std::isfinite(c) || c < 0.0) throw InvalidInput("k-sequence offset c must be >= 0");
    if (!std::isfinite(s) || s <= 0.0) throw InvalidInput("k-sequence decay s must be > 0");
}

double KSequence::at(long n) const {
    if (n < 1) throw InvalidInput("k-sequence index must be >= 1");
    return 1.0 + c_ / std::pow(static_cast<double>(n), s_);
}

PsiSpec::PsiSpec(double scale, double power) : scale_(scale), power_(power) {
    if (!std::isfinite(scale) || scale <= 0.0) throw InvalidInput("psi scale must be > 0");
    if (!std::isfinite(power) || power < 1.0) throw InvalidInput("psi power must be >= 1");
}

double PsiSpec::operator()(double t) const {
    if (t < 0.0) throw InvalidInput("psi argument must be >= 0");
    return scale_ * std::pow(t, power_);
}

namespace {

// Sample pair with its running powers T^n x, T^n y.
struct PairState {
    Point x;
    Point y;
    Point cur_x;
    Point cur_y;
    Point diff;   // x - y, fixed
    double dist;  // ||x - y||, fixed
};

// NaN from overflowed iterates would defeat every comparison below, so
// the checks refuse to continue past a non-finite power.
void require_finite_probe(const Point& x, const OperatorSpec& op, long n) {
    if (!all_finite(x)) {
        throw PowerOverflow("power " + std::to_string(n) + " of " + op.describe() +
                            " left the finite range during a check");
    }
}

std::vector<PairState> prepare_pairs(const OperatorSpec& op,
                                     const std::vector<std::pair<Point, Point>>& pairs,
                                     NormTag tag, bool skip_degenerate) {
    std::vector<PairState> live;
    live.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        require_dim(op, x);
        require_dim(op, y);
        Point d = difference(x, y);
        const double dist = norm(d, tag);
        if (!std::isfinite(dist)) {
            throw PowerOverflow("sample pair separation exceeds the finite range for " +
                                op.describe());
        }
        if (skip_degenerate && dist == 0.0) continue;
        live.push_back(PairState{x, y, x, y, std::move(d), dist});
    }
    return live;
}

}  // namespace

double estimate_power_lipschitz(const OperatorSpec& op, long n,
                                const std::vector<std::pair<Point, Point>>& pairs,
                                NormTag tag) {
    if (n < 1) throw InvalidInput("power index must be >= 1");
    if (pairs.empty()) throw InvalidInput("need at least one sample pair");
    auto live = prepare_pairs(op, pairs, tag, /*skip_degenerate=*/true);
    if (live.empty()) throw InvalidInput("all sample pairs are degenerate (x == y)");

    double best = 0.0;
    for (const auto& pp : live) {
        const Point tx = power_apply(op, n, pp.x);
        const Point ty = power_apply(op, n, pp.y);
        const Point gap = difference(tx, ty);
        require_finite_probe(gap, op, n);
        best = std::max(best, norm(gap, tag) / pp.dist);
    }
    return best;
}

CheckReport check_uniform_lipschitz(const OperatorSpec& op, double bound, long n_max,
                                    const std::vector<std::pair<Point, Point>>& pairs,
                                    NormTag tag) {
    if (!(bound > 0.0)) throw InvalidInput("Lipschitz bound must be > 0");
    if (n_max < 1) throw InvalidInput("horizon n_max must be >= 1");
    if (pairs.empty()) throw InvalidInput("need at least one sample pair");
    auto live = prepare_pairs(op, pairs, tag, /*skip_degenerate=*/true);
    if (live.empty()) throw InvalidInput("all sample pairs are degenerate (x == y)");

    CheckReport rep;
    rep.samples_tested = live.size();
    for (long n = 1; n <= n_max; ++n) {
        for (auto& pp : live) {
            pp.cur_x = apply(op, pp.cur_x);
            pp.cur_y = apply(op, pp.cur_y);
            require_finite_probe(pp.cur_x, op, n);
            require_finite_probe(pp.cur_y, op, n);
            // The gap of two finite iterates can still overflow.
            const Point gap = difference(pp.cur_x, pp.cur_y);
            require_finite_probe(gap, op, n);
            const double ratio = norm(gap, tag) / pp.dist;
            if (ratio > bound * (1.0 + tol::kRelative)) {
                rep.passed = false;
                rep.n_tested = n;
                rep.first_violation = Violation{n, {pp.x, pp.y}, ratio, bound};
                return rep;
            }
        }
        rep.n_tested = n;
    }
    return rep;
}

CheckReport check_asymptotic_pseudocontractivity(const OperatorSpec& op, const KSequence& k,
                                                 long n_max,
                                                 const std::vector<std::pair<Point, Point>>& pairs,
                                                 NormTag tag) {
    if (n_max < 1) throw InvalidInput("horizon n_max must be >= 1");
    if (pairs.empty()) throw InvalidInput("need at least one sample pair");
    auto live = prepare_pairs(op, pairs, tag, /*skip_degenerate=*/false);

    CheckReport rep;
    rep.samples_tested = live.size();
    for (long n = 1; n <= n_max; ++n) {
        for (auto& pp : live) {
            pp.cur_x = apply(op, pp.cur_x);
            pp.cur_y = apply(op, pp.cur_y);
            require_finite_probe(pp.cur_x, op, n);
            require_finite_probe(pp.cur_y, op, n);
            const Point gap = difference(pp.cur_x, pp.cur_y);
            require_finite_probe(gap, op, n);
            const double lhs = duality_pairing(gap, pp.diff, tag);
            const double rhs = k.at(n) * pp.dist * pp.dist;
            if (!tol::leq_within(lhs, rhs)) {
                rep.passed = false;
                rep.n_tested = n;
                rep.first_violation = Violation{n, {pp.x, pp.y}, lhs, rhs};
                return rep;
            }
        }
        rep.n_tested = n;
    }
    return rep;
}

CheckReport check_star_condition(const OperatorSpec& op, const Point& xstar,
                                 const KSequence& k, const PsiSpec& psi, long n_max,
                                 const std::vector<Point>& samples, NormTag tag) {
    if (n_max < 1) throw InvalidInput("horizon n_max must be >= 1");
    if (samples.empty()) throw InvalidInput("need at least one sample point");
    require_dim(op, xstar);

    const Point xstar_image = apply(op, xstar);
    require_finite_probe(xstar_image, op, 1);
    const Point xstar_gap = difference(xstar_image, xstar);
    require_finite_probe(xstar_gap, op, 1);
    const double residual = norm(xstar_gap, tag);
    if (residual > tol::kFixedPointResidual) {
        throw FixedPointPrecondition(
            "xstar is not a fixed point of " + op.describe() +
                ": ||T(xstar) - xstar|| = " + std::to_string(residual),
            residual);
    }

    CheckReport rep;
    rep.notes = "rhs evaluated as k_n*||x - xstar||^2 - psi(||x - xstar||)";
    rep.samples_tested = samples.size();

    struct StarState {
        Point x;
        Point cur;    // T^n x
        Point diff;   // x - xstar, fixed
        double dist;  // ||x - xstar||, fixed
    };
    std::vector<StarState> live;
    live.reserve(samples.size());
    for (const Point& x : samples) {
        require_dim(op, x);
        Point d = difference(x, xstar);
        const double dist = norm(d, tag);
        if (!std::isfinite(dist)) {
            throw PowerOverflow("sample separation from xstar exceeds the finite range for " +
                                op.describe());
        }
        live.push_back(StarState{x, x, std::move(d), dist});
    }

    for (long n = 1; n <= n_max; ++n) {
        for (auto& st : live) {
            st.cur = apply(op, st.cur);
            require_finite_probe(st.cur, op, n);
            const Point gap = difference(st.cur, xstar);
            require_finite_probe(gap, op, n);
            const double lhs = duality_pairing(gap, st.diff, tag);
            const double rhs = k.at(n) * st.dist * st.dist - psi(st.dist);
            if (!tol::leq_within(lhs, rhs)) {
                rep.passed = false;
                rep.n_tested = n;
                rep.first_violation = Violation{n, {st.x}, lhs, rhs};
                return rep;
            }
        }
        rep.n_tested = n;
    }
    return rep;
}

CheckReport assert_unique_fixed_point(const OperatorSpec& op, const Point& xstar,
                                      const std::vector<Point>& candidates, NormTag tag) {
    require_dim(op, xstar);

    CheckReport rep;
    rep.notes = "probe: a candidate counts as a second fixed point when "
                "||T(y) - y|| <= 1e-12 and ||y - xstar|| > 1e-9";
    rep.n_tested = 1;
    rep.samples_tested = candidates.size();
    for (const Point& y : candidates) {
        require_dim(op, y);
        const Point image = apply(op, y);
        require_finite_probe(image, op, 1);
        const Point image_gap = difference(image, y);
        require_finite_probe(image_gap, op, 1);
        const double fp_residual = norm(image_gap, tag);
        if (fp_residual > tol::kFixedPointResidual) continue;
        const double dist = norm(difference(y, xstar), tag);
        if (dist > tol::kDistinct) {
            rep.passed = false;
            rep.first_violation = Violation{0, {y}, dist, tol::kDistinct};
            return rep;
        }
    }
    return rep;
}

SampleGen::SampleGen(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

std::uint64_t SampleGen::next() {
    // splitmix64: portable and deterministic across platforms.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SampleGen::uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

Point SampleGen::point(std::size_t dim, double box) {
    Point x;
    x.coords.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = uniform(-box, box);
    return x;
}

std::vector<Point> SampleGen::points(std::size_t count, std::size_t dim, double box) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(point(dim, box));
    return out;
}

std::vector<std::pair<Point, Point>> SampleGen::pairs(std::size_t count, std::size_t dim,
                                                      double box) {
    std::vector<std::pair<Point, Point>> out;
    out.reserve(count);
    while (out.size() < count) {
        Point a = point(dim, box);
        Point b = point(dim, box);
        if (a == b) continue;
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

}  // namespace fixpoint
