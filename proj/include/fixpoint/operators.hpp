#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fixpoint/spaces.hpp"

namespace fixpoint {

// Closed descriptions of self-maps T: R^d -> R^d.

//! x -> factor * x.
struct Scaling {
    double factor;
};

//! x -> center + ratio * (x - center); a contraction toward center when
//! |ratio| < 1, with center as its exact fixed point.
struct TowardPoint {
    Point center;
    double ratio;
};

//! x -> A x + offset, A row-major dim x dim.
struct Affine {
    std::vector<double> matrix;
    Point offset;
};

//! Componentwise clamp to [lo, hi]; idempotent and nonexpansive.
struct Clamp {
    double lo;
    double hi;
};

class OperatorSpec {
public:
    using Kind = std::variant<Scaling, TowardPoint, Affine, Clamp>;

    static OperatorSpec scaling(std::size_t dim, double factor);
    static OperatorSpec toward_point(Point center, double ratio);
    static OperatorSpec affine(std::vector<double> matrix, Point offset);
    static OperatorSpec clamp(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return dim_; }
    const Kind& kind() const noexcept { return kind_; }
    std::string describe() const;

private:
    OperatorSpec(std::size_t dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {}

    std::size_t dim_;
    Kind kind_;
};

//! T(x).
Point apply(const OperatorSpec& op, const Point& x);

//! T^n(x), n >= 1. Scaling and toward-point kinds use the exact closed
//! form (factor^n, ratio^n); overflow raises PowerOverflow, never wraps.
Point power_apply(const OperatorSpec& op, long n, const Point& x);

//! k_n = 1 + c / n^s with c >= 0, s > 0; nonincreasing, k_n -> 1.
class KSequence {
public:
    KSequence(double c, double s);
    static KSequence constant_one() { return KSequence(0.0, 1.0); }

    double at(long n) const;
    double c() const noexcept { return c_; }
    double s() const noexcept { return s_; }

private:
    double c_;
    double s_;
};

//! psi(t) = scale * t^power with scale > 0, power >= 1; strictly
//! increasing on [0, inf) with psi(0) = 0.
class PsiSpec {
public:
    PsiSpec(double scale, double power);

    double operator()(double t) const;
    double scale() const noexcept { return scale_; }
    double power() const noexcept { return power_; }

private:
    double scale_;
    double power_;
};

struct Violation {
    long n = 0;  // power index of the violation; 0 when not applicable
    std::vector<Point> witnesses;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct CheckReport {
    bool passed = true;
    std::optional<Violation> first_violation;
    long n_tested = 0;
    std::size_t samples_tested = 0;
    std::string notes;
};

//! max over pairs of ||T^n x - T^n y|| / ||x - y||; a certified lower
//! bound on the Lipschitz constant of T^n. Degenerate pairs are skipped.
double estimate_power_lipschitz(const OperatorSpec& op, long n,
                                const std::vector<std::pair<Point, Point>>& pairs,
                                NormTag tag);

//! Refute-or-pass check of ||T^n x - T^n y|| <= L ||x - y|| for all
//! tested n <= n_max; failure carries the earliest violating n.
CheckReport check_uniform_lipschitz(const OperatorSpec& op, double bound, long n_max,
                                    const std::vector<std::pair<Point, Point>>& pairs,
                                    NormTag tag);

//! <T^n x - T^n y, j(x - y)> <= k_n ||x - y||^2 over the tested horizon.
CheckReport check_asymptotic_pseudocontractivity(const OperatorSpec& op, const KSequence& k,
                                                 long n_max,
                                                 const std::vector<std::pair<Point, Point>>& pairs,
                                                 NormTag tag);

//! <T^n x - x*, j(x - x*)> <= k_n ||x - x*||^2 - psi(||x - x*||) over the
//! tested horizon. Requires x* to be a fixed point of T to within 1e-12;
//! otherwise throws FixedPointPrecondition carrying the residual.
CheckReport check_star_condition(const OperatorSpec& op, const Point& xstar,
                                 const KSequence& k, const PsiSpec& psi, long n_max,
                                 const std::vector<Point>& samples, NormTag tag);

//! Fails iff some candidate y with ||T y - y|| <= 1e-12 lies farther than
//! 1e-9 from xstar. A consistency probe, not a proof of uniqueness.
CheckReport assert_unique_fixed_point(const OperatorSpec& op, const Point& xstar,
                                      const std::vector<Point>& candidates, NormTag tag);

//! Deterministic sampler for checker inputs; same seed, same samples.
class SampleGen {
public:
    explicit SampleGen(std::uint64_t seed);

    double uniform(double lo, double hi);
    Point point(std::size_t dim, double box);
    std::vector<Point> points(std::size_t count, std::size_t dim, double box);
    //! Pairs of distinct points.
    std::vector<std::pair<Point, Point>> pairs(std::size_t count, std::size_t dim, double box);

private:
    std::uint64_t next();

    std::uint64_t state_;
};

}  // namespace fixpoint
