#include "fixpoint/counterexample.hpp"

#include <stdexcept>
#include <string>

#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {

void require_positive_index(unsigned long n, const char* what) {
    if (n == 0) throw InvalidInput(std::string(what) + " requires n >= 1");
}

[[noreturn]] void internal_bug(const std::string& what, unsigned long n) {
    throw std::logic_error("exact claim '" + what + "' failed at n = " + std::to_string(n) +
                           "; this is an implementation bug");
}

const Rational kOne(1, 1);
const Rational kTwo(2, 1);

}  // namespace

SequencePair example_sequences(unsigned long n) {
    require_positive_index(n, "example_sequences");
    const Rational inv(1, static_cast<long long>(n));
    return SequencePair{kOne + inv, kOne - inv};
}

Rational doubling_power(unsigned long n, const Rational& x) {
    return Rational::pow2(static_cast<long>(n)) * x;
}

Rational scaling_power(const Rational& factor, unsigned long n, const Rational& x) {
    return factor.pow(n) * x;
}

Rational gap(unsigned long n) {
    require_positive_index(n, "gap");
    const SequencePair pair = example_sequences(n);
    const Rational enumerated = (doubling_power(n, pair.auxiliary) -
                                 doubling_power(n, pair.principal))
                                    .abs();
    const Rational closed = Rational::pow2(static_cast<long>(n) + 1) /
                            Rational(static_cast<long long>(n));
    if (enumerated != closed) internal_bug("gap(n) == 2^{n+1}/n", n);
    return enumerated;
}

GapSurvey verify_note_claims(unsigned long n_max) {
    require_positive_index(n_max, "verify_note_claims");
    GapSurvey survey;
    survey.n_verified = n_max;
    survey.pair_gap_is_two_over_n = true;
    survey.power_gap_matches_closed_form = true;
    survey.growth_dominates = true;
    survey.gap_at_least_one = true;

    for (unsigned long n = 1; n <= n_max; ++n) {
        const SequencePair pair = example_sequences(n);
        const Rational rn(static_cast<long long>(n));

        const Rational pair_gap = (pair.auxiliary - pair.principal).abs();
        if (pair_gap != kTwo / rn) internal_bug("|y_n - x_{n+1}| == 2/n", n);

        // gap() re-derives the closed form and hard-errors on mismatch.
        const Rational g = gap(n);

        if (Rational::pow2(static_cast<long>(n) + 1) < rn) internal_bug("2^{n+1} >= n", n);
        if (g < kOne) internal_bug("gap(n) >= 1", n);

        if (survey.min_gap_at.empty() || g < survey.min_gap) {
            survey.min_gap = g;
            survey.min_gap_at.assign(1, n);
        } else if (g == survey.min_gap) {
            survey.min_gap_at.push_back(n);
        }
    }
    return survey;
}

unsigned long epsilon_threshold(const Rational& epsilon) {
    if (!(epsilon > Rational())) throw InvalidInput("epsilon must be positive");
    const long long floored = (kTwo / epsilon).floor_ll();
    const unsigned long n = static_cast<unsigned long>(floored) + 1ul;

    // Cross-check the closed form: 2/n < epsilon and, unless n == 1, the
    // previous index still misses the threshold.
    const Rational rn(static_cast<long long>(n));
    if (!(kTwo / rn < epsilon)) internal_bug("2/n < epsilon at the threshold", n);
    if (n > 1) {
        const Rational prev(static_cast<long long>(n - 1));
        if (kTwo / prev < epsilon) internal_bug("threshold minimality", n);
    }
    return n;
}

const Rational& ContractionDemo::tail_max(unsigned long n0) const {
    if (n0 == 0 || n0 > n_verified) {
        throw InvalidInput("tail_max index must lie in [1, n_verified]");
    }
    return dn[n0 - 1];
}

ContractionDemo corrected_demo(const Rational& contraction, unsigned long n_max,
                               const Rational& diag_scale, const Rational& lipschitz) {
    require_positive_index(n_max, "corrected_demo");
    const Rational zero;
    if (!(contraction > zero) || !(contraction < kOne)) {
        throw InvalidInput("contraction factor must lie in (0, 1)");
    }
    if (!(diag_scale > zero)) throw InvalidInput("diag_scale must be positive");
    // For Tx = c*x the sharp uniform Lipschitz constant over n >= 1 is c
    // itself, so anything below c is not a Lipschitz constant at all.
    if (lipschitz < contraction) {
        throw InvalidInput("lipschitz must be at least the contraction factor");
    }

    ContractionDemo demo;
    demo.n_verified = n_max;
    demo.contraction = contraction;
    demo.diag_scale = diag_scale;
    demo.lipschitz = lipschitz;
    demo.dn.reserve(n_max);

    for (unsigned long n = 1; n <= n_max; ++n) {
        const SequencePair pair = example_sequences(n);
        const Rational rn(static_cast<long long>(n));
        const Rational two_over_n = kTwo / rn;

        const Rational d = diag_scale * (scaling_power(contraction, n, pair.auxiliary) -
                                         scaling_power(contraction, n, pair.principal))
                                            .abs();
        if (d != diag_scale * contraction.pow(n) * two_over_n) {
            internal_bug("d_n == M c^n (2/n)", n);
        }
        if (d > diag_scale * lipschitz * two_over_n) internal_bug("d_n <= M L (2/n)", n);
        if (n > 1 && !(d < demo.dn.back())) internal_bug("d_n strictly decreasing", n);
        demo.dn.push_back(d);
    }
    demo.bound_holds = true;
    demo.strictly_decreasing = true;
    return demo;
}

}  // namespace fixpoint
