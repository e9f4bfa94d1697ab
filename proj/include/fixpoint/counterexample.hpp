#pragma once

#include <vector>

#include "fixpoint/rational.hpp"

namespace fixpoint {

//! Exact arithmetic witnesses for the doubling-map gap phenomenon on the
//! real line: the auxiliary and principal sequences approach the fixed
//! point 0 of Tx = 2x while T^n keeps their images at least 1 apart, so a
//! pointwise gap bound cannot follow from convergence of the sequences
//! alone. Everything in this header computes over Rational; doubles are
//! banned from these code paths.

//! y_n = 1 + 1/n and x_{n+1} = 1 - 1/n for n >= 1.
struct SequencePair {
    Rational auxiliary;  //!< y_n = 1 + 1/n
    Rational principal;  //!< x_{n+1} = 1 - 1/n
};

SequencePair example_sequences(unsigned long n);

//! T^n x for the doubling map, i.e. 2^n * x.
Rational doubling_power(unsigned long n, const Rational& x);

//! T^n x for Tx = factor * x, i.e. factor^n * x.
Rational scaling_power(const Rational& factor, unsigned long n, const Rational& x);

//! |T^n y_n - T^n x_{n+1}| for the doubling map. Always equals
//! 2^{n+1} / n; a mismatch between enumeration and closed form is an
//! internal bug and throws std::logic_error.
Rational gap(unsigned long n);

//! Result of checking every exact claim about the doubling-map gap for
//! n = 1..n_verified. Returned only when all claims hold; a violated
//! claim throws std::logic_error instead.
struct GapSurvey {
    unsigned long n_verified = 0;
    bool pair_gap_is_two_over_n = false;   //!< |y_n - x_{n+1}| == 2/n
    bool power_gap_matches_closed_form = false;  //!< gap(n) == 2^{n+1}/n
    bool growth_dominates = false;         //!< 2^{n+1} >= n
    bool gap_at_least_one = false;         //!< gap(n) >= 1
    Rational min_gap;
    std::vector<unsigned long> min_gap_at;  //!< every n attaining min_gap
};

GapSurvey verify_note_claims(unsigned long n_max);

//! Smallest n with 2/n < epsilon; equals floor(2/epsilon) + 1.
//! epsilon must be positive.
unsigned long epsilon_threshold(const Rational& epsilon);

//! Exact verification that a uniformly Lipschitz contraction repairs the
//! gap argument: with Tx = contraction * x (0 < contraction < 1) the
//! diagnostic d_n = diag_scale * |T^n y_n - T^n x_{n+1}| satisfies
//! d_n <= diag_scale * lipschitz * (2/n) and decreases strictly, so its
//! tail suprema are the leading terms and vanish.
struct ContractionDemo {
    unsigned long n_verified = 0;
    Rational contraction;
    Rational diag_scale;
    Rational lipschitz;
    bool bound_holds = false;
    bool strictly_decreasing = false;
    std::vector<Rational> dn;  //!< d_1..d_{n_verified}

    //! sup_{n >= n0} d_n, which is d_{n0} by monotonicity.
    const Rational& tail_max(unsigned long n0) const;
};

ContractionDemo corrected_demo(const Rational& contraction, unsigned long n_max,
                               const Rational& diag_scale, const Rational& lipschitz);

}  // namespace fixpoint
