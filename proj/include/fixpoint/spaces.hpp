#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace fixpoint {

//! Exponent of the ambient l_p norm. Restricted to 1 < p < inf so the
//! normalized duality mapping is single-valued; p = 2 is the Hilbert case.
class NormTag {
public:
    explicit NormTag(double p = 2.0);

    double p() const noexcept { return p_; }
    //! Conjugate exponent q with 1/p + 1/q = 1.
    double dual_exponent() const noexcept { return p_ / (p_ - 1.0); }
    bool is_hilbert() const noexcept { return p_ == 2.0; }

private:
    double p_;
};

//! A finite-dimensional real vector; the space element.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> xs) : coords(xs) {}

    std::size_t dim() const noexcept { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }
    bool operator==(const Point&) const = default;
};

//! Image of a point under the duality selection; lives in the dual space.
struct DualVector {
    std::vector<double> coords;

    std::size_t dim() const noexcept { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
};

//! Throws InvalidInput on dimension zero or non-finite coordinates.
void validate(const Point& x);
void require_same_dim(const Point& a, const Point& b);

//! The l_p norm (sum_i |x_i|^p)^(1/p).
double norm(const Point& x, NormTag tag);

//! Single-valued selection j(x) of the normalized duality mapping:
//! <x, j(x)> = ||x||^2 and ||j(x)||_q = ||x||_p. Identity for p = 2.
DualVector duality_map(const Point& x, NormTag tag);

//! <u, j(x)>; the Euclidean inner product when p = 2.
double duality_pairing(const Point& u, const Point& x, NormTag tag);

Point difference(const Point& a, const Point& b);

//! Convex combination (1-t)x + t z, evaluated as x + t(z - x) so z == x
//! reproduces x bit-exactly; t == 1 returns z unchanged.
Point lerp(const Point& x, const Point& z, double t);

bool all_finite(const Point& x);
std::string to_string(const Point& x);

}  // namespace fixpoint
