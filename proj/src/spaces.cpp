#include "fixpoint/spaces.hpp"

#include <cmath>
#include <sstream>

#include "fixpoint/errors.hpp"

namespace fixpoint {

NormTag::NormTag(double p) : p_(p) {
    if (!std::isfinite(p) || p <= 1.0) {
        throw InvalidInput("norm exponent p must be finite with p > 1, got p = " +
                           std::to_string(p));
    }
}

void validate(const Point& x) {
    if (x.dim() == 0) {
        throw InvalidInput("point has dimension zero");
    }
    if (!all_finite(x)) {
        throw InvalidInput("point has a non-finite coordinate: " + to_string(x));
    }
}

void require_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) {
        throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) +
                           " vs " + std::to_string(b.dim()));
    }
}

bool all_finite(const Point& x) {
    for (double v : x.coords) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double norm(const Point& x, NormTag tag) {
    validate(x);
    if (tag.is_hilbert()) {
        double s = 0.0;
        for (double v : x.coords) s += v * v;
        return std::sqrt(s);
    }
    const double p = tag.p();
    double s = 0.0;
    for (double v : x.coords) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

DualVector duality_map(const Point& x, NormTag tag) {
    validate(x);
    if (tag.is_hilbert()) {
        return DualVector{x.coords};
    }
    const double nrm = norm(x, tag);
    DualVector out;
    out.coords.assign(x.dim(), 0.0);
    if (nrm == 0.0) return out;
    // j(x)_i = ||x||^(2-p) |x_i|^(p-1) sign(x_i)
    const double p = tag.p();
    const double scale = std::pow(nrm, 2.0 - p);
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double v = x[i];
        const double mag = scale * std::pow(std::abs(v), p - 1.0);
        out.coords[i] = std::copysign(mag, v);
    }
    return out;
}

double duality_pairing(const Point& u, const Point& x, NormTag tag) {
    validate(u);
    validate(x);
    require_same_dim(u, x);
    if (tag.is_hilbert()) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * x[i];
        return s;
    }
    const DualVector jx = duality_map(x, tag);
    double s = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * jx[i];
    return s;
}

Point difference(const Point& a, const Point& b) {
    require_same_dim(a, b);
    Point out;
    out.coords.resize(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
    return out;
}

Point lerp(const Point& x, const Point& z, double t) {
    require_same_dim(x, z);
    if (t == 0.0) return x;
    if (t == 1.0) return z;
    Point out;
    out.coords.resize(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] + t * (z[i] - x[i]);
    return out;
}

std::string to_string(const Point& x) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (i) os << ", ";
        os << x[i];
    }
    os << ')';
    return os.str();
}

}  // namespace fixpoint
