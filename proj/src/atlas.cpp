#include "qdlab/atlas.hpp"

#include <algorithm>
#include <cmath>

namespace qdlab {

namespace {

// 1 - e^{i theta} in polar form, stable near theta = 0:
// modulus 2 sin(|theta|/2), argument (theta - sign(theta) pi)/2.
void one_minus_exp(double theta, double& mod, double& arg) {
    const double s = std::sin(0.5 * std::abs(theta));
    mod = 2.0 * s;
    arg = 0.5 * (theta - (theta >= 0 ? kPi : -kPi));
}

}  // namespace

AtlasDomain::AtlasDomain(AtlasKind k, double a, double b)
    : kind_(k), alpha_(a), beta_(b) {}

AtlasDomain AtlasDomain::disk() { return AtlasDomain(AtlasKind::disk, 1.0, 0.0); }

AtlasDomain AtlasDomain::wedge(double alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.5))
        throw Error("AtlasDomain: wedge alpha outside [0.5, 1.5]");
    AtlasDomain d(AtlasKind::wedge, alpha, 0.0);
    // Univalence on the parameter range is asserted empirically.
    d.boundary_domain(std::size_t{1} << 12, 0x1p-20);
    return d;
}

AtlasDomain AtlasDomain::spiral_wedge(double alpha, double beta) {
    if (!(alpha >= 0.6 && alpha <= 1.4 && std::abs(beta) <= 0.3))
        throw Error("AtlasDomain: spiral parameters outside range");
    AtlasDomain d(AtlasKind::spiral_wedge, alpha, beta);
    d.boundary_domain(std::size_t{1} << 12, 0x1p-20);
    return d;
}

Complex AtlasDomain::phi(Complex z) const {
    if (std::abs(z) >= 1.0 + 1e-15) throw OutsideDisk();
    if (kind_ == AtlasKind::disk) return z;
    const Complex e(alpha_, beta_);
    return 1.0 - std::exp(e * std::log(1.0 - z));
}

Complex AtlasDomain::phi_prime(Complex z) const {
    if (std::abs(z) >= 1.0 + 1e-15) throw OutsideDisk();
    if (kind_ == AtlasKind::disk) return {1.0, 0.0};
    const Complex e(alpha_, beta_);
    return e * std::exp((e - 1.0) * std::log(1.0 - z));
}

double AtlasDomain::abs_phi_prime(Complex z) const {
    if (kind_ == AtlasKind::disk) return 1.0;
    const Complex L = std::log(1.0 - z);  // principal; Re(1-z) > 0 on D
    return std::abs(Complex(alpha_, beta_)) *
           std::exp((alpha_ - 1.0) * L.real() - beta_ * L.imag());
}

double AtlasDomain::arg_phi_prime(Complex z) const {
    if (kind_ == AtlasKind::disk) return 0.0;
    const Complex L = std::log(1.0 - z);
    return std::arg(Complex(alpha_, beta_)) + beta_ * L.real() +
           (alpha_ - 1.0) * L.imag();
}

Complex AtlasDomain::boundary_offset_from_tip(double theta) const {
    if (kind_ == AtlasKind::disk)
        return Complex{std::cos(theta) - 1.0, std::sin(theta)};
    double mod, arg;
    one_minus_exp(theta, mod, arg);
    if (mod == 0.0) return {0.0, 0.0};
    const double lr = std::log(mod);
    // -(1-e^{i theta})^(alpha+i beta)
    const double out_mod = std::exp(alpha_ * lr - beta_ * arg);
    const double out_arg = alpha_ * arg + beta_ * lr;
    return -std::polar(out_mod, out_arg);
}

JordanDomain AtlasDomain::boundary_domain(std::size_t min_vertices,
                                          double theta_min,
                                          bool shift_to_tip) const {
    std::vector<double> thetas;
    const std::size_t base = std::max<std::size_t>(min_vertices, 64);
    thetas.reserve(base + 1024);
    for (std::size_t i = 0; i < base; ++i) {
        const double t = -kPi + kTwoPi * (static_cast<double>(i) + 0.5) /
                                    static_cast<double>(base);
        thetas.push_back(t);
    }
    if (kind_ != AtlasKind::disk) {
        // Geometric refinement towards theta = 0 from both sides. The graded
        // zone reaches 16 uniform gaps so the handover segments also satisfy
        // the length < dist/8 property.
        const double uniform_gap = kTwoPi / static_cast<double>(base);
        const double ratio = 1.0 + 1.0 / 32.0;
        for (double t = theta_min; t < 16.0 * uniform_gap; t *= ratio) {
            thetas.push_back(t);
            thetas.push_back(-t);
        }
        thetas.push_back(0.0);  // the tip itself is a vertex
    }
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

    const Complex shift = shift_to_tip ? tip() : Complex{0.0, 0.0};
    std::vector<Complex> vertices;
    vertices.reserve(thetas.size());
    for (double t : thetas) {
        const Complex p = (kind_ == AtlasKind::disk)
                              ? boundary_point(t) - shift
                              : (shift_to_tip ? boundary_offset_from_tip(t)
                                              : boundary_point(t));
        if (!vertices.empty() && std::abs(p - vertices.back()) < 1e-300) continue;
        vertices.push_back(p);
    }
    Polyline boundary(std::move(vertices), true, Polyline::Validate::simple);
    return {std::move(boundary), basepoint() - shift, "atlas discretization"};
}

Complex representing_point(const ArcOnCircle& I) {
    if (!(I.length > 0.0) || I.length >= 0.5) throw ArcTooLong();
    return std::polar(1.0 - I.length, I.center_angle);
}

double exact_harmonic_measure(double preimage_length) {
    return preimage_length / kTwoPi;
}

ImageArcProbe image_arc_probe(const AtlasDomain& domain, const ArcOnCircle& I,
                              std::size_t samples_per_side, bool shift_to_tip) {
    if (!(I.length > 0.0) || I.length >= 0.25)
        throw ArcTooLong("image_arc_probe: need lambda_1(I) < 0.25");
    const Complex z_I = representing_point(I);

    ImageArcProbe probe;
    probe.exact_abs_phi_prime = domain.abs_phi_prime(z_I);
    probe.exact_arg_phi_prime = domain.arg_phi_prime(z_I);
    probe.exact_exp_arg_phi_prime = std::exp(probe.exact_arg_phi_prime);

    const double lo = I.center_angle - 0.5 * I.length;
    const double hi = I.center_angle + 0.5 * I.length;
    std::vector<double> thetas;
    thetas.reserve(2 * samples_per_side + 8);
    const double straddles_tip = (lo < 0.0 && hi > 0.0);
    if (straddles_tip && domain.kind() != AtlasKind::disk) {
        // grade towards the tip from both endpoints
        const double floor_t = std::min(std::abs(lo), hi) * 0x1p-40;
        const auto grade = [&](double from) {
            const double a = std::abs(from);
            const double ratio =
                std::pow(a / std::max(floor_t, 1e-300), 1.0 / samples_per_side);
            double t = a;
            for (std::size_t i = 0; i < samples_per_side; ++i) {
                thetas.push_back(from < 0 ? -t : t);
                t /= std::max(ratio, 1.0 + 1e-12);
            }
        };
        grade(lo);
        grade(hi);
        thetas.push_back(0.0);
    } else {
        for (std::size_t i = 0; i <= 2 * samples_per_side; ++i)
            thetas.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(2 * samples_per_side));
    }
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

    const Complex shift = shift_to_tip ? domain.tip() : Complex{0.0, 0.0};
    probe.image_points.reserve(thetas.size());
    for (double t : thetas) {
        const Complex p = shift_to_tip && domain.kind() != AtlasKind::disk
                              ? domain.boundary_offset_from_tip(t)
                              : domain.boundary_point(t) - shift;
        probe.image_points.push_back(p);
    }
    probe.image_diameter = point_set_diameter(probe.image_points);
    probe.proxy_abs_phi_prime = probe.image_diameter / I.length;
    probe.midpoint = shift_to_tip && domain.kind() != AtlasKind::disk
                         ? domain.boundary_offset_from_tip(I.center_angle)
                         : domain.boundary_point(I.center_angle) - shift;
    return probe;
}

}  // namespace qdlab
