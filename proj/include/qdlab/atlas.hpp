#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qdlab/repeller.hpp"

namespace qdlab {

enum class AtlasKind { disk, wedge, spiral_wedge };

// Bounded simply connected domains with closed-form Riemann maps, used as
// ground truth. Wedge: phi(z) = 1 - (1-z)^alpha. SpiralWedge:
// phi(z) = 1 - (1-z)^(alpha + i beta). Disk: identity. The singular boundary
// point ("tip") is phi(1) = 1 and the basepoint is phi(0) = 0.
class AtlasDomain {
public:
    static AtlasDomain disk();
    static AtlasDomain wedge(double alpha);                       // [0.5, 1.5]
    static AtlasDomain spiral_wedge(double alpha, double beta);   // [0.6,1.4], |beta|<=0.3

    AtlasKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    Complex phi(Complex z) const;
    Complex phi_prime(Complex z) const;
    double abs_phi_prime(Complex z) const;
    // Branch fixed by arg(phi'(0)) in (-pi, pi], evaluated from the
    // closed-form exponent, never from numerical unwrapping.
    double arg_phi_prime(Complex z) const;

    Complex tip() const { return {1.0, 0.0}; }
    Complex basepoint() const { return {0.0, 0.0}; }

    // phi(e^{i theta}) - tip, stable for tiny theta.
    Complex boundary_offset_from_tip(double theta) const;
    Complex boundary_point(double theta) const {
        return kind_ == AtlasKind::disk
                   ? Complex{std::cos(theta), std::sin(theta)}
                   : tip() + boundary_offset_from_tip(theta);
    }

    // Graded polyline boundary: a uniform grid of at least min_vertices
    // angles plus geometric refinement towards the tip down to theta_min, so
    // local segment length stays below (distance to tip)/8. If `shift_to_tip`
    // the vertices are translated by -tip (the tip sits at the origin), which
    // keeps deep scales representable.
    JordanDomain boundary_domain(std::size_t min_vertices = std::size_t{1} << 14,
                                 double theta_min = 0x1p-30,
                                 bool shift_to_tip = false) const;

private:
    AtlasDomain(AtlasKind k, double a, double b);

    AtlasKind kind_;
    double alpha_;
    double beta_;
};

struct ArcOnCircle {
    double center_angle;  // radians
    double length;        // lambda_1(I), radians, in (0, pi)
};

// z_I = zeta_I (1 - lambda_1(I)); requires lambda_1(I) < 1/2.
Complex representing_point(const ArcOnCircle& I);

// Harmonic measure of a boundary arc given as a preimage interval on the
// circle: lambda_1 / (2 pi), exactly.
double exact_harmonic_measure(double preimage_length);

struct ImageArcProbe {
    double exact_abs_phi_prime;      // |phi'(z_I)|
    double exact_arg_phi_prime;      // arg phi'(z_I), closed-form branch
    double exact_exp_arg_phi_prime;  // exp(arg phi'(z_I)) = |phi'^{-i}(z_I)|
    double image_diameter;           // diam(phi(I)) on the discretized image
    double proxy_abs_phi_prime;      // diam(phi(I)) / lambda_1(I)
    std::vector<Complex> image_points;  // discretized phi(I), tip-shifted if asked
    Complex midpoint;                // image of the arc center (same frame)
};

// Analytic half of the Main Lemma probe: exact values at z_I plus the
// discretized image arc. The rotation half is assembled by the rotation
// engine on top of this. Requires lambda_1(I) < 1/4.
ImageArcProbe image_arc_probe(const AtlasDomain& domain, const ArcOnCircle& I,
                              std::size_t samples_per_side = 256,
                              bool shift_to_tip = false);

}  // namespace qdlab
