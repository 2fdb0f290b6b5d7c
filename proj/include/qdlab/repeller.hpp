#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qdlab/geometry.hpp"

namespace qdlab {

// Letters are orientation-preserving plane similarities acting on base-arc
// coordinates (the base arc runs from 0 to 1).
struct Letter {
    double scale;         // in (0,1)
    double angle;         // in (-pi, pi]
    Complex translation;
    bool orientation_preserving = true;

    Complex derivative() const { return std::polar(scale, angle); }
    Complex apply(Complex z) const { return translation + derivative() * z; }
};

using Word = std::vector<int>;  // letter indices, 0-based

std::string word_to_string(const Word& w);    // 1-based digits, e.g. "132"
Word word_from_string(const std::string& s);  // inverse

struct RepellerSpec {
    std::string name = "custom";
    std::vector<Letter> letters;
    // adjacency[j][l] != 0 iff letter l may follow letter j.
    std::vector<std::vector<std::uint8_t>> adjacency;
    int k_max = 8;

    int alphabet() const { return static_cast<int>(letters.size()); }
    double expansion_rate() const;  // D = 1 / max scale
    bool full_shift() const;
    bool admissible(const Word& w) const;

    // Expanding, Mixing, and the generation-1 endpoint tiling. Throws.
    void validate() const;

    // Conjugated system: angles negated, translations conjugated.
    RepellerSpec reflected() const;

    // Box dimension from the Moran equation sum s_j^d = 1.
    double moran_dimension() const;
    // Surrogate per-letter measures proportional to s_j^d (they sum to 1).
    std::vector<double> surrogate_letter_measures() const;

    double scale_product(const Word& w) const;
    double angle_sum(const Word& w) const;
};

RepellerSpec koch_spec();
RepellerSpec twisted_koch_spec(double theta_twist);
RepellerSpec carleson_linear_spec();

struct JordanDomain {
    Polyline boundary;  // closed, simple, counterclockwise
    Complex basepoint;  // z0 strictly inside
    std::string provenance;
};

JordanDomain reflect(const JordanDomain& domain);

struct Cylinder {
    Word word;
    std::size_t arc_lo;  // the cylinder spans arc vertices [arc_lo, arc_hi]
    std::size_t arc_hi;  // in A->B order
    double raw_diameter;
    double renorm_diameter;  // product of letter scales, exact
};

// A repeller realized at a fixed generation: the closed Jordan boundary is a
// hexagon carrying three congruent copies of the generation-k arc on
// alternating sides, with the repeller arc itself on the base side (0,0)-(1,0)
// and the basepoint at the hexagon center.
class PrefractalDomain {
public:
    const RepellerSpec& spec() const { return spec_; }
    int generation() const { return generation_; }
    const Polyline& boundary() const { return domain_.boundary; }
    Complex basepoint() const { return domain_.basepoint; }
    const JordanDomain& jordan() const { return domain_; }

    // Repeller arc, A->B order; M = alphabet^generation segments.
    const std::vector<Complex>& arc_vertices() const { return arc_vertices_; }
    std::size_t arc_segment_count() const { return arc_vertices_.size() - 1; }

    std::uint32_t boundary_segment_of_arc(std::size_t i) const;
    // Boundary segment range [first, last) covering arc segments [lo, hi).
    std::pair<std::uint32_t, std::uint32_t> boundary_range_of_arc(
        std::size_t lo, std::size_t hi) const;
    std::pair<std::uint32_t, std::uint32_t> arc_boundary_range() const {
        return boundary_range_of_arc(0, arc_segment_count());
    }

    Cylinder cylinder(const Word& w) const;
    Polyline cylinder_arc(const Cylinder& c) const;

    // Exact conjugate copy (boundary vertices conjugated, orientation kept).
    PrefractalDomain reflected() const;

private:
    friend PrefractalDomain generate_prefractal(const RepellerSpec&, int);

    PrefractalDomain(RepellerSpec spec, int generation,
                     std::vector<Complex> arc, JordanDomain dom,
                     std::uint32_t arc_block_first, bool arc_block_reversed)
        : spec_(std::move(spec)),
          generation_(generation),
          arc_vertices_(std::move(arc)),
          domain_(std::move(dom)),
          arc_block_first_(arc_block_first),
          arc_block_reversed_(arc_block_reversed) {}

    RepellerSpec spec_;
    int generation_;
    std::vector<Complex> arc_vertices_;
    JordanDomain domain_;
    std::uint32_t arc_block_first_;
    bool arc_block_reversed_;
};

PrefractalDomain generate_prefractal(const RepellerSpec& spec, int generation);

// Largest three-point ratio over sampled boundary pairs; monotone in the
// sample count. The connecting arc of smaller diameter is scanned vertex by
// vertex.
double dilatation_estimate(const Polyline& boundary, std::size_t samples,
                           std::uint64_t seed);

struct ArcPiece {
    std::size_t seg_begin;  // first segment index
    double t_begin;         // parameter on seg_begin
    std::size_t seg_end;    // last segment index (inclusive)
    double t_end;           // parameter on seg_end
    double diameter;
    std::vector<Complex> points;  // vertex chain of the piece
};

// Partition an open chain into adjacent pieces: every piece except the last
// has diameter delta (within tolerance), the last has diameter <= delta.
std::vector<ArcPiece> greedy_arc_partition(const Polyline& curve, double delta,
                                           double length_ratio_cap = 1e6);

}  // namespace qdlab
