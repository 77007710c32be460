#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoflow/hyperbolic.hpp"

namespace geoflow::schottky {

// Closed arc of the boundary circle, from angle `lo` counterclockwise for `len`.
struct Arc {
    double lo = 0;
    double len = 0;
    static Arc from_endpoints(double lo, double hi);
    double hi() const;
    double midpoint() const;
    bool contains(double theta, double tol = 0.0) const;
    bool contains(const hyp::BoundaryPoint& xi, double tol = 0.0) const;
    // Angular distance from theta into the complement (0 if theta outside).
    double depth(double theta) const;
};

bool arcs_disjoint(const Arc& a, const Arc& b);
double arc_gap(const Arc& a, const Arc& b);  // angular gap between disjoint arcs

enum class GenKind { hyperbolic, parabolic };

struct GeneratorSpec {
    std::string label;
    hyp::Isometry iso;
    GenKind kind = GenKind::hyperbolic;
    Arc arc_plus;   // C_a: neighbourhood of the attracting (resp. parabolic) fixed point
    Arc arc_minus;  // C_{a^{-1}}: neighbourhood of the repelling fixed point (hyperbolic only)
};

// Reduced words a_1^{m_1} ... a_k^{m_k}: adjacent bases distinct, exponents nonzero.
struct Letter {
    int base = 0;
    long long exp = 1;
    bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;
bool is_reduced(const Word& w);

struct CodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchottkyGroup {
    std::vector<GeneratorSpec> gens;
    hyp::BoundaryPoint xi0;       // reference boundary point outside all arcs
    double triangle_C = 0.0;      // estimated constant of the two-sided roof bound
    double c5_margin = 0.0;       // cached horoball-separation margin

    int n1() const;  // hyperbolic generators
    int n2() const;  // parabolic generators
    // signed arc: sign > 0 -> C_a, sign < 0 -> C_{a^{-1}} (parabolic: always C_p)
    const Arc& arc(int base, int sign) const;
    hyp::Isometry letter_iso(const Letter& l) const;
    // arc the image of an admissible tail lands in after applying base^exp
    const Arc& target_arc(const Letter& l) const;
};

struct ConditionCheck {
    bool pass = false;
    double margin = 0.0;  // angular slack; negative on failure
    std::string detail;
};

struct ValidationReport {
    ConditionCheck c1, c2, c3;
    bool pass() const { return c1.pass && c2.pass && c3.pass; }
};

struct ValidateOptions {
    int boundary_grid = 4096;
    int parabolic_power_check = 100;
};

ValidationReport validate(const SchottkyGroup& g, const ValidateOptions& opt = {});

// Minimum over sampled xi in C_{a1} and admissible a2 of B_xi(a2^{+-1} o, o).
// Positive margin accepts (C5); otherwise replace generators by powers.
double check_c5(const SchottkyGroup& g, int grid_per_arc = 1024);

SchottkyGroup power_up(const SchottkyGroup& g, int N);

// xi0 image of a finite reduced word; residual_diam receives the angular
// diameter of the arc containing every extension of the word.
hyp::BoundaryPoint word_limit(const SchottkyGroup& g, const Word& w,
                              double* residual_diam = nullptr);

// Greedy peeling of the first `depth` letters of the coding of xi.
Word code_point(const SchottkyGroup& g, hyp::BoundaryPoint xi, int depth,
                long long exponent_cap = 2'000'000);

// First-return time tau = B_xi(o, a^m o) of the cylinder named by w, with xi
// approximated through the prefix of length `depth`.
double roof(const SchottkyGroup& g, const Word& w, int depth, double* error_bound = nullptr);

struct TriangleOptions {
    int geodesic_samples = 24;
    int orbit_power_cap = 50;
    double safety_factor = 1.5;
};

double triangle_constant(const SchottkyGroup& g, const TriangleOptions& opt = {});

hyp::BoundaryPoint default_xi0(const std::vector<GeneratorSpec>& gens);

// Validates, fills xi0 when unset, caches the triangle constant and C5 margin.
SchottkyGroup prepare(SchottkyGroup g, const ValidateOptions& opt = {});

// Built-in groups. figure1: one hyperbolic and one parabolic generator in the
// pictured arc layout; two_cusps: one hyperbolic and two parabolic generators
// (topologically mixing base).
SchottkyGroup figure1_group(double ell = 3.0, double parabolic_shift = 3.6);
SchottkyGroup two_cusps_group(double ell = 3.5, double parabolic_shift = 8.0);

}  // namespace geoflow::schottky
