#pragma once

// Constrained three-objective search over x = [d_cs, r, L, m]: exhaustive grid
// evaluation, Pareto filtering, hypervolume, and (d_cs, r) contour slices.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slideocam/mechanics.hpp"

namespace slideocam {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Evenly spaced values over [lo, hi], both ends included.
std::vector<double> linspace(Interval range, std::size_t count);


struct ConstraintCaps {
    double pressure_angle = 30.0 * kDegree;  // rad
    double pressure = 800.0;                 // MPa
    double size = 90.0;                      // mm
};

struct DesignSpace {
    Interval camshaft_diameter{0.0, 30.0};  // mm
    Interval roller_radius{4.0, 10.5};      // mm
    double min_width = 1.0;                 // mm; upper bound is caps.size / m
    std::vector<int> cam_counts{2, 3};
    std::size_t resolution = 64;            // grid points per continuous axis
    double pitch = 20.0;                    // mm
    int lobes = 1;
    LoadCase load{};
    Material cam = find_material(builtin_materials(), kDefaultMaterial);
    Material roller = find_material(builtin_materials(), kDefaultMaterial);
    ConstraintCaps caps{};

    Interval width_range(int cams) const { return {min_width, caps.size / cams}; }
    void validate() const;
};

struct DesignVector {
    double camshaft_diameter = 0.0;  // mm
    double roller_radius = 0.0;      // mm
    double contact_width = 0.0;      // mm
    int cams = 2;
};

struct Objectives {
    double pressure_angle = 0.0;  // mu_max, rad
    double pressure = 0.0;        // P_max, MPa
    double size = 0.0;            // S_M, mm
};

enum Violation : std::uint8_t {
    kNoViolation = 0,
    kGeometry = 1u << 0,
    kPressureAngle = 1u << 1,
    kHertzPressure = 1u << 2,
    kSize = 1u << 3,
    kBounds = 1u << 4,
};

std::string describe_violations(std::uint8_t mask);

struct DesignCandidate {
    DesignVector x;
    Objectives objectives;
    double eta = 0.0;
    double psi_mu = 0.0;        // argmax of |mu| on the active segment
    double psi_pressure = 0.0;  // argmax of P on the active segment
    bool feasible = false;
    std::uint8_t violations = kNoViolation;
    bool convex_profile = false;

    bool violates(Violation v) const { return (violations & v) != 0; }
};

/// Width-independent part of a candidate. P_max scales exactly as L^(-1/2),
/// so one evaluation per (d_cs, r, m) serves every contact width.
struct CamEvaluation {
    bool geometry_ok = false;
    double eta = 0.0;
    double mu_max = 0.0;
    double psi_mu = 0.0;
    double unit_pressure = 0.0;  // P_max at L = 1 mm
    double psi_pressure = 0.0;
    bool convex_profile = false;
};

CamEvaluation evaluate_cam(double camshaft_diameter, double roller_radius, int cams,
                           const DesignSpace& space);

DesignCandidate finish_candidate(const DesignVector& x, const CamEvaluation& cam,
                                 const DesignSpace& space);

/// Infeasible candidates are returned with flags, never dropped.
DesignCandidate evaluate_candidate(const DesignVector& x, const DesignSpace& space);

/// Pareto dominance on (mu_max, P_max, S_M), all minimised.
bool dominates(const Objectives& a, const Objectives& b);
bool dominates(const DesignCandidate& a, const DesignCandidate& b);

/// Total order used for deterministic output: objectives, then x.
bool lexicographic_less(const DesignCandidate& a, const DesignCandidate& b);

/// Nondominated feasible candidates, sorted lexicographically. Duplicated
/// objective triples are all retained.
std::vector<DesignCandidate> pareto_front(const std::vector<DesignCandidate>& candidates);

struct SweepResult {
    std::vector<DesignCandidate> candidates;
    std::map<int, std::vector<DesignCandidate>> per_cam_fronts;
    std::vector<DesignCandidate> front;
};

/// Full-grid evaluation. Results do not depend on the thread count.
SweepResult sweep(const DesignSpace& space, unsigned threads = 0);

/// Hypervolume dominated by the front inside the box bounded by `reference`.
/// mu_max in degrees, P in MPa, S_M in mm so that the axes have comparable scale.
double hypervolume(const std::vector<DesignCandidate>& front, const Objectives& reference);

Objectives caps_as_reference(const ConstraintCaps& caps);

struct Segment2 {
    double x0, y0, x1, y1;
};

/// Row-major scalar field: value(i, j) at (xs[i], ys[j]). NaN marks holes.
struct ScalarGrid {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * ys.size() + j]; }
};

/// Marching squares with linear edge interpolation; cells with a NaN corner
/// are skipped, saddles are resolved by the cell-centre average.
std::vector<Segment2> marching_squares(const ScalarGrid& grid, double level);

struct ContourRequest {
    int cams = 2;
    double size = 60.0;  // fixed S_M, mm
    std::size_t resolution = 64;
    std::optional<Interval> camshaft_diameter;  // defaults to the space bounds
    std::optional<Interval> roller_radius;
    std::vector<double> mu_levels;        // rad
    std::vector<double> pressure_levels;  // MPa
};

struct Isoline {
    double level = 0.0;
    std::vector<Segment2> segments;
};

struct ContourSlice {
    double contact_width = 0.0;
    ScalarGrid mu_max;    // rad
    ScalarGrid pressure;  // MPa
    std::vector<DesignCandidate> cells;  // row-major, same layout as the grids
    std::vector<Isoline> mu_isolines;
    std::vector<Isoline> pressure_isolines;
    std::vector<DesignCandidate> locus;  // (mu_max, P_max) Pareto set of the slice
};

ContourSlice contour_slice(const ContourRequest& request, const DesignSpace& space,
                           unsigned threads = 0);

/// Two-objective (mu_max, P_max) front of feasible candidates, sorted by mu_max.
std::vector<DesignCandidate> pareto_front_2d(const std::vector<DesignCandidate>& candidates);

}  // namespace slideocam
