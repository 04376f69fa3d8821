#pragma once

// Performance metrics of one transmission: pressure angle over the active
// segment, torque-driven contact force, Hertz line-contact pressure, size.
//
// Units: mm, N, N*mm, MPa, rad.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slideocam/geometry.hpp"

namespace slideocam {

struct Material {
    std::string name;
    double young_modulus = 210000.0;  // MPa
    double poisson_ratio = 0.3;
    // Range-valued allowable pressures; single values have lo == hi.
    double static_pressure_lo = 0.0;  // MPa
    double static_pressure_hi = 0.0;
    double allowable_pressure_lo = 0.0;  // MPa, fatigue-safe
    double allowable_pressure_hi = 0.0;

    /// Upper bound of the allowable pressure; used by constraint checks.
    double allowable_pressure() const { return allowable_pressure_hi; }

    void validate() const;
};

/// Fraction of the static allowable pressure that secures infinite fatigue life.
inline constexpr double kFatigueFraction = 0.4;

/// Allowable-pressure table for common cam/roller materials. Elastic constants
/// are handbook values.
const std::vector<Material>& builtin_materials();

/// Case-insensitive lookup in a catalog; throws InvalidArgument if absent.
const Material& find_material(const std::vector<Material>& catalog, std::string_view name);

inline constexpr std::string_view kDefaultMaterial = "Improved steel";

struct LoadCase {
    double torque = 1200.0;  // C_t, N*mm
    std::optional<double> speed_rpm;

    void validate() const;
};

/// Above this cam speed the pressure angle should stay below 30 deg.
inline constexpr double kHighSpeedRpm = 50.0;
bool high_speed(const LoadCase& load);

using ActiveSegment = AngleRange;

/// Signed pressure angle. Its magnitude is the reported pressure angle; the
/// sign tells on which side the cam pushes the follower.
double pressure_angle(double psi, double eta, int lobes);

enum class PushDirection { Left, Right };
PushDirection push_direction(double signed_mu);

ActiveSegment active_segment(const TransmissionSpec& spec, double delta);

inline constexpr std::size_t kSegmentScanPoints = 4096;

struct Extremum {
    double value = 0.0;
    double psi = 0.0;
};

/// Max of |mu| over the active segment by dense scan.
Extremum max_pressure_angle(const TransmissionSpec& spec);

/// Normal contact force whose follower-axis component carries 2*pi*C_t/p.
double contact_force(double psi, const LoadCase& load, const TransmissionSpec& spec);

double material_coefficient(const Material& material);

double equivalent_radius(double roller_radius, double rho_c);

double hertz_band_width(double force, double k1, double k2, double r_equ, double width);

struct HertzPressure {
    double value = 0.0;
    bool zero_load = false;
};

HertzPressure hertz_pressure(double force, double width, double band_width);

/// Hertz pressure at one cam angle, composing the force and contact models.
double hertz_pressure_at(double psi, const TransmissionSpec& spec, const LoadCase& load,
                         const Material& cam, const Material& roller);

/// Max of P over the active segment by dense scan. Throws InfeasibleProfile
/// when rho_c <= 0 anywhere on the segment.
Extremum max_hertz_pressure(const TransmissionSpec& spec, const LoadCase& load,
                            const Material& cam, const Material& roller);

double mechanism_size(int cams, double contact_width);

struct AllowableCheck {
    double limit = 0.0;  // MPa, weaker of the two materials
    bool passes = false;
};

/// P_max against the upper allowable pressure of the cam and roller materials.
AllowableCheck check_allowable(double pressure, const Material& cam, const Material& roller);

}  // namespace slideocam
