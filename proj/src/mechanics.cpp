#include "slideocam/mechanics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "slideocam/error.hpp"

namespace slideocam {

namespace {

Material make_material(std::string name, double young, double poisson, double stat_lo,
                       double stat_hi, double allow_lo, double allow_hi) {
    Material m;
    m.name = std::move(name);
    m.young_modulus = young;
    m.poisson_ratio = poisson;
    m.static_pressure_lo = stat_lo;
    m.static_pressure_hi = stat_hi;
    m.allowable_pressure_lo = allow_lo;
    m.allowable_pressure_hi = allow_hi;
    return m;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

void Material::validate() const {
    if (!(young_modulus > 0.0))
        throw Error(ErrorKind::InvalidArgument, "material '" + name + "': E must be positive");
    if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
        throw Error(ErrorKind::InvalidArgument,
                    "material '" + name + "': Poisson ratio must lie in [0, 0.5)");
    if (static_pressure_lo > static_pressure_hi || allowable_pressure_lo > allowable_pressure_hi)
        throw Error(ErrorKind::InvalidArgument,
                    "material '" + name + "': pressure range lower bound exceeds upper bound");
}

const std::vector<Material>& builtin_materials() {
    // Allowable pressures P_stat and P_max (= 40% of P_stat unless a range is
    // tabulated). Aluminium's upper fatigue bound is tabulated, not derived.
    static const std::vector<Material> table = {
        make_material("Stainless steel", 200000.0, 0.30, 650.0, 650.0, 260.0, 260.0),
        make_material("Improved steel", 210000.0, 0.30, 1600.0, 2000.0, 640.0, 800.0),
        make_material("Grey cast iron", 110000.0, 0.26, 400.0, 700.0, 160.0, 280.0),
        make_material("Aluminum", 70000.0, 0.33, 62.5, 62.5, 25.0, 150.0),
        make_material("Polyamide", 3000.0, 0.40, 25.0, 25.0, 10.0, 10.0),
    };
    return table;
}

const Material& find_material(const std::vector<Material>& catalog, std::string_view name) {
    for (const auto& m : catalog) {
        if (iequals(m.name, name)) return m;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown material '" + std::string(name) + "'");
}

void LoadCase::validate() const {
    if (!(torque > 0.0)) throw Error(ErrorKind::InvalidArgument, "torque must be positive");
    if (speed_rpm && !(*speed_rpm >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "cam speed must be non-negative");
}

bool high_speed(const LoadCase& load) {
    return load.speed_rpm && *load.speed_rpm > kHighSpeedRpm;
}

double pressure_angle(double psi, double eta, int lobes) {
    const double n = static_cast<double>(lobes);
    const double denom = n * psi - kPi;
    if (std::abs(denom) < 1e-12) {
        throw Error(ErrorKind::PressureAngleSingular,
                    "n*psi = pi: the pressure angle is +-90 deg at mid-stroke");
    }
    return std::atan(n * (1.0 - kTwoPi * eta) / denom);
}

PushDirection push_direction(double signed_mu) {
    return signed_mu >= 0.0 ? PushDirection::Right : PushDirection::Left;
}

ActiveSegment active_segment(const TransmissionSpec& spec, double delta) {
    if (spec.cams < 2) {
        throw Error(ErrorKind::InfeasibleCamCount,
                    "a Slide-o-Cam with a single cam is not feasible (m = " +
                        std::to_string(spec.cams) + ")");
    }
    return driving_range(spec, delta);
}

Extremum max_pressure_angle(const TransmissionSpec& spec) {
    const auto segment = active_segment(spec, extended_angle(spec));
    const double step = segment.length() / static_cast<double>(kSegmentScanPoints - 1);
    Extremum best{-1.0, segment.start};
    for (std::size_t i = 0; i < kSegmentScanPoints; ++i) {
        const double psi = (i + 1 == kSegmentScanPoints)
                               ? segment.end
                               : segment.start + step * static_cast<double>(i);
        const double mu = std::abs(pressure_angle(psi, spec.eta, spec.lobes));
        if (mu > best.value) best = {mu, psi};
    }
    return best;
}

double contact_force(double psi, const LoadCase& load, const TransmissionSpec& spec) {
    const double mu = pressure_angle(psi, spec.eta, spec.lobes);
    const double c = std::cos(mu);
    if (c < 1e-12) {
        throw Error(ErrorKind::ForceSingular, "pressure angle approaches 90 deg");
    }
    return kTwoPi * load.torque / (spec.pitch * c);
}

double material_coefficient(const Material& material) {
    if (!(material.young_modulus > 0.0))
        throw Error(ErrorKind::InvalidArgument, "Young modulus must be positive");
    const double nu = material.poisson_ratio;
    return (1.0 - nu * nu) / (kPi * material.young_modulus);
}

double equivalent_radius(double roller_radius, double rho_c) {
    if (!(rho_c > -roller_radius)) {
        throw Error(ErrorKind::DegenerateContact,
                    "rho_c = " + std::to_string(rho_c) + " mm must exceed -r");
    }
    if (std::isinf(rho_c)) return roller_radius;
    return roller_radius * rho_c / (roller_radius + rho_c);
}

double hertz_band_width(double force, double k1, double k2, double r_equ, double width) {
    if (!(force >= 0.0)) throw Error(ErrorKind::InvalidArgument, "force must be non-negative");
    if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "contact width must be positive");
    if (!(r_equ > 0.0))
        throw Error(ErrorKind::InvalidArgument, "equivalent radius must be positive");
    return std::sqrt(16.0 * force * (k1 + k2) * r_equ / width);
}

HertzPressure hertz_pressure(double force, double width, double band_width) {
    if (force == 0.0) return {0.0, true};
    if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "contact width must be positive");
    if (!(band_width > 0.0))
        throw Error(ErrorKind::InvalidArgument, "band width must be positive");
    return {4.0 * force / (width * kPi * band_width), false};
}

double hertz_pressure_at(double psi, const TransmissionSpec& spec, const LoadCase& load,
                         const Material& cam, const Material& roller) {
    const double rho_c = profile_radius(psi, spec);
    if (!(rho_c > 0.0)) {
        throw Error(ErrorKind::InfeasibleProfile,
                    "rho_c = " + std::to_string(rho_c) + " mm at psi = " + std::to_string(psi));
    }
    const double force = contact_force(psi, load, spec);
    const double r_equ = equivalent_radius(spec.roller_radius, rho_c);
    const double band = hertz_band_width(force, material_coefficient(cam),
                                         material_coefficient(roller), r_equ, spec.contact_width);
    return hertz_pressure(force, spec.contact_width, band).value;
}

Extremum max_hertz_pressure(const TransmissionSpec& spec, const LoadCase& load,
                            const Material& cam, const Material& roller) {
    const auto segment = active_segment(spec, extended_angle(spec));
    const double step = segment.length() / static_cast<double>(kSegmentScanPoints - 1);
    Extremum best{-1.0, segment.start};
    for (std::size_t i = 0; i < kSegmentScanPoints; ++i) {
        const double psi = (i + 1 == kSegmentScanPoints)
                               ? segment.end
                               : segment.start + step * static_cast<double>(i);
        const double p = hertz_pressure_at(psi, spec, load, cam, roller);
        if (p > best.value) best = {p, psi};
    }
    return best;
}

double mechanism_size(int cams, double contact_width) {
    if (cams < 2) {
        throw Error(ErrorKind::InfeasibleCamCount,
                    "a Slide-o-Cam with a single cam is not feasible");
    }
    if (!(contact_width > 0.0))
        throw Error(ErrorKind::InvalidArgument, "contact width must be positive");
    return cams * contact_width;
}

AllowableCheck check_allowable(double pressure, const Material& cam, const Material& roller) {
    AllowableCheck out;
    out.limit = std::min(cam.allowable_pressure(), roller.allowable_pressure());
    out.passes = pressure <= out.limit;
    return out;
}

}  // namespace slideocam
