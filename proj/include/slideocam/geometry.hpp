#pragma once

// Cam profile, pitch curve and curvature of a Slide-o-Cam transmission.
//
// Frames: the u-v frame is attached to the cam, psi is the cam rotation angle.
// Lengths are in mm, angles in rad. Curvatures follow the sign convention of
// the closed-form pitch curvature (positive = convex), which is the opposite
// of the counter-clockwise signed curvature of the parametric curves.

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace slideocam {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDegree = std::numbers::pi / 180.0;

/// |2*pi*eta - 1| below this is rejected as the eta = 1/(2*pi) singularity.
inline constexpr double kEtaSingularTolerance = 1e-9;

struct TransmissionSpec {
    double pitch = 50.0;           // p, mm
    double eta = 0.18;             // e/p
    double roller_radius = 4.0;    // r, mm
    int lobes = 1;                 // n
    int cams = 2;                  // m
    double contact_width = 10.0;   // L, mm

    double eccentricity() const { return eta * pitch; }
    double camshaft_diameter() const { return 2.0 * (eccentricity() - roller_radius); }

    /// Throws Error(InvalidArgument / EtaSingular) if an invariant is broken.
    void validate() const;

    /// Rebuilds eta from a camshaft diameter using d_cs = 2(e - r).
    static TransmissionSpec from_design(double pitch, double camshaft_diameter,
                                        double roller_radius, double contact_width,
                                        int cams, int lobes = 1);
};

struct Point2 {
    double u = 0.0;
    double v = 0.0;
};

struct ProfileCoefficients {
    double b1 = 0.0;
    double b2 = 0.0;
    double delta_angle = 0.0;
};

double follower_displacement(double psi, double pitch);

ProfileCoefficients profile_coefficients(double psi, double pitch, double eta);

/// Contact point C in the cam frame.
Point2 cam_profile_point(double psi, const TransmissionSpec& spec);

/// Roller centre O2 in the cam frame.
Point2 pitch_curve_point(double psi, const TransmissionSpec& spec);

double pitch_curvature(double psi, double pitch, double eta);

/// kappa_c = kappa_p / (1 - r kappa_p). Throws RollerBlocksCam at the pole.
double cam_curvature(double kappa_p, double roller_radius);

/// rho_c = 1/kappa_p - r, evaluated without going through kappa_c so that the
/// pole of the cam curvature maps to rho_c = 0 instead of an exception.
double profile_radius(double psi, const TransmissionSpec& spec);

/// Negative root of v_c nearest zero. Sign scan over [-pi, 0) followed by
/// bisection to 1e-12 rad.
double extended_angle(const TransmissionSpec& spec);

/// Range of cam rotation over which a cam drives its roller. Uses the
/// active segment of the spec's cam count, or of a two-cam set when m < 2.
struct AngleRange {
    double start = 0.0;
    double end = 0.0;
    double length() const { return end - start; }
};
AngleRange driving_range(const TransmissionSpec& spec, double delta);

struct ProfileMinimum {
    double psi = 0.0;
    double rho_c = 0.0;
};

/// Minimum of rho_c over the driving range: grid search refined by golden
/// section.
ProfileMinimum min_profile_radius(const TransmissionSpec& spec);

/// Minimum of kappa_c over the whole closed profile [delta, 2pi - delta].
double min_cam_curvature(const TransmissionSpec& spec);

struct FeasibilityReport {
    bool eta_valid = false;
    bool profile_feasible = false;
    bool fully_convex = false;
    bool blocking = false;
    double delta = 0.0;
    ProfileMinimum minimum;
    std::string message;
};

/// Never throws; infeasibility is reported through the flags and message.
FeasibilityReport feasibility_check(const TransmissionSpec& spec);

struct ProfileSample {
    double psi = 0.0;
    double u_c = 0.0;
    double v_c = 0.0;
    double u_p = 0.0;
    double v_p = 0.0;
    double kappa_p = 0.0;
    double rho_c = 0.0;
};

class CamProfile {
public:
    CamProfile(double delta, std::vector<ProfileSample> samples)
        : delta_(delta), samples_(std::move(samples)) {}

    double delta() const { return delta_; }
    const std::vector<ProfileSample>& samples() const { return samples_; }
    std::size_t resolution() const { return samples_.size(); }

private:
    double delta_;
    std::vector<ProfileSample> samples_;
};

inline constexpr std::size_t kDefaultProfileResolution = 2048;
inline constexpr std::size_t kMinProfileResolution = 16;

/// Uniform sampling of psi over [delta, 2pi - delta], endpoints included.
CamProfile sample_profile(const TransmissionSpec& spec,
                          std::size_t resolution = kDefaultProfileResolution);

}  // namespace slideocam
