#pragma once

// First-order sensitivity of the Hertz pressure to (r, eta, p, L).

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "slideocam/mechanics.hpp"

namespace slideocam {

enum class Parameter { RollerRadius = 0, Eta = 1, Pitch = 2, Width = 3 };

inline constexpr std::array<Parameter, 4> kParameters = {
    Parameter::RollerRadius, Parameter::Eta, Parameter::Pitch, Parameter::Width};

std::string_view to_string(Parameter q);

using ParameterVector = std::array<double, 4>;

struct SensitivityInput {
    TransmissionSpec spec;
    LoadCase load;
    Material cam;
    Material roller;
};

inline constexpr double kRelativeStep = 1e-6;

/// Nominal values (r, eta, p, L) of a spec.
ParameterVector nominal_parameters(const TransmissionSpec& spec);

/// Central-difference partials of P(psi) w.r.t. (r, eta, p, L), at fixed psi.
/// Throws PerturbationInfeasible if a perturbed spec leaves the feasible set.
ParameterVector pressure_partials(const SensitivityInput& in, double psi,
                                  double relative_step = kRelativeStep);

/// dP/dC_t at fixed geometry.
double torque_partial(const SensitivityInput& in, double psi,
                      double relative_step = kRelativeStep);

struct SensitivityPoint {
    double psi = 0.0;
    ParameterVector normalized{};       // (dP/dq_i) * q_i0, MPa
    std::optional<double> torque;       // (dP/dC_t) * C_t0, MPa
};

inline constexpr std::size_t kMinSensitivitySamples = 64;

/// Normalized partials over the active segment, endpoints included.
std::vector<SensitivityPoint> sensitivity_profile(const SensitivityInput& in, std::size_t samples,
                                                  bool include_torque = false);

struct Ranking {
    ParameterVector values{};
    std::array<Parameter, 4> order{};  // most influential first
};

/// Descending order of |values|; ties keep the (r, eta, p, L) order.
std::array<Parameter, 4> rank(const ParameterVector& values);

/// Angle at which the Hertz pressure of a two-cam set peaks: pi/n - delta.
double peak_pressure_angle(const TransmissionSpec& spec, double delta);

/// |(dP/dq_i) * q_i0| at psi = pi/n - delta.
Ranking rank_at_max(const SensitivityInput& in);

inline constexpr std::size_t kMinRmsNodes = 1025;

/// sqrt((n/pi) * integral over the active segment of ((dP/dq_i) q_i0)^2),
/// composite Simpson with an odd node count >= 1025.
Ranking rank_rms(const SensitivityInput& in, std::size_t nodes = kMinRmsNodes);

struct SensitivityReport {
    ParameterVector nominal{};
    ActiveSegment segment;
    std::vector<SensitivityPoint> pointwise;
    Ranking at_max;
    Ranking rms;
};

SensitivityReport analyze_sensitivity(const SensitivityInput& in, std::size_t samples,
                                      bool include_torque = false,
                                      std::size_t rms_nodes = kMinRmsNodes);

}  // namespace slideocam
