#include "slideocam/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slideocam/error.hpp"

namespace slideocam {

namespace {

TransmissionSpec with_parameter(TransmissionSpec spec, Parameter q, double value) {
    switch (q) {
        case Parameter::RollerRadius: spec.roller_radius = value; break;
        case Parameter::Eta: spec.eta = value; break;
        case Parameter::Pitch: spec.pitch = value; break;
        case Parameter::Width: spec.contact_width = value; break;
    }
    return spec;
}

double perturbed_pressure(const SensitivityInput& in, const TransmissionSpec& spec,
                          const LoadCase& load, double psi) {
    try {
        spec.validate();
        return hertz_pressure_at(psi, spec, load, in.cam, in.roller);
    } catch (const Error& e) {
        throw Error(ErrorKind::PerturbationInfeasible,
                    std::string("perturbed design leaves the feasible set: ") + e.what());
    }
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    double acc = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0;
}

}  // namespace

std::string_view to_string(Parameter q) {
    switch (q) {
        case Parameter::RollerRadius: return "r";
        case Parameter::Eta: return "eta";
        case Parameter::Pitch: return "p";
        case Parameter::Width: return "L";
    }
    return "?";
}

ParameterVector nominal_parameters(const TransmissionSpec& spec) {
    return {spec.roller_radius, spec.eta, spec.pitch, spec.contact_width};
}

ParameterVector pressure_partials(const SensitivityInput& in, double psi, double relative_step) {
    const auto nominal = nominal_parameters(in.spec);
    ParameterVector out{};
    for (const auto q : kParameters) {
        const double q0 = nominal[static_cast<std::size_t>(q)];
        const double h = relative_step * std::abs(q0);
        const double up = perturbed_pressure(in, with_parameter(in.spec, q, q0 + h), in.load, psi);
        const double down =
            perturbed_pressure(in, with_parameter(in.spec, q, q0 - h), in.load, psi);
        out[static_cast<std::size_t>(q)] = (up - down) / (2.0 * h);
    }
    return out;
}

double torque_partial(const SensitivityInput& in, double psi, double relative_step) {
    const double h = relative_step * in.load.torque;
    LoadCase up = in.load;
    LoadCase down = in.load;
    up.torque += h;
    down.torque -= h;
    return (perturbed_pressure(in, in.spec, up, psi) - perturbed_pressure(in, in.spec, down, psi)) /
           (2.0 * h);
}

std::vector<SensitivityPoint> sensitivity_profile(const SensitivityInput& in, std::size_t samples,
                                                  bool include_torque) {
    if (samples < kMinSensitivitySamples) {
        throw Error(ErrorKind::InvalidArgument,
                    "sensitivity profile needs >= " + std::to_string(kMinSensitivitySamples) +
                        " samples");
    }
    const auto segment = active_segment(in.spec, extended_angle(in.spec));
    const auto nominal = nominal_parameters(in.spec);
    const double step = segment.length() / static_cast<double>(samples - 1);
    std::vector<SensitivityPoint> out(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        auto& pt = out[i];
        pt.psi = (i + 1 == samples) ? segment.end : segment.start + step * static_cast<double>(i);
        const auto c = pressure_partials(in, pt.psi);
        for (std::size_t k = 0; k < 4; ++k) pt.normalized[k] = c[k] * nominal[k];
        if (include_torque) pt.torque = torque_partial(in, pt.psi) * in.load.torque;
    }
    return out;
}

std::array<Parameter, 4> rank(const ParameterVector& values) {
    std::array<Parameter, 4> order = kParameters;
    std::stable_sort(order.begin(), order.end(), [&](Parameter a, Parameter b) {
        return std::abs(values[static_cast<std::size_t>(a)]) >
               std::abs(values[static_cast<std::size_t>(b)]);
    });
    return order;
}

double peak_pressure_angle(const TransmissionSpec& spec, double delta) {
    return kPi / static_cast<double>(spec.lobes) - delta;
}

Ranking rank_at_max(const SensitivityInput& in) {
    const double psi = peak_pressure_angle(in.spec, extended_angle(in.spec));
    const auto c = pressure_partials(in, psi);
    const auto nominal = nominal_parameters(in.spec);
    Ranking r;
    for (std::size_t k = 0; k < 4; ++k) r.values[k] = std::abs(c[k] * nominal[k]);
    r.order = rank(r.values);
    return r;
}

Ranking rank_rms(const SensitivityInput& in, std::size_t nodes) {
    if (nodes < kMinRmsNodes || nodes % 2 == 0) {
        throw Error(ErrorKind::InvalidArgument, "Simpson integration needs an odd node count >= " +
                                                    std::to_string(kMinRmsNodes));
    }
    const auto segment = active_segment(in.spec, extended_angle(in.spec));
    const auto nominal = nominal_parameters(in.spec);
    const double h = segment.length() / static_cast<double>(nodes - 1);
    std::array<std::vector<double>, 4> squared;
    for (auto& s : squared) s.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double psi = (i + 1 == nodes) ? segment.end : segment.start + h * static_cast<double>(i);
        const auto c = pressure_partials(in, psi);
        for (std::size_t k = 0; k < 4; ++k) {
            const double v = c[k] * nominal[k];
            squared[k][i] = v * v;
        }
    }
    const double prefactor = static_cast<double>(in.spec.lobes) / kPi;
    Ranking r;
    for (std::size_t k = 0; k < 4; ++k) r.values[k] = std::sqrt(prefactor * simpson(squared[k], h));
    r.order = rank(r.values);
    return r;
}

SensitivityReport analyze_sensitivity(const SensitivityInput& in, std::size_t samples,
                                      bool include_torque, std::size_t rms_nodes) {
    SensitivityReport report;
    report.nominal = nominal_parameters(in.spec);
    report.segment = active_segment(in.spec, extended_angle(in.spec));
    report.pointwise = sensitivity_profile(in, samples, include_torque);
    report.at_max = rank_at_max(in);
    report.rms = rank_rms(in, rms_nodes);
    return report;
}

}  // namespace slideocam
