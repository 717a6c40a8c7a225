#pragma once

#include <map>
#include <string>
#include <vector>

#include "upostab/dynamics.hpp"

namespace upostab::dynamics {

/// A registered example system with its section, default sweep/seeds and the
/// per-system discovery and control defaults.
struct Preset {
    ParameterizedSystem system;
    SectionSpec section;
    std::vector<Eigen::VectorXd> sweep;
    std::vector<std::vector<Eigen::VectorXd>> seeds;  // aligned with sweep (or size 1)
    HarvestOptions harvest;

    Eigen::VectorXd center;  // focal parameter for discovery
    int degree = 5;
    double lambda = 0.01;

    double eps = 1e-3;  // LMI shift
    double eta = 0.1;   // activation threshold

    std::map<std::string, Eigen::VectorXd> named_points;  // e.g. Lagrange points
};

/// Registered names: henon, isolated-orbit, rossler, sprott, cr3bp.
Preset preset(const std::string& name);
std::vector<std::string> preset_names();

/// Inclusive range start:step:stop as 1-vectors, in sweep order.
std::vector<Eigen::VectorXd> parameter_range(double start, double step, double stop);

}  // namespace upostab::dynamics
