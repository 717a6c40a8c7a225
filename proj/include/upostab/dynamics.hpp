#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "upostab/errors.hpp"

namespace upostab::dynamics {

enum class SystemKind { continuous, discrete };

/// An ODE vector field or a discrete map, with its controllable parameters.
struct ParameterizedSystem {
    std::string name;
    SystemKind kind = SystemKind::continuous;
    int state_dim = 0;
    int param_dim = 0;
    /// state derivative (continuous) or next state (discrete)
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> rhs;
    Eigen::VectorXd default_params;
    /// optional domain guard; integration aborts when it returns false
    std::function<bool(const Eigen::VectorXd&)> domain_ok;
};

enum class CrossingDirection { positive, negative, both };

/// Either a hyperplane <normal, x> = offset crossed in a given direction, or
/// stroboscopic sampling at integer multiples of `period`.
struct SectionSpec {
    enum class Kind { hyperplane, stroboscopic };
    Kind kind = Kind::hyperplane;
    Eigen::VectorXd normal;
    double offset = 0.0;
    CrossingDirection direction = CrossingDirection::positive;
    double period = 0.0;
    std::vector<int> projection;  // state coordinates recorded in the section

    Eigen::VectorXd project(const Eigen::VectorXd& state) const;
    double residual(const Eigen::VectorXd& state) const;  // <normal, x> - offset
};

struct IntegratorSettings {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double max_step = 1e-2;
    double initial_step = 0.0;  // 0 => choose automatically
    long max_steps = 50'000'000;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

struct Crossing {
    double time = 0.0;
    Eigen::VectorXd state;  // full state, refined onto the section
};

/// Adaptive Dormand-Prince 5(4) stepper with FSAL reuse. One instance owns one
/// trajectory; `advance` never steps past the requested end time.
class DopriStepper {
public:
    DopriStepper(const ParameterizedSystem& sys, const Eigen::VectorXd& x0,
                 const Eigen::VectorXd& params, double t0, const IntegratorSettings& settings);

    struct Step {
        double t0 = 0.0, t1 = 0.0;
        Eigen::VectorXd x0, x1;
        Eigen::VectorXd f0, f1;  // derivatives at the endpoints
    };

    /// Take one accepted step, clipped to t_end. Returns false when already there.
    bool advance(double t_end, Step& step);

    double time() const { return t_; }
    const Eigen::VectorXd& state() const { return x_; }

    /// Cubic Hermite interpolant of a step at theta in [0, 1].
    static Eigen::VectorXd hermite(const Step& step, double theta);

private:
    const ParameterizedSystem* sys_;
    Eigen::VectorXd params_;
    IntegratorSettings settings_;
    double t_;
    Eigen::VectorXd x_;
    Eigen::VectorXd f_;  // derivative at (t_, x_)
    double h_;
    long steps_ = 0;
};

Trajectory integrate(const ParameterizedSystem& sys, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& params, double t0, double t1,
                     const IntegratorSettings& settings = {});

/// Hyperplane crossings of one trajectory over [t0, t1], time ordered, each
/// refined by bisection of the in-step Hermite interpolant to |g| <= 1e-12.
/// A seed already on the section (moving in the matching direction) is
/// reported at t0 when include_initial is set.
std::vector<Crossing> find_crossings(const ParameterizedSystem& sys, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& params, double t0, double t1,
                                     const IntegratorSettings& settings, const SectionSpec& section,
                                     bool include_initial = true);

/// States at t = 0, T, 2T, ..., (n_samples - 1) T.
std::vector<Eigen::VectorXd> sample_stroboscopic(const ParameterizedSystem& sys,
                                                 const Eigen::VectorXd& x0,
                                                 const Eigen::VectorXd& params, double T,
                                                 long n_samples,
                                                 const IntegratorSettings& settings = {});

/// Consecutive section iterates of one trajectory at one parameter value.
struct TrajectoryGroup {
    Eigen::VectorXd param;
    int traj_id = 0;
    std::vector<Eigen::VectorXd> iterates;  // projected section points
};

struct DatasetMetadata {
    std::string system;
    IntegratorSettings integrator;
    int discard = 0;
    double horizon = 0.0;
};

struct SectionDataset {
    int param_dim = 0;
    int point_dim = 0;
    std::vector<TrajectoryGroup> groups;
    DatasetMetadata metadata;

    long total_points() const;
    long total_pairs() const;

    /// CSV with header param_1..param_p, traj_id, iterate_idx, s_1..s_k.
    std::string to_csv() const;
    static SectionDataset from_csv(const std::string& text);
};

struct HarvestOptions {
    double horizon = 100.0;        // time span per trajectory (continuous)
    int discard = 10;              // leading crossings dropped per trajectory
    long discrete_iterates = 1000; // iterates per seed for discrete systems
    long strobe_samples = 8;       // samples per seed for stroboscopic sections
    IntegratorSettings integrator;
    int jobs = 0;                  // 0 => hardware concurrency
    bool include_initial = true;
};

/// Integrate every (parameter, seed) pair and collect section iterates,
/// grouped per trajectory in sweep order. `seeds` must have one entry per
/// sweep value, or a single entry shared by all of them.
SectionDataset harvest(const ParameterizedSystem& sys, const SectionSpec& section,
                       const std::vector<Eigen::VectorXd>& sweep,
                       const std::vector<std::vector<Eigen::VectorXd>>& seeds,
                       const HarvestOptions& options);

}  // namespace upostab::dynamics
