#include "upostab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace upostab::dynamics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

Eigen::VectorXd SectionSpec::project(const Eigen::VectorXd& state) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(projection.size()));
    for (size_t i = 0; i < projection.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = state(projection[i]);
    }
    return out;
}

double SectionSpec::residual(const Eigen::VectorXd& state) const {
    return normal.dot(state) - offset;
}

DopriStepper::DopriStepper(const ParameterizedSystem& sys, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& params, double t0,
                           const IntegratorSettings& settings)
    : sys_(&sys), params_(params), settings_(settings), t_(t0), x_(x0) {
    if (sys.kind != SystemKind::continuous) {
        throw Error("DopriStepper: system is not continuous");
    }
    f_ = sys_->rhs(x_, params_);
    if (settings_.initial_step > 0.0) {
        h_ = std::min(settings_.initial_step, settings_.max_step);
    } else {
        // crude first guess from the derivative scale; the controller adapts
        const double scale = settings_.abs_tol + settings_.rel_tol * x_.cwiseAbs().maxCoeff();
        const double rate = std::max(f_.cwiseAbs().maxCoeff(), 1e-8);
        h_ = std::min({settings_.max_step, 0.01 * std::max(scale, 1e-6) / rate + 1e-6, 1e-3});
    }
}

bool DopriStepper::advance(double t_end, Step& step) {
    const double direction = t_end >= t_ ? 1.0 : -1.0;
    if (direction < 0) {
        throw Error("DopriStepper: backward integration is not supported");
    }
    if (t_ >= t_end) {
        return false;
    }
    const Eigen::Index n = x_.size();
    Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y1(n), err(n);
    while (true) {
        if (++steps_ > settings_.max_steps) {
            throw StepFailure("integration exceeded the step budget", t_);
        }
        double h = std::min(h_, settings_.max_step);
        if (t_ + h > t_end) {
            h = t_end - t_;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t_))) {
            throw StepFailure("step size underflow", t_);
        }
        const Eigen::VectorXd& k1 = f_;
        k2 = sys_->rhs(x_ + h * (a21 * k1), params_);
        k3 = sys_->rhs(x_ + h * (a31 * k1 + a32 * k2), params_);
        k4 = sys_->rhs(x_ + h * (a41 * k1 + a42 * k2 + a43 * k3), params_);
        k5 = sys_->rhs(x_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), params_);
        k6 = sys_->rhs(x_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), params_);
        y1 = x_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = sys_->rhs(y1, params_);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc =
                settings_.abs_tol +
                settings_.rel_tol * std::max(std::abs(x_(i)), std::abs(y1(i)));
            const double r = err(i) / sc;
            err_norm += r * r;
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));

        if (!y1.allFinite() || !std::isfinite(err_norm)) {
            h_ = 0.5 * h;
            continue;
        }
        if (err_norm <= 1.0) {
            const double grow = err_norm == 0.0
                                    ? 10.0
                                    : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 10.0);
            step.t0 = t_;
            step.t1 = t_ + h;
            step.x0 = x_;
            step.x1 = y1;
            step.f0 = f_;
            step.f1 = k7;
            t_ += h;
            x_ = y1;
            f_ = k7;
            h_ = std::min(grow * h, settings_.max_step);
            if (sys_->domain_ok && !sys_->domain_ok(x_)) {
                throw StepFailure("trajectory left the valid domain", t_);
            }
            return true;
        }
        h_ = std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) * h;
    }
}

Eigen::VectorXd DopriStepper::hermite(const Step& step, double theta) {
    const double h = step.t1 - step.t0;
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * step.x0 + (h10 * h) * step.f0 + h01 * step.x1 + (h11 * h) * step.f1;
}

Trajectory integrate(const ParameterizedSystem& sys, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& params, double t0, double t1,
                     const IntegratorSettings& settings) {
    if (t1 <= t0) {
        throw Error("integrate: need t1 > t0");
    }
    DopriStepper stepper(sys, x0, params, t0, settings);
    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(x0);
    DopriStepper::Step step;
    while (stepper.advance(t1, step)) {
        traj.times.push_back(step.t1);
        traj.states.push_back(step.x1);
    }
    return traj;
}

namespace {

bool direction_matches(double g0, double g1, CrossingDirection dir) {
    switch (dir) {
        case CrossingDirection::positive: return g0 < 0.0 && g1 > 0.0;
        case CrossingDirection::negative: return g0 > 0.0 && g1 < 0.0;
        case CrossingDirection::both: return g0 * g1 < 0.0;
    }
    return false;
}

Crossing refine_crossing(const DopriStepper::Step& step, const SectionSpec& section) {
    double lo = 0.0, hi = 1.0;
    double g_lo = section.residual(step.x0);
    Eigen::VectorXd x_mid;
    double mid = 0.5;
    for (int it = 0; it < 60; ++it) {
        mid = 0.5 * (lo + hi);
        x_mid = DopriStepper::hermite(step, mid);
        const double g_mid = section.residual(x_mid);
        if (std::abs(g_mid) <= 1e-12) {
            break;
        }
        if ((g_lo < 0.0) == (g_mid < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Crossing c;
    c.time = step.t0 + mid * (step.t1 - step.t0);
    c.state = x_mid;
    return c;
}

}  // namespace

std::vector<Crossing> find_crossings(const ParameterizedSystem& sys, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& params, double t0, double t1,
                                     const IntegratorSettings& settings, const SectionSpec& section,
                                     bool include_initial) {
    if (section.kind != SectionSpec::Kind::hyperplane) {
        throw Error("find_crossings: section must be a hyperplane");
    }
    std::vector<Crossing> out;
    if (include_initial && std::abs(section.residual(x0)) <= 1e-9) {
        const double gdot = section.normal.dot(sys.rhs(x0, params));
        const bool ok = section.direction == CrossingDirection::both ||
                        (section.direction == CrossingDirection::positive && gdot > 0.0) ||
                        (section.direction == CrossingDirection::negative && gdot < 0.0);
        if (ok) {
            out.push_back({t0, x0});
        }
    }
    DopriStepper stepper(sys, x0, params, t0, settings);
    DopriStepper::Step step;
    while (stepper.advance(t1, step)) {
        const double g0 = section.residual(step.x0);
        const double g1 = section.residual(step.x1);
        if (g0 * g1 < 0.0 && direction_matches(g0, g1, section.direction)) {
            out.push_back(refine_crossing(step, section));
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> sample_stroboscopic(const ParameterizedSystem& sys,
                                                 const Eigen::VectorXd& x0,
                                                 const Eigen::VectorXd& params, double T,
                                                 long n_samples,
                                                 const IntegratorSettings& settings) {
    if (T <= 0.0) {
        throw Error("sample_stroboscopic: need T > 0");
    }
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<size_t>(std::max<long>(n_samples, 0)));
    if (n_samples <= 0) {
        return out;
    }
    out.push_back(x0);
    DopriStepper stepper(sys, x0, params, 0.0, settings);
    DopriStepper::Step step;
    for (long n = 1; n < n_samples; ++n) {
        const double t_target = static_cast<double>(n) * T;
        while (stepper.advance(t_target, step)) {
        }
        out.push_back(stepper.state());
    }
    return out;
}

long SectionDataset::total_points() const {
    long n = 0;
    for (const auto& g : groups) {
        n += static_cast<long>(g.iterates.size());
    }
    return n;
}

long SectionDataset::total_pairs() const {
    long n = 0;
    for (const auto& g : groups) {
        if (g.iterates.size() > 1) {
            n += static_cast<long>(g.iterates.size()) - 1;
        }
    }
    return n;
}

std::string SectionDataset::to_csv() const {
    std::string out;
    for (int i = 0; i < param_dim; ++i) {
        out += "param_" + std::to_string(i + 1) + ",";
    }
    out += "traj_id,iterate_idx";
    for (int i = 0; i < point_dim; ++i) {
        out += ",s_" + std::to_string(i + 1);
    }
    out += "\n";
    for (const auto& g : groups) {
        for (size_t idx = 0; idx < g.iterates.size(); ++idx) {
            for (int i = 0; i < param_dim; ++i) {
                append_double(out, g.param(i));
                out += ",";
            }
            out += std::to_string(g.traj_id) + "," + std::to_string(idx);
            for (int i = 0; i < point_dim; ++i) {
                out += ",";
                append_double(out, g.iterates[idx](i));
            }
            out += "\n";
        }
    }
    return out;
}

SectionDataset SectionDataset::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("dataset CSV: empty input");
    }
    int param_dim = 0, point_dim = 0;
    {
        std::istringstream header(line);
        std::string field;
        while (std::getline(header, field, ',')) {
            if (field.rfind("param_", 0) == 0) {
                ++param_dim;
            } else if (field.rfind("s_", 0) == 0) {
                ++point_dim;
            }
        }
    }
    SectionDataset data;
    data.param_dim = param_dim;
    data.point_dim = point_dim;
    int current_traj = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string field;
        Eigen::VectorXd param(param_dim);
        for (int i = 0; i < param_dim; ++i) {
            if (!std::getline(row, field, ',')) throw ParseError("dataset CSV: short row");
            param(i) = std::stod(field);
        }
        if (!std::getline(row, field, ',')) throw ParseError("dataset CSV: short row");
        const int traj_id = std::stoi(field);
        if (!std::getline(row, field, ',')) throw ParseError("dataset CSV: short row");
        Eigen::VectorXd point(point_dim);
        for (int i = 0; i < point_dim; ++i) {
            if (!std::getline(row, field, ',')) throw ParseError("dataset CSV: short row");
            point(i) = std::stod(field);
        }
        if (traj_id != current_traj) {
            TrajectoryGroup g;
            g.param = param;
            g.traj_id = traj_id;
            data.groups.push_back(std::move(g));
            current_traj = traj_id;
        }
        data.groups.back().iterates.push_back(std::move(point));
    }
    return data;
}

namespace {

std::vector<Eigen::VectorXd> harvest_one(const ParameterizedSystem& sys,
                                         const SectionSpec& section, const Eigen::VectorXd& param,
                                         const Eigen::VectorXd& seed,
                                         const HarvestOptions& options) {
    std::vector<Eigen::VectorXd> iterates;
    if (sys.kind == SystemKind::discrete) {
        Eigen::VectorXd x = seed;
        for (long n = 0; n < options.discrete_iterates; ++n) {
            if (n >= options.discard) {
                iterates.push_back(section.project(x));
            }
            x = sys.rhs(x, param);
            if (!x.allFinite()) {
                throw StepFailure("discrete iteration diverged", static_cast<double>(n));
            }
        }
        return iterates;
    }
    if (section.kind == SectionSpec::Kind::stroboscopic) {
        auto samples = sample_stroboscopic(sys, seed, param, section.period,
                                           options.strobe_samples + options.discard,
                                           options.integrator);
        for (size_t i = static_cast<size_t>(options.discard); i < samples.size(); ++i) {
            iterates.push_back(section.project(samples[i]));
        }
        return iterates;
    }
    auto crossings = find_crossings(sys, seed, param, 0.0, options.horizon, options.integrator,
                                    section, options.include_initial);
    for (size_t i = static_cast<size_t>(options.discard); i < crossings.size(); ++i) {
        iterates.push_back(section.project(crossings[i].state));
    }
    return iterates;
}

}  // namespace

SectionDataset harvest(const ParameterizedSystem& sys, const SectionSpec& section,
                       const std::vector<Eigen::VectorXd>& sweep,
                       const std::vector<std::vector<Eigen::VectorXd>>& seeds,
                       const HarvestOptions& options) {
    if (sweep.empty()) {
        throw Error("harvest: empty parameter sweep");
    }
    if (seeds.empty() || (seeds.size() != 1 && seeds.size() != sweep.size())) {
        throw Error("harvest: seeds must have one entry per sweep value (or a single shared entry)");
    }
    struct Task {
        size_t param_idx;
        size_t seed_idx;
        int traj_id;
    };
    std::vector<Task> tasks;
    for (size_t p = 0; p < sweep.size(); ++p) {
        const auto& seed_list = seeds.size() == 1 ? seeds[0] : seeds[p];
        for (size_t s = 0; s < seed_list.size(); ++s) {
            tasks.push_back({p, s, static_cast<int>(tasks.size())});
        }
    }

    std::vector<std::vector<Eigen::VectorXd>> results(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());
    unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                     : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));

    auto run_task = [&](size_t i) {
        const Task& task = tasks[i];
        const auto& seed_list = seeds.size() == 1 ? seeds[0] : seeds[task.param_idx];
        try {
            results[i] =
                harvest_one(sys, section, sweep[task.param_idx], seed_list[task.seed_idx], options);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    if (jobs <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) {
            run_task(i);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                    run_task(i);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    SectionDataset data;
    data.param_dim = sys.param_dim;
    data.point_dim = static_cast<int>(section.projection.size());
    data.metadata.system = sys.name;
    data.metadata.integrator = options.integrator;
    data.metadata.discard = options.discard;
    data.metadata.horizon = options.horizon;

    std::vector<long> pairs_per_param(sweep.size(), 0);
    for (size_t i = 0; i < tasks.size(); ++i) {
        TrajectoryGroup g;
        g.param = sweep[tasks[i].param_idx];
        g.traj_id = tasks[i].traj_id;
        g.iterates = std::move(results[i]);
        if (g.iterates.size() > 1) {
            pairs_per_param[tasks[i].param_idx] +=
                static_cast<long>(g.iterates.size()) - 1;
        }
        data.groups.push_back(std::move(g));
    }
    for (size_t p = 0; p < sweep.size(); ++p) {
        if (pairs_per_param[p] == 0) {
            std::ostringstream msg;
            msg << "harvest: parameter entry " << p
                << " produced fewer than two section crossings; widen the horizon";
            throw EmptyGroup(msg.str());
        }
    }
    return data;
}

}  // namespace upostab::dynamics
