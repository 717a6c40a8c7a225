#include "upostab/presets.hpp"

#include <cmath>

namespace upostab::dynamics {

namespace {

Eigen::VectorXd vec1(double a) {
    Eigen::VectorXd v(1);
    v << a;
    return v;
}

constexpr double kMassRatio = 0.012;  // moon/earth

// z-acceleration of the planar restricted three-body field on the x-axis;
// root-finds the collinear equilibria.
double collinear_residual(double x) {
    const double r2 = std::abs(x - 1.0);
    const double r1 = std::abs(x);
    return x - kMassRatio * (x - 1.0) / (r2 * r2 * r2) - x / (r1 * r1 * r1);
}

double refine_collinear(double lo, double hi) {
    double g_lo = collinear_residual(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = collinear_residual(mid);
        if (g_mid == 0.0) {
            return mid;
        }
        if ((g_lo < 0.0) == (g_mid < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Eigen::VectorXd equilibrium_state(double x) {
    Eigen::VectorXd v(4);
    v << x, 0.0, 0.0, 0.0;
    return v;
}

Preset make_henon() {
    Preset p;
    p.system.name = "henon";
    p.system.kind = SystemKind::discrete;
    p.system.state_dim = 2;
    p.system.param_dim = 1;
    p.system.default_params = vec1(0.3);
    p.system.rhs = [](const Eigen::VectorXd& x, const Eigen::VectorXd& mu) {
        Eigen::VectorXd out(2);
        out << 1.0 - 1.4 * x(0) * x(0) + x(1), mu(0) * x(0);
        return out;
    };
    p.section.kind = SectionSpec::Kind::hyperplane;  // unused: the map is its own section
    p.section.normal = Eigen::VectorXd::Zero(2);
    p.section.projection = {0, 1};
    p.sweep = {vec1(0.3)};
    p.seeds = {{(Eigen::VectorXd(2) << 0.1, 0.0).finished()}};
    p.harvest.discard = 100;
    p.harvest.discrete_iterates = 2000;
    p.center = vec1(0.3);
    p.degree = 2;
    p.eta = 0.01;
    return p;
}

Preset make_isolated_orbit() {
    Preset p;
    const double omega = 100.0 * M_PI;
    p.system.name = "isolated-orbit";
    p.system.kind = SystemKind::continuous;
    p.system.state_dim = 2;
    p.system.param_dim = 1;
    p.system.default_params = vec1(2.0);
    p.system.rhs = [omega](const Eigen::VectorXd& s, const Eigen::VectorXd& mu) {
        const double x = s(0), y = s(1), m = mu(0);
        const double r2 = x * x + y * y;
        const double radial = (r2 - m * m) * (16.0 - r2);
        Eigen::VectorXd out(2);
        out << -omega * y + x * radial, omega * x + y * radial;
        return out;
    };
    p.section.kind = SectionSpec::Kind::hyperplane;
    p.section.normal = (Eigen::VectorXd(2) << 0.0, 1.0).finished();
    p.section.offset = 0.0;
    p.section.direction = CrossingDirection::positive;  // half-line y = 0, x > 0
    p.section.projection = {0};
    p.sweep = parameter_range(1.0, 0.1, 3.0);
    for (const auto& mu : p.sweep) {
        const double m = mu(0);
        std::vector<Eigen::VectorXd> seeds;
        // an exact-zero seed sits at an equilibrium and never crosses; nudge it
        for (double x0 : {1e-8, m / 2.0, m, (m + 4.0) / 2.0, 4.0}) {
            seeds.push_back((Eigen::VectorXd(2) << x0, 0.0).finished());
        }
        p.seeds.push_back(std::move(seeds));
    }
    p.harvest.horizon = 1.0;
    p.harvest.discard = 0;
    // resolve the fixed return time 2*pi/omega with ~50 steps
    p.harvest.integrator.max_step = (2.0 * M_PI / omega) / 50.0;
    p.center = vec1(2.0);
    p.eta = 0.01;
    return p;
}

Preset make_rossler() {
    Preset p;
    p.system.name = "rossler";
    p.system.kind = SystemKind::continuous;
    p.system.state_dim = 3;
    p.system.param_dim = 1;
    p.system.default_params = vec1(6.0);
    p.system.rhs = [](const Eigen::VectorXd& s, const Eigen::VectorXd& c) {
        Eigen::VectorXd out(3);
        out << -s(1) - s(2), s(0) + 0.1 * s(1), 0.1 + s(2) * (s(0) - c(0));
        return out;
    };
    p.section.kind = SectionSpec::Kind::hyperplane;
    p.section.normal = (Eigen::VectorXd(3) << 1.0, 0.0, 0.0).finished();
    p.section.offset = 0.0;
    p.section.direction = CrossingDirection::positive;  // x = 0 crossed negative-to-positive
    p.section.projection = {1};
    p.sweep = parameter_range(3.0, 0.1, 8.0);
    p.seeds = {{(Eigen::VectorXd(3) << 0.0, -5.0, 0.0).finished()}};
    p.harvest.horizon = 100.0;
    p.harvest.discard = 10;
    p.center = vec1(6.0);
    return p;
}

Preset make_sprott() {
    Preset p;
    p.system.name = "sprott";
    p.system.kind = SystemKind::continuous;
    p.system.state_dim = 3;
    p.system.param_dim = 1;
    p.system.default_params = vec1(2.1);
    p.system.rhs = [](const Eigen::VectorXd& s, const Eigen::VectorXd& mu) {
        Eigen::VectorXd out(3);
        out << s(1), s(2), -s(0) - mu(0) * s(2) + s(1) * s(1);
        return out;
    };
    p.section.kind = SectionSpec::Kind::hyperplane;
    p.section.normal = (Eigen::VectorXd(3) << 0.0, 1.0, 0.0).finished();
    p.section.offset = 0.0;
    p.section.direction = CrossingDirection::negative;  // y = 0 crossed positive-to-negative
    p.section.projection = {0, 2};
    p.sweep = parameter_range(2.08, 0.001, 2.12);
    p.seeds = {{(Eigen::VectorXd(3) << -6.0, 0.0, 2.5).finished()}};
    p.harvest.horizon = 400.0;
    p.harvest.discard = 10;
    p.center = vec1(2.1);
    return p;
}

Preset make_cr3bp() {
    Preset p;
    p.system.name = "cr3bp";
    p.system.kind = SystemKind::continuous;
    p.system.state_dim = 4;
    p.system.param_dim = 0;
    p.system.default_params = Eigen::VectorXd(0);
    p.system.rhs = [](const Eigen::VectorXd& s, const Eigen::VectorXd&) {
        const double x = s(0), y = s(1), z = s(2), w = s(3);
        const double dx = x - 1.0;
        const double r2_3 = std::pow(dx * dx + y * y, 1.5);
        const double r1_3 = std::pow(x * x + y * y, 1.5);
        Eigen::VectorXd out(4);
        out << z, w, 2.0 * w + x - kMassRatio * dx / r2_3 - x / r1_3,
            -2.0 * z + y - kMassRatio * y / r2_3 - y / r1_3;
        return out;
    };
    p.system.domain_ok = [](const Eigen::VectorXd& s) {
        const double x = s(0), y = s(1);
        const double r1 = std::sqrt(x * x + y * y);
        const double r2 = std::sqrt((x - 1.0) * (x - 1.0) + y * y);
        return std::min(r1, r2) > 1e-3;
    };
    p.section.kind = SectionSpec::Kind::stroboscopic;
    p.section.period = 0.5;
    p.section.projection = {0, 1, 2, 3};
    p.harvest.discard = 0;
    p.harvest.strobe_samples = 6;
    p.degree = 1;
    p.lambda = 0.0;
    p.center = Eigen::VectorXd(0);
    p.eta = 0.1;

    p.named_points["L1"] = equilibrium_state(refine_collinear(0.5, 0.99));
    p.named_points["L2"] = equilibrium_state(refine_collinear(1.01, 1.5));
    p.named_points["L3"] = equilibrium_state(refine_collinear(-1.5, -0.5));
    p.named_points["L4"] = (Eigen::VectorXd(4) << 0.48814, 0.86603, 0.0, 0.0).finished();
    p.named_points["L5"] = (Eigen::VectorXd(4) << 0.48814, -0.86603, 0.0, 0.0).finished();

    // training cloud around L2: the equilibrium itself plus 18 nearby seeds
    p.sweep = {Eigen::VectorXd(0)};
    std::vector<Eigen::VectorXd> seeds;
    const Eigen::VectorXd l2 = p.named_points["L2"];
    seeds.push_back(l2);
    for (int axis = 0; axis < 4; ++axis) {
        for (double delta : {1e-3, -1e-3, 1e-4, -1e-4}) {
            Eigen::VectorXd s = l2;
            s(axis) += delta;
            seeds.push_back(s);
        }
    }
    Eigen::VectorXd diag = l2 + 5e-4 * Eigen::VectorXd::Ones(4);
    seeds.push_back(diag);
    diag = l2 - 5e-4 * Eigen::VectorXd::Ones(4);
    seeds.push_back(diag);
    p.seeds = {std::move(seeds)};
    return p;
}

}  // namespace

std::vector<Eigen::VectorXd> parameter_range(double start, double step, double stop) {
    if (step <= 0.0) {
        throw Error("parameter_range: need step > 0");
    }
    std::vector<Eigen::VectorXd> out;
    const long count = static_cast<long>(std::floor((stop - start) / step + 0.5)) + 1;
    for (long k = 0; k < count; ++k) {
        const double value = start + static_cast<double>(k) * step;
        if (value > stop + 0.5 * step) {
            break;
        }
        out.push_back(vec1(value));
    }
    return out;
}

Preset preset(const std::string& name) {
    if (name == "henon") return make_henon();
    if (name == "isolated-orbit") return make_isolated_orbit();
    if (name == "rossler") return make_rossler();
    if (name == "sprott") return make_sprott();
    if (name == "cr3bp") return make_cr3bp();
    throw UnknownPreset("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"henon", "isolated-orbit", "rossler", "sprott", "cr3bp"};
}

}  // namespace upostab::dynamics
