// Batch front-end: loads a JSON experiment description, runs a gradient
// check or a flow, writes the trajectory as CSV and prints a one-line
// summary. Exit codes: 0 success, 1 malformed config, 2 numerical
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "statbundle/bayes_gan.hpp"
#include "statbundle/flows.hpp"
#include "statbundle/gradients.hpp"
#include "statbundle/oracles.hpp"
#include "statbundle/product_space.hpp"
#include "statbundle/random.hpp"
#include "statbundle/simplex_core.hpp"
#include "statbundle/variational_bayes.hpp"

namespace {

using json = nlohmann::json;
using namespace statbundle;

const json& require_key(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key: ") + key);
    return j.at(key);
}

double require_number(const json& j, const char* key) {
    const json& v = require_key(j, key);
    if (!v.is_number()) throw ConfigError(std::string("key is not a number: ") + key);
    return v.get<double>();
}

std::size_t require_dim(const json& j, const char* key) {
    const double v = require_number(j, key);
    if (v < 2 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw ConfigError(std::string("dimension must be an integer >= 2: ") + key);
    return static_cast<std::size_t>(v);
}

std::vector<double> require_array(const json& j, const char* key, std::size_t n) {
    const json& v = require_key(j, key);
    if (!v.is_array() || v.size() != n)
        throw ConfigError(std::string("expected an array of length ") + std::to_string(n) +
                          ": " + key);
    std::vector<double> out;
    out.reserve(n);
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(std::string("array entry is not a number: ") + key);
        out.push_back(x.get<double>());
    }
    return out;
}

// Distribution fields must be strictly positive and normalized within
// 1e-9; construction failures are config errors, not numerical ones.
Prob prob_from_values(const char* key, const SampleSpace& space, std::vector<double> values) {
    try {
        return Prob(space, std::move(values));
    } catch (const statbundle::Error& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

Prob require_prob(const json& j, const char* key, const SampleSpace& space) {
    return prob_from_values(key, space, require_array(j, key, space.size()));
}

JointProb require_joint(const json& j, const char* key, const SampleSpace& s1,
                        const SampleSpace& s2) {
    try {
        return JointProb(s1, s2, require_array(j, key, s1.size() * s2.size()));
    } catch (const ConfigError&) {
        throw;
    } catch (const statbundle::Error& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

struct IntegratorSpec {
    Scheme scheme;
    double dt;
    int steps;
};

IntegratorSpec parse_integrator(const json& config) {
    const json& j = require_key(config, "integrator");
    const json& scheme = require_key(j, "scheme");
    IntegratorSpec spec{};
    if (scheme == "exp-euler") {
        spec.scheme = Scheme::ExpEuler;
    } else if (scheme == "rk4") {
        spec.scheme = Scheme::Rk4;
    } else {
        throw ConfigError("integrator.scheme must be \"exp-euler\" or \"rk4\"");
    }
    spec.dt = require_number(j, "dt");
    const double steps = require_number(j, "steps");
    if (!(spec.dt > 0.0)) throw ConfigError("integrator.dt must be positive");
    if (steps < 1 || steps != static_cast<double>(static_cast<int>(steps)))
        throw ConfigError("integrator.steps must be an integer >= 1");
    spec.steps = static_cast<int>(steps);
    return spec;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

std::string output_path(const json& config, const std::string& override_path) {
    if (!override_path.empty()) return override_path;
    const json& out = require_key(config, "output");
    if (!out.is_string()) throw ConfigError("key is not a string: output");
    return out.get<std::string>();
}

void format_double(std::string& line, double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    line += buf;
}

void write_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path);
    const std::size_t m = traj.states.front().size();
    std::string line = "step,t,objective,grad_norm";
    for (std::size_t i = 0; i < m; ++i) line += ",state_" + std::to_string(i);
    line += "\n";
    out << line;
    for (std::size_t row = 0; row < traj.states.size(); ++row) {
        line = std::to_string(row);
        line += ',';
        format_double(line, traj.times[row]);
        line += ',';
        format_double(line, traj.diagnostics[row].objective);
        line += ',';
        format_double(line, traj.diagnostics[row].grad_norm);
        for (double s : traj.states[row]) {
            line += ',';
            format_double(line, s);
        }
        line += "\n";
        out << line;
    }
}

Trajectory single_row(const Prob& q0, double objective) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(q0.weights());
    traj.diagnostics.push_back({objective, 0.0});
    return traj;
}

void print_summary(const std::string& tag, double objective, double grad_norm,
                   const std::string& extra = "") {
    std::string line = tag + ": final objective=";
    format_double(line, objective);
    line += " final grad_norm=";
    format_double(line, grad_norm);
    if (!extra.empty()) line += " " + extra;
    std::cout << line << "\n";
}

int run_flow(const json& config, const std::string& out_override) {
    const json& prob = require_key(config, "problem");
    if (require_key(prob, "type") != "klflow") throw ConfigError("problem.type must be klflow");
    const std::size_t n = require_dim(prob, "n");
    const SampleSpace space(n);
    const Prob target = require_prob(prob, "target", space);
    const Prob q0 = require_prob(prob, "q0", space);
    const json& direction = require_key(prob, "direction");
    const bool fwd = direction == "fwd";
    if (!fwd && direction != "rev") throw ConfigError("direction must be \"fwd\" or \"rev\"");
    const IntegratorSpec spec = parse_integrator(config);
    const std::string out = output_path(config, out_override);

    // fwd descends KL(q||target) in the first slot, rev KL(target||r) in
    // the second.
    const VectorField field =
        fwd ? VectorField([&](const Prob& q) { return -grad_kl_total(q, target).first; })
            : VectorField([&](const Prob& r) { return -grad_kl_total(target, r).second; });
    const std::function<double(const Prob&)> objective =
        fwd ? std::function<double(const Prob&)>([&](const Prob& q) { return kl(q, target); })
            : std::function<double(const Prob&)>([&](const Prob& r) { return kl(target, r); });

    const Trajectory traj =
        fiber_norm(field(q0)) == 0.0
            ? single_row(q0, objective(q0))
            : integrate(q0, field, {spec.dt, spec.steps, spec.scheme, objective});
    write_csv(out, traj);
    print_summary("flow", traj.diagnostics.back().objective, traj.diagnostics.back().grad_norm);
    return 0;
}

int run_meanfield(const json& config, const std::string& out_override) {
    const json& prob = require_key(config, "problem");
    if (require_key(prob, "type") != "meanfield")
        throw ConfigError("problem.type must be meanfield");
    const SampleSpace s1(require_dim(prob, "n1"));
    const SampleSpace s2(require_dim(prob, "n2"));
    const JointProb joint = require_joint(prob, "joint", s1, s2);
    const bool fwd = prob.contains("direction") && prob.at("direction") == "fwd";
    const IntegratorSpec spec = parse_integrator(config);
    const std::string out = output_path(config, out_override);

    const VectorField field = [&](const Prob& flat) {
        const JointProb j = joint_from_weights(s1, s2, flat.weights());
        return fwd ? -grad_kl_meanfield_fwd(j) : -grad_kl_meanfield_rev(j);
    };
    const std::function<double(const Prob&)> objective = [&](const Prob& flat) {
        const JointProb j = joint_from_weights(s1, s2, flat.weights());
        return fwd ? kl(mean_field(j).as_prob(), j.as_prob())
                   : kl(j.as_prob(), mean_field(j).as_prob());
    };

    const Prob q0 = joint.as_prob();
    const Trajectory traj =
        fiber_norm(field(q0)) == 0.0
            ? single_row(q0, objective(q0))
            : integrate(q0, field, {spec.dt, spec.steps, spec.scheme, objective});
    write_csv(out, traj);
    print_summary("meanfield", traj.diagnostics.back().objective,
                  traj.diagnostics.back().grad_norm);
    return 0;
}

int run_schrodinger(const json& config, const std::string& out_override) {
    const json& prob = require_key(config, "problem");
    if (require_key(prob, "type") != "schrodinger")
        throw ConfigError("problem.type must be schrodinger");
    const SampleSpace s1(require_dim(prob, "n1"));
    const SampleSpace s2(require_dim(prob, "n2"));
    const double epsilon = require_number(prob, "epsilon");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    const std::vector<double> cost_values = require_array(prob, "cost", s1.size() * s2.size());
    const json& margins = require_key(prob, "margins");
    if (!margins.is_array() || margins.size() != 2)
        throw ConfigError("margins must be an array of two distributions");
    auto margin_values = [&](std::size_t slot, std::size_t len) {
        const json& m = margins.at(slot);
        if (!m.is_array() || m.size() != len)
            throw ConfigError("margins[" + std::to_string(slot) + "] must have length " +
                              std::to_string(len));
        std::vector<double> v;
        for (const auto& x : m) {
            if (!x.is_number()) throw ConfigError("margin entry is not a number");
            v.push_back(x.get<double>());
        }
        return v;
    };
    const Prob m1 = prob_from_values("margins[0]", s1, margin_values(0, s1.size()));
    const Prob m2 = prob_from_values("margins[1]", s2, margin_values(1, s2.size()));
    const IntegratorSpec spec = parse_integrator(config);
    const std::string out = output_path(config, out_override);

    const Rv cost(product_space(s1, s2), cost_values);
    const SchrodingerProblem sp(cost, epsilon, m1, m2);
    const Trajectory traj = constrained_schrodinger_flow(sp, outer(m1, m2), spec.dt, spec.steps);
    write_csv(out, traj);

    const auto sink = oracles::sinkhorn_oracle(cost, epsilon, m1, m2, 1e-10);
    double tv = 0.0;
    for (std::size_t i = 0; i < traj.states.back().size(); ++i) {
        tv += std::fabs(traj.states.back()[i] - sink.plan.as_prob()[i]);
    }
    std::string extra = "tv_vs_sinkhorn=";
    format_double(extra, 0.5 * tv);
    print_summary("schrodinger", traj.diagnostics.back().objective,
                  traj.diagnostics.back().grad_norm, extra);
    return 0;
}

int run_vb(const json& config, const std::string& out_override) {
    const json& prob = require_key(config, "problem");
    if (require_key(prob, "type") != "vb") throw ConfigError("problem.type must be vb");
    const SampleSpace s1(require_dim(prob, "n1"));
    const SampleSpace s2(require_dim(prob, "n2"));
    const JointProb joint = require_joint(prob, "joint", s1, s2);
    const double xv = require_number(prob, "x");
    if (xv < 0 || xv >= static_cast<double>(s1.size()) ||
        xv != static_cast<double>(static_cast<std::size_t>(xv)))
        throw ConfigError("x must be an observation index in [0, n1)");
    const std::size_t x = static_cast<std::size_t>(xv);
    const double dv = require_number(prob, "suffstat_dim");
    if (dv < 1 || dv > static_cast<double>(s2.size() - 1) ||
        dv != static_cast<double>(static_cast<std::size_t>(dv)))
        throw ConfigError("suffstat_dim must be an integer in [1, n2-1]");
    const std::size_t d = static_cast<std::size_t>(dv);
    const IntegratorSpec spec = parse_integrator(config);
    const std::string out = output_path(config, out_override);

    const VBProblem vb(joint, x);
    const Prob base = joint.margin2();
    const std::vector<Rv> u = orthonormal_suffstats(base, d);
    const ExpModel m0(base, u, std::vector<double>(d, 0.0));
    const Trajectory traj = vb_flow(vb, m0, spec.dt, spec.steps);
    write_csv(out, traj);

    std::string extra;
    if (d == s2.size() - 1) {
        const Prob posterior = decompose(joint, 1).row(x);
        const std::vector<double> theta_bar = fit_theta(base, u, posterior);
        double gap = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            gap = std::max(gap, std::fabs(traj.states.back()[i] - theta_bar[i]));
        }
        extra = "theta_gap=";
        format_double(extra, gap);
    }
    print_summary("vb", traj.diagnostics.back().objective, traj.diagnostics.back().grad_norm,
                  extra);
    return 0;
}

struct GradcheckInstance {
    Prob state;
    double rel_error;
    double analytic_norm;
};

double rel_sup_error(const Fiber& analytic, const Fiber& fd) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        diff = std::max(diff, std::fabs(analytic[i] - fd[i]));
        scale = std::max(scale, std::fabs(analytic[i]));
    }
    return diff / (1.0 + scale);
}

GradcheckInstance gradcheck_trial(const std::string& which, std::uint64_t seed, std::size_t n,
                                  std::size_t n1, std::size_t n2, double epsilon) {
    SplitMix64 gen(seed);
    if (which == "expect" || which == "kl_total" || which == "cross_entropy_total" ||
        which == "entropy" || which == "js" || which == "phi_mixture_center") {
        const SampleSpace s(n);
        const Prob q = random_prob(s, gen);
        const Prob r = random_prob(s, gen);
        if (which == "expect") {
            const Rv u = random_rv(s, gen);
            const Fiber a = grad_expect(q, u);
            const Fiber fd = fd_natural_grad([&](const Prob& t) { return expect(t, u); }, q);
            return {q, rel_sup_error(a, fd), max_abs(a.values())};
        }
        if (which == "kl_total") {
            const GradPair a = grad_kl_total(q, r);
            const Fiber fd1 = fd_natural_grad([&](const Prob& t) { return kl(t, r); }, q);
            const Fiber fd2 = fd_natural_grad([&](const Prob& t) { return kl(q, t); }, r);
            const double err =
                std::max(rel_sup_error(a.first, fd1), rel_sup_error(a.second, fd2));
            return {q, err, std::max(max_abs(a.first.values()), max_abs(a.second.values()))};
        }
        if (which == "cross_entropy_total") {
            const GradPair a = grad_cross_entropy_total(q, r);
            const Fiber fd1 =
                fd_natural_grad([&](const Prob& t) { return cross_entropy(t, r); }, q);
            const Fiber fd2 =
                fd_natural_grad([&](const Prob& t) { return cross_entropy(q, t); }, r);
            const double err =
                std::max(rel_sup_error(a.first, fd1), rel_sup_error(a.second, fd2));
            return {q, err, std::max(max_abs(a.first.values()), max_abs(a.second.values()))};
        }
        if (which == "entropy") {
            const Fiber a = grad_entropy(q);
            const Fiber fd = fd_natural_grad([](const Prob& t) { return entropy(t); }, q);
            return {q, rel_sup_error(a, fd), max_abs(a.values())};
        }
        if (which == "js") {
            const Fiber a = grad_js(q, r);
            const Fiber fd = fd_natural_grad([&](const Prob& t) { return js(t, r); }, q);
            return {q, rel_sup_error(a, fd), max_abs(a.values())};
        }
        const Prob p = random_prob(s, gen);
        const Fiber a = grad_phi_mixture_center(p, q, r);
        const Fiber fd =
            fd_natural_grad([&](const Prob& t) { return 0.5 * (kl(q, t) + kl(r, t)); }, p);
        return {p, rel_sup_error(a, fd), max_abs(a.values())};
    }

    const SampleSpace s1(n1);
    const SampleSpace s2(n2);
    if (which == "meanfield_fwd" || which == "meanfield_rev") {
        const JointProb r = random_joint(s1, s2, gen);
        const bool fwd = which == "meanfield_fwd";
        const Fiber a = fwd ? grad_kl_meanfield_fwd(r) : grad_kl_meanfield_rev(r);
        const Fiber fd = fd_natural_grad(
            [&](const Prob& flat) {
                const JointProb j = joint_from_weights(s1, s2, flat.weights());
                return fwd ? kl(mean_field(j).as_prob(), j.as_prob())
                           : kl(j.as_prob(), mean_field(j).as_prob());
            },
            r.as_prob());
        return {r.as_prob(), rel_sup_error(a, fd), max_abs(a.values())};
    }
    if (which == "schrodinger") {
        const Prob m1 = random_prob(s1, gen);
        const Prob m2 = random_prob(s2, gen);
        const Rv cost = random_rv(product_space(s1, s2), gen);
        const SchrodingerProblem sp(cost, epsilon, m1, m2);
        const JointProb q = random_joint(s1, s2, gen);
        const Fiber a = schrodinger_grad(sp, q);
        const Fiber fd = fd_natural_grad(
            [&](const Prob& flat) {
                return schrodinger_objective(sp, joint_from_weights(s1, s2, flat.weights()));
            },
            q.as_prob());
        return {q.as_prob(), rel_sup_error(a, fd), max_abs(a.values())};
    }
    if (which == "elbo") {
        const JointProb joint = random_joint(s1, s2, gen);
        const std::size_t x = gen.next_u64() % n1;
        const VBProblem vb(joint, x);
        const Prob r = random_prob(s2, gen);
        const Fiber a = elbo_natural_grad(vb, r);
        const Fiber fd = fd_natural_grad([&](const Prob& t) { return elbo(vb, t); }, r);
        return {r, rel_sup_error(a, fd), max_abs(a.values())};
    }
    throw ConfigError("unknown gradient name: " + which);
}

int run_gradcheck(const json& config, const std::string& out_override) {
    const json& prob = require_key(config, "problem");
    if (require_key(prob, "type") != "gradcheck")
        throw ConfigError("problem.type must be gradcheck");
    const json& which_j = require_key(prob, "which");
    if (!which_j.is_string()) throw ConfigError("key is not a string: which");
    const std::string which = which_j.get<std::string>();
    const double trials_v = require_number(prob, "trials");
    if (trials_v < 1 || trials_v != static_cast<double>(static_cast<int>(trials_v)))
        throw ConfigError("trials must be an integer >= 1");
    const int trials = static_cast<int>(trials_v);

    const bool joint_space = which == "meanfield_fwd" || which == "meanfield_rev" ||
                             which == "schrodinger" || which == "elbo";
    std::size_t n = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    if (joint_space) {
        n1 = require_dim(prob, "n1");
        n2 = require_dim(prob, "n2");
    } else {
        n = require_dim(prob, "n");
    }
    double epsilon = 1.0;
    if (prob.contains("epsilon")) {
        epsilon = require_number(prob, "epsilon");
        if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    }
    const auto master = static_cast<std::uint64_t>(require_number(config, "seed"));
    const std::string out = output_path(config, out_override);

    // Fail fast on an unknown gradient name before the parallel region.
    gradcheck_trial(which, derive_seed(master, 0), n, n1, n2, epsilon);

    // Trials run concurrently; per-trial seeds make the result array
    // independent of the schedule. Exceptions are collected, not thrown
    // across the region.
    std::vector<std::optional<GradcheckInstance>> results(static_cast<std::size_t>(trials));
    std::vector<std::string> failures(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < trials; ++i) {
        const auto slot = static_cast<std::size_t>(i);
        try {
            results[slot] = gradcheck_trial(which, derive_seed(master, static_cast<std::uint64_t>(i)),
                                            n, n1, n2, epsilon);
        } catch (const std::exception& e) {
            failures[slot] = e.what();
        }
    }
    for (const std::string& f : failures) {
        if (!f.empty()) throw Error("gradcheck trial failed: " + f);
    }

    Trajectory traj;
    double max_err = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto& res = *results[static_cast<std::size_t>(i)];
        traj.times.push_back(static_cast<double>(i));
        traj.states.push_back(res.state.weights());
        traj.diagnostics.push_back({res.rel_error, res.analytic_norm});
        max_err = std::max(max_err, res.rel_error);
    }
    write_csv(out, traj);

    std::string line = "gradcheck: which=" + which + " trials=" + std::to_string(trials) +
                       " max_rel_error=";
    format_double(line, max_err);
    std::cout << line << "\n";
    return 0;
}

int dispatch(const std::string& subcommand, const std::string& config_path,
             const std::string& out_override) {
    const json config = load_config(config_path);
    if (subcommand == "gradcheck") return run_gradcheck(config, out_override);
    if (subcommand == "flow") return run_flow(config, out_override);
    if (subcommand == "meanfield") return run_meanfield(config, out_override);
    if (subcommand == "schrodinger") return run_schrodinger(config, out_override);
    return run_vb(config, out_override);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient checks and KL gradient flows on finite simplices"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    for (const char* name : {"gradcheck", "flow", "meanfield", "schrodinger", "vb"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment description (JSON)")->required();
        sub->add_option("--out", out_override, "override the configured output path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), config_path, out_override);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const statbundle::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
