// Copyright 2026 The breathtrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "breathtrap/cli.hpp"

#include "breathtrap/breathing.hpp"
#include "breathtrap/lattice.hpp"
#include "breathtrap/numerics.hpp"
#include "breathtrap/sweep.hpp"
#include "breathtrap/well_spectral.hpp"
#include "output.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>

#ifndef BREATHTRAP_VERSION
#define BREATHTRAP_VERSION "0.0.0"
#endif

namespace breathtrap::cli {

const char* tool_version() { return BREATHTRAP_VERSION; }

namespace {

using nlohmann::ordered_json;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

struct CommandResult {
    ResolvedArgs parameters;
    std::vector<OutputFile> files;
};

using Handler = std::function<CommandResult()>;

// JSON numbers go through the same finiteness gate as CSV cells.
double checked(double v) {
    format_number(v);
    return v;
}

std::string int_arg(long long v) { return std::to_string(v); }

// ---- shared flag groups ---------------------------------------------------

struct WellFrequency {
    std::optional<double> omega;
    std::optional<double> omega_pi2;
    double epsilon = 0.05;

    void add(CLI::App* app) {
        auto* raw = app->add_option("--omega", omega, "drive frequency (hbar = m = L = 1 units)");
        auto* pi2 = app->add_option("--omega-pi2", omega_pi2, "drive frequency in units of pi^2 (default 25)");
        raw->excludes(pi2);
        app->add_option("--epsilon", epsilon, "breathing amplitude, |epsilon| < 1")->capture_default_str();
    }
    double resolved_omega() const {
        if (omega) return *omega;
        return (omega_pi2 ? *omega_pi2 : 25.0) * kPi2;
    }
};

struct Grid {
    double omega_min = 5.0;
    double omega_max = 50.0;
    int omega_count = 20;
    double epsilon_min = 0.0;
    double epsilon_max = 0.1;
    int epsilon_count = 20;

    void add(CLI::App* app) {
        app->add_option("--omega-min", omega_min)->capture_default_str();
        app->add_option("--omega-max", omega_max)->capture_default_str();
        app->add_option("--omega-count", omega_count)->check(CLI::Range(1, 100000))->capture_default_str();
        app->add_option("--epsilon-min", epsilon_min)->capture_default_str();
        app->add_option("--epsilon-max", epsilon_max)->capture_default_str();
        app->add_option("--epsilon-count", epsilon_count)->check(CLI::Range(1, 100000))->capture_default_str();
    }
    void record(ResolvedArgs& p) const {
        p.emplace_back("omega-min", format_number(omega_min));
        p.emplace_back("omega-max", format_number(omega_max));
        p.emplace_back("omega-count", int_arg(omega_count));
        p.emplace_back("epsilon-min", format_number(epsilon_min));
        p.emplace_back("epsilon-max", format_number(epsilon_max));
        p.emplace_back("epsilon-count", int_arg(epsilon_count));
    }
};

struct LatticeFlags {
    int sites = 161;
    double k = 1.0;
    double g = 1.0;
    double epsilon = 0.1;
    double omega = 1.0;
    int trap_center = 0;
    double gain_coefficient = 1.0;
    int steps = 4096;

    void add(CLI::App* app, bool with_drive = true) {
        app->add_option("--sites", sites, "number of waveguides (odd)")->capture_default_str();
        app->add_option("--k", k, "nearest-neighbour coupling")->capture_default_str();
        app->add_option("--g", g, "breathing strength g")->capture_default_str();
        if (with_drive) {
            app->add_option("--epsilon", epsilon)->capture_default_str();
            app->add_option("--omega", omega)->capture_default_str();
        }
        app->add_option("--trap-center", trap_center, "site label n0 of the trap center")->capture_default_str();
        app->add_option("--gain-coefficient", gain_coefficient,
                        "coefficient of the i alpha'/alpha term (1 as printed, 0.5 from the prefactor)")
            ->capture_default_str();
        app->add_option("--steps-per-period", steps)->capture_default_str();
    }
    lattice::LatticeConfig config() const {
        lattice::LatticeConfig c;
        c.n_sites = sites;
        c.coupling = k;
        c.g = g;
        c.schedule = {epsilon, omega};
        c.trap_center = trap_center;
        c.gain_coefficient = gain_coefficient;
        return c;
    }
    void record(ResolvedArgs& p, bool with_drive = true) const {
        p.emplace_back("sites", int_arg(sites));
        p.emplace_back("k", format_number(k));
        p.emplace_back("g", format_number(g));
        if (with_drive) {
            p.emplace_back("epsilon", format_number(epsilon));
            p.emplace_back("omega", format_number(omega));
        }
        p.emplace_back("trap-center", int_arg(trap_center));
        p.emplace_back("gain-coefficient", format_number(gain_coefficient));
        p.emplace_back("steps-per-period", int_arg(steps));
    }
};

struct InitFlags {
    std::string kind = "gaussian";
    int center = 0;
    double width = 5.0;

    void add(CLI::App* app) {
        app->add_option("--init", kind, "initial beam: gaussian exp(-(n-c)^2/width) or a single site")
            ->check(CLI::IsMember({"gaussian", "site"}))
            ->capture_default_str();
        app->add_option("--init-center", center, "site label c of the input")->capture_default_str();
        app->add_option("--init-width", width)->capture_default_str();
    }
    numerics::ComplexVector build(const lattice::LatticeConfig& cfg) const {
        if (kind == "site") return lattice::site_input(cfg, center);
        return lattice::gaussian_input(cfg, center, width);
    }
    void record(ResolvedArgs& p) const {
        p.emplace_back("init", kind);
        p.emplace_back("init-center", int_arg(center));
        p.emplace_back("init-width", format_number(width));
    }
};

std::vector<std::string> site_header(const lattice::LatticeConfig& cfg, const std::string& first) {
    std::vector<std::string> h{first};
    for (int i = 0; i < cfg.n_sites; ++i) h.push_back(std::to_string(cfg.site(i)));
    return h;
}

std::string map_csv(const numerics::RealMatrix& m, std::span<const double> omegas, std::span<const double> epsilons) {
    CsvWriter csv;
    std::vector<std::string> head{"omega"};
    for (double e : epsilons) head.push_back(format_number(e));
    csv.header(head);
    std::vector<double> row(epsilons.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        for (std::size_t j = 0; j < epsilons.size(); ++j) row[j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        csv.row(format_number(omegas[i]), row);
    }
    return csv.str();
}

// ---- well ------------------------------------------------------------------

void add_well(CLI::App& root, std::map<CLI::App*, Handler>& handlers) {
    auto* well = root.add_subcommand("well", "particle between breathing walls");
    well->require_subcommand(1);

    {
        auto* cmd = well->add_subcommand("floquet", "lowest-variance Floquet state vs effective ground state");
        auto f = std::make_shared<WellFrequency>();
        auto n_modes = std::make_shared<int>(30);
        auto steps = std::make_shared<int>(4096);
        auto samples = std::make_shared<int>(201);
        f->add(cmd);
        cmd->add_option("--n-modes", *n_modes)->check(CLI::Range(1, 4096))->capture_default_str();
        cmd->add_option("--steps-per-period", *steps)->capture_default_str();
        cmd->add_option("--samples", *samples, "profile grid points over the well")
            ->check(CLI::Range(2, 1000000))
            ->capture_default_str();
        handlers[cmd] = [=] {
            const BreathingSchedule s{f->epsilon, f->resolved_omega()};
            s.validate();
            const numerics::IntegratorConfig cfg{*steps};
            cfg.validate();
            const auto basis = well::build_basis(1.0, *n_modes);

            const auto spectrum = well::floquet_spectrum(basis, s, cfg);
            const auto& lowest = spectrum.front();
            const double trap = well::effective_frequency(s);
            const auto eff = well::effective_ground_state(basis, trap);
            const double fid = well::fidelity(lowest.state, eff.state);

            std::size_t best = 0;
            double best_fid = -1.0;
            for (std::size_t i = 0; i < spectrum.size(); ++i) {
                const double fi = well::fidelity(spectrum[i].state, eff.state);
                if (fi > best_fid) best_fid = fi, best = i;
            }

            const auto xs = linspace(-0.5, 0.5, *samples);
            const auto rho_f = well::density_profile(basis, lowest.state, xs);
            const auto rho_e = well::density_profile(basis, eff.state, xs);
            CsvWriter csv;
            const std::vector<std::string> head{"x_sample", "floquet_density", "effective_density"};
            csv.header(head);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double r[] = {xs[i], rho_f(static_cast<Eigen::Index>(i)), rho_e(static_cast<Eigen::Index>(i))};
                csv.row(r);
            }

            ordered_json sum;
            sum["omega"] = checked(s.omega);
            sum["epsilon"] = checked(s.epsilon);
            sum["n_modes"] = *n_modes;
            sum["trap_frequency"] = checked(trap);
            sum["fidelity"] = checked(fid);
            sum["variance_floquet"] = checked(lowest.variance);
            sum["variance_effective"] = checked(well::variance_x(basis, eff.state));
            sum["quasi_energy"] = checked(lowest.quasi_energy);
            sum["effective_energy"] = checked(eff.energy);
            sum["best_match"] = {{"variance_rank", best},
                                 {"fidelity", checked(best_fid)},
                                 {"variance", checked(spectrum[best].variance)},
                                 {"quasi_energy", checked(spectrum[best].quasi_energy)}};

            CommandResult r;
            r.parameters = {{"omega", format_number(s.omega)},
                            {"epsilon", format_number(s.epsilon)},
                            {"n-modes", int_arg(*n_modes)},
                            {"steps-per-period", int_arg(*steps)},
                            {"samples", int_arg(*samples)}};
            r.files = {{"profile.csv", csv.str()}, {"summary.json", dump_json(sum)}};
            return r;
        };
    }

    {
        auto* cmd = well->add_subcommand("variance-map", "minimum Floquet variance over an (omega, epsilon) grid");
        auto grid = std::make_shared<Grid>();
        auto units = std::make_shared<std::string>("pi2");
        auto n_modes = std::make_shared<int>(30);
        auto steps = std::make_shared<int>(4096);
        auto threads = std::make_shared<unsigned>(0);
        grid->add(cmd);
        cmd->add_option("--omega-units", *units, "units of the omega grid flags")
            ->check(CLI::IsMember({"raw", "pi2"}))
            ->capture_default_str();
        cmd->add_option("--n-modes", *n_modes)->check(CLI::Range(1, 4096))->capture_default_str();
        cmd->add_option("--steps-per-period", *steps)->capture_default_str();
        cmd->add_option("--threads", *threads, "worker threads (0 = all cores)")->capture_default_str();
        handlers[cmd] = [=] {
            const double scale = *units == "pi2" ? kPi2 : 1.0;
            const auto omegas = linspace(grid->omega_min * scale, grid->omega_max * scale, grid->omega_count);
            const auto epsilons = linspace(grid->epsilon_min, grid->epsilon_max, grid->epsilon_count);
            // Validate the whole grid before any work.
            for (double w : omegas)
                for (double e : epsilons) BreathingSchedule{e, w}.validate();
            const numerics::IntegratorConfig cfg{*steps};
            cfg.validate();
            const auto basis = well::build_basis(1.0, *n_modes);
            const auto m = well::variance_map(basis, omegas, epsilons, cfg, *threads);

            CommandResult r;
            grid->record(r.parameters);
            r.parameters.emplace_back("omega-units", *units);
            r.parameters.emplace_back("n-modes", int_arg(*n_modes));
            r.parameters.emplace_back("steps-per-period", int_arg(*steps));
            r.parameters.emplace_back("threads", int_arg(*threads));
            r.files = {{"variance_map.csv", map_csv(m, omegas, epsilons)}};
            return r;
        };
    }

    {
        auto* cmd = well->add_subcommand("effective", "ground state of the time-averaged harmonic model");
        auto f = std::make_shared<WellFrequency>();
        auto n_modes = std::make_shared<int>(30);
        auto samples = std::make_shared<int>(201);
        f->add(cmd);
        cmd->add_option("--n-modes", *n_modes)->check(CLI::Range(1, 4096))->capture_default_str();
        cmd->add_option("--samples", *samples)->check(CLI::Range(2, 1000000))->capture_default_str();
        handlers[cmd] = [=] {
            const BreathingSchedule s{f->epsilon, f->resolved_omega()};
            s.validate();
            const auto basis = well::build_basis(1.0, *n_modes);
            const double trap = well::effective_frequency(s);
            const auto eff = well::effective_ground_state(basis, trap);

            const auto xs = linspace(-0.5, 0.5, *samples);
            const auto rho = well::density_profile(basis, eff.state, xs);
            CsvWriter csv;
            const std::vector<std::string> head{"x_sample", "effective_density"};
            csv.header(head);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double row[] = {xs[i], rho(static_cast<Eigen::Index>(i))};
                csv.row(row);
            }

            ordered_json sum;
            sum["omega"] = checked(s.omega);
            sum["epsilon"] = checked(s.epsilon);
            sum["n_modes"] = *n_modes;
            sum["trap_frequency"] = checked(trap);
            sum["energy"] = checked(eff.energy);
            sum["variance"] = checked(well::variance_x(basis, eff.state));
            // Unconfined oscillator reference; meaningful once the trap is narrow.
            if (trap > 0.0) {
                sum["oscillator_energy"] = checked(0.5 * trap);
                sum["oscillator_variance"] = checked(0.5 / trap);
            }

            CommandResult r;
            r.parameters = {{"omega", format_number(s.omega)},
                            {"epsilon", format_number(s.epsilon)},
                            {"n-modes", int_arg(*n_modes)},
                            {"samples", int_arg(*samples)}};
            r.files = {{"profile.csv", csv.str()}, {"summary.json", dump_json(sum)}};
            return r;
        };
    }
}

// ---- lattice -----------------------------------------------------------------

void add_lattice(CLI::App& root, std::map<CLI::App*, Handler>& handlers) {
    auto* lat = root.add_subcommand("lattice", "breathing waveguide lattice");
    lat->require_subcommand(1);

    {
        auto* cmd = lat->add_subcommand("propagate", "beam propagation snapshots");
        auto lf = std::make_shared<LatticeFlags>();
        auto init = std::make_shared<InitFlags>();
        auto z_end = std::make_shared<double>(30.0);
        auto snapshots = std::make_shared<int>(301);
        auto onsite = std::make_shared<double>(0.0);
        lf->add(cmd);
        init->add(cmd);
        cmd->add_option("--z-end", *z_end)->capture_default_str();
        cmd->add_option("--snapshots", *snapshots, "z samples including 0 and z-end")
            ->check(CLI::Range(2, 10000000))
            ->capture_default_str();
        cmd->add_option("--onsite-energy", *onsite, "uniform on-site term e (enters as e/alpha)")->capture_default_str();
        handlers[cmd] = [=] {
            const auto cfg = lf->config();
            cfg.validate();
            const numerics::IntegratorConfig integ{lf->steps};
            integ.validate();
            const auto c0 = init->build(cfg);
            const auto res = lattice::propagate(cfg, c0, *z_end, *z_end / (*snapshots - 1), integ,
                                                lattice::Route::interaction, *onsite);

            CsvWriter snaps;
            snaps.header(site_header(cfg, "z"));
            std::vector<double> row(static_cast<std::size_t>(cfg.n_sites) + 1);
            CsvWriter series;
            const std::vector<std::string> head{"z", "variance", "norm"};
            series.header(head);
            double max_ratio = 0.0;
            const double sigma0 = std::sqrt(res.variance.front());
            for (std::size_t j = 0; j < res.z.size(); ++j) {
                row[0] = res.z[j];
                for (Eigen::Index i = 0; i < cfg.n_sites; ++i) row[static_cast<std::size_t>(i) + 1] = res.snapshots[j](i);
                snaps.row(row);
                const double s[] = {res.z[j], res.variance[j], res.norm[j]};
                series.row(s);
                if (sigma0 > 0.0) max_ratio = std::max(max_ratio, std::sqrt(res.variance[j]) / sigma0);
            }

            ordered_json sum;
            sum["sigma_initial"] = checked(sigma0);
            sum["sigma_final"] = checked(std::sqrt(res.variance.back()));
            if (sigma0 > 0.0) {
                sum["max_sigma_ratio"] = checked(max_ratio);
                sum["final_sigma_ratio"] = checked(std::sqrt(res.variance.back()) / sigma0);
            }
            sum["norm_final"] = checked(res.norm.back());

            CommandResult r;
            lf->record(r.parameters);
            init->record(r.parameters);
            r.parameters.emplace_back("z-end", format_number(*z_end));
            r.parameters.emplace_back("snapshots", int_arg(*snapshots));
            r.parameters.emplace_back("onsite-energy", format_number(*onsite));
            r.files = {{"snapshots.csv", snaps.str()}, {"series.csv", series.str()}, {"summary.json", dump_json(sum)}};
            return r;
        };
    }

    {
        auto* cmd = lat->add_subcommand("floquet", "most localized lattice Floquet states");
        auto lf = std::make_shared<LatticeFlags>();
        auto n_states = std::make_shared<int>(2);
        auto width = std::make_shared<double>(5.0);
        lf->add(cmd);
        cmd->add_option("--states", *n_states, "number of lowest-variance states to emit")
            ->check(CLI::Range(1, 100000))
            ->capture_default_str();
        cmd->add_option("--reference-width", *width, "width of the Gaussian reference exp(-(n-n0)^2/width)")
            ->capture_default_str();
        handlers[cmd] = [=] {
            const auto cfg = lf->config();
            cfg.validate();
            const numerics::IntegratorConfig integ{lf->steps};
            integ.validate();
            const auto states = lattice::lattice_floquet(cfg, integ);
            const auto reference = lattice::gaussian_input(cfg, cfg.trap_center, *width).normalized();
            const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(*n_states), states.size());

            std::vector<std::string> head{"site"};
            for (std::size_t s = 1; s <= count; ++s) {
                head.push_back("re_" + std::to_string(s));
                head.push_back("im_" + std::to_string(s));
                head.push_back("intensity_" + std::to_string(s));
            }
            CsvWriter csv;
            csv.header(head);
            std::vector<double> row;
            for (Eigen::Index i = 0; i < cfg.n_sites; ++i) {
                row.assign(1, static_cast<double>(cfg.site(i)));
                for (std::size_t s = 0; s < count; ++s) {
                    const auto c = states[s].state(i);
                    row.push_back(c.real());
                    row.push_back(c.imag());
                    row.push_back(std::norm(c));
                }
                csv.row(row);
            }

            ordered_json list = ordered_json::array();
            for (std::size_t s = 0; s < count; ++s) {
                const double overlap = std::norm(reference.dot(states[s].state));
                list.push_back({{"rank", s + 1},
                                {"quasi_energy", checked(states[s].quasi_energy)},
                                {"variance", checked(states[s].variance)},
                                {"fidelity_gaussian", checked(std::min(1.0, overlap))}});
            }
            ordered_json sum;
            sum["states"] = list;

            CommandResult r;
            lf->record(r.parameters);
            r.parameters.emplace_back("states", int_arg(*n_states));
            r.parameters.emplace_back("reference-width", format_number(*width));
            r.files = {{"states.csv", csv.str()}, {"summary.json", dump_json(sum)}};
            return r;
        };
    }

    {
        auto* cmd = lat->add_subcommand("variance-map", "lowest Floquet variance over an (omega, epsilon) grid");
        auto lf = std::make_shared<LatticeFlags>();
        auto grid = std::make_shared<Grid>();
        grid->omega_min = 0.5;
        grid->omega_max = 2.0;
        grid->omega_count = 10;
        grid->epsilon_count = 10;
        auto threads = std::make_shared<unsigned>(0);
        lf->add(cmd, false);
        grid->add(cmd);
        cmd->add_option("--threads", *threads, "worker threads (0 = all cores)")->capture_default_str();
        handlers[cmd] = [=] {
            const auto omegas = linspace(grid->omega_min, grid->omega_max, grid->omega_count);
            const auto epsilons = linspace(grid->epsilon_min, grid->epsilon_max, grid->epsilon_count);
            auto cfg = lf->config();
            for (double w : omegas)
                for (double e : epsilons) {
                    cfg.schedule = {e, w};
                    cfg.validate();
                }
            const numerics::IntegratorConfig integ{lf->steps};
            integ.validate();
            const auto m = lattice::lattice_variance_map(cfg, omegas, epsilons, integ, *threads);

            CommandResult r;
            lf->record(r.parameters, false);
            grid->record(r.parameters);
            r.parameters.emplace_back("threads", int_arg(*threads));
            r.files = {{"variance_map.csv", map_csv(m, omegas, epsilons)}};
            return r;
        };
    }

    {
        auto* cmd = lat->add_subcommand("gauge-check", "uniform on-site energy only adds a global phase");
        auto lf = std::make_shared<LatticeFlags>();
        auto init = std::make_shared<InitFlags>();
        auto z_end = std::make_shared<double>(10.0);
        auto onsite = std::make_shared<double>(0.5);
        lf->add(cmd);
        init->add(cmd);
        cmd->add_option("--z-end", *z_end)->capture_default_str();
        cmd->add_option("--onsite-energy", *onsite)->capture_default_str();
        handlers[cmd] = [=] {
            const auto cfg = lf->config();
            cfg.validate();
            const numerics::IntegratorConfig integ{lf->steps};
            integ.validate();
            const auto res = lattice::gauge_check(cfg, *onsite, init->build(cfg), *z_end, integ);

            ordered_json sum;
            sum["onsite_energy"] = checked(*onsite);
            sum["intensity_deviation"] = checked(res.intensity_deviation);
            sum["amplitude_deviation"] = checked(res.amplitude_deviation);

            CommandResult r;
            lf->record(r.parameters);
            init->record(r.parameters);
            r.parameters.emplace_back("z-end", format_number(*z_end));
            r.parameters.emplace_back("onsite-energy", format_number(*onsite));
            r.files = {{"summary.json", dump_json(sum)}};
            return r;
        };
    }
}

std::string command_path(CLI::App* leaf) {
    std::string path;
    for (auto* a = leaf; a != nullptr && a->get_parent() != nullptr; a = a->get_parent())
        path = path.empty() ? a->get_name() : a->get_name() + " " + path;
    return path;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamical trapping by breathing potentials", "breathtrap"};
    app.set_version_flag("--version", tool_version());
    app.set_config("--config", "", "TOML/INI file mirroring the flags");
    app.require_subcommand(1);
    app.fallthrough();

    std::map<CLI::App*, Handler> handlers;
    add_well(app, handlers);
    add_lattice(app, handlers);

    std::string out_dir;
    for (auto& [leaf, _] : handlers)
        leaf->add_option("--out", out_dir, "output directory")->required();

    auto* replay = app.add_subcommand("replay", "re-run a command from its manifest");
    std::string manifest_path;
    std::string replay_out;
    replay->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
    replay->add_option("--out", replay_out, "output directory for the replayed run")->required();

    std::vector<const char*> argv{"breathtrap"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(manifest_path);
            ordered_json j;
            try {
                j = ordered_json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument(std::string("cannot parse manifest: ") + e.what());
            }
            const RunManifest m = RunManifest::from_json(j);
            if (m.command.rfind("replay", 0) == 0) throw std::invalid_argument("manifest cannot name replay");
            auto replay_args = m.replay_args();
            replay_args.push_back("--out");
            replay_args.push_back(replay_out);
            return run(replay_args, out, err);
        }

        for (auto& [leaf, handler] : handlers) {
            if (!leaf->parsed()) continue;
            const auto t0 = std::chrono::steady_clock::now();
            CommandResult result = handler();
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

            RunManifest manifest;
            manifest.command = command_path(leaf);
            manifest.parameters = std::move(result.parameters);
            manifest.wall_clock_seconds = dt.count();
            for (const auto& f : result.files) manifest.outputs.push_back(f.name);
            result.files.push_back({kManifestName, dump_json(manifest.to_json())});
            commit_outputs(out_dir, result.files);
            out << manifest.command << ": wrote " << result.files.size() << " files to " << out_dir << "\n";
            return kExitOk;
        }
        err << "no command selected\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const numerics::NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace breathtrap::cli
