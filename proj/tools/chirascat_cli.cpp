// chirascat command-line driver.
//
// Subcommands, each independently runnable:
//   levels      asymmetric-top level table with thermal weights
//   potential   dispersion-coefficient extraction (C6, anisotropies, chiral part)
//   scatter     coupled-channel cross-section sweep over collision energy
//   highenergy  semiclassical decoherence cross section and Born-series refit
//   master      two-level master-equation rates and Bloch trajectory
//   predict     critical-pressure table and temperature scaling law
//
// Unit conventions at the boundary: energies in kelvin (E/k_B), lengths in
// angstrom on input, cross sections in bohr^2 on output, pressures in mbar,
// frequencies in Hz.  Atomic units internally.
//
// Exit codes: 0 success, 2 configuration error, 3 convergence failure,
// 4 numerical failure.

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <chirascat/chirascat.hpp>

namespace {

using nlohmann::json;
using namespace chirascat;

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitNumerical = 4;
constexpr const char* kToolVersion = "chirascat 1.0.0";

// ---------------------------------------------------------------------------
// Shared plumbing

struct CommonOpts {
    std::string out = "out";
    std::string dataset_path;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    cmd->add_option("--dataset", c.dataset_path,
                    "dataset JSON overriding the built-in reference values")
        ->check(CLI::ExistingFile);
    cmd->add_option("--threads", c.threads, "worker threads for independent energies")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->set_config("--config", "", "configuration file (INI/TOML; keys = long option names)");
}

std::string hash_of_json(const json& j) {
    const std::string dump = j.dump();
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0')
       << fnv1a64(dump);
    return os.str();
}

// Provenance block shared by every output file: tool version, dataset
// fingerprint, and a hash of the effective configuration.  Deliberately no
// timestamps so identical configurations give byte-identical outputs.
json provenance_json(const Dataset& d, const json& cfg) {
    json p;
    p["tool"] = kToolVersion;
    p["dataset_name"] = d.name;
    p["dataset_hash"] = dataset_hash(d);
    p["config_hash"] = hash_of_json(cfg);
    p["config"] = cfg;
    return p;
}

std::vector<std::string> provenance_comments(const Dataset& d, const json& cfg) {
    return {std::string(kToolVersion),
            "dataset " + d.name + " hash=" + dataset_hash(d),
            "config hash=" + hash_of_json(cfg)};
}

Dataset load_common_dataset(const CommonOpts& c) { return load_dataset(c.dataset_path); }

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

std::string out_path(const CommonOpts& c, const std::string& name) {
    std::filesystem::create_directories(c.out);
    return (std::filesystem::path(c.out) / name).string();
}

// ---------------------------------------------------------------------------
// levels

struct LevelsOpts {
    CommonOpts common;
    int j_max = 4;
    double temperature_K = 300.0;
};

int run_levels(const LevelsOpts& o) {
    Dataset d = load_common_dataset(o.common);
    const json cfg{{"command", "levels"}, {"j_max", o.j_max}, {"temperature_K", o.temperature_K}};
    const RotorSpec spec = rotor_spec_from_geometry(d.geometry);
    const auto levels = rotor_levels(spec, o.j_max);
    const auto weights = boltzmann_weights(levels, o.temperature_K);

    CsvFile csv(out_path(o.common, "levels.csv"), provenance_comments(d, cfg),
                {"j", "tau", "parity", "energy_K", "degeneracy", "weight"});
    std::printf("rotational constants (K): A=%.9f B=%.9f C=%.9f\n", spec.A_K, spec.B_K, spec.C_K);
    std::printf("%3s %4s %7s %14s %7s %10s\n", "j", "tau", "parity", "E/kB [K]", "2j+1", "weight");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& l = levels[i];
        csv.row({double(l.j), double(l.tau), double(l.parity), l.energy_K,
                 double(2 * l.j + 1), weights[i]});
        std::printf("%3d %4d %7s %14.6f %7d %10.6f\n", l.j, l.tau,
                    l.parity > 0 ? "+1" : "-1", l.energy_K, 2 * l.j + 1, weights[i]);
    }
    std::printf("wrote %s\n", out_path(o.common, "levels.csv").c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// potential

struct PotentialOpts {
    CommonOpts common;
    int nfreq = 80;
    int ntheta = 12;
    int nphi = 24;
    double rmin_A = 2.2;
    double rmax_A = 8.0;
    int npts = 0;  // 0: skip the radial table
};

int run_potential(const PotentialOpts& o) {
    Dataset d = load_common_dataset(o.common);
    const json cfg{{"command", "potential"}, {"nfreq", o.nfreq},     {"ntheta", o.ntheta},
                   {"nphi", o.nphi},         {"rmin_A", o.rmin_A},   {"rmax_A", o.rmax_A},
                   {"npts", o.npts}};
    PotentialSurface s =
        dispersion_coefficients(d.susceptibilities(), Handedness::L, o.nfreq, o.ntheta, o.nphi);
    s.r_core = d.core_radius;
    const double beta = beta_parameter(s, d.mstar);

    json j;
    j["provenance"] = provenance_json(d, cfg);
    j["C6_au"] = s.C6;
    j["chiral_strength_cbar_au"] = s.cbar;
    j["beta_bohr"] = beta;
    j["core_radius_bohr"] = s.r_core;
    j["quadrature_error_au"] = s.quadrature_error;
    json c2 = json::array(), c3 = json::array();
    for (int mu = -2; mu <= 2; ++mu)
        c2.push_back({{"mu", mu}, {"re", s.c2_mu(mu).real()}, {"im", s.c2_mu(mu).imag()}});
    for (int mu = -3; mu <= 3; ++mu)
        c3.push_back({{"mu", mu}, {"re", s.c3_mu(mu).real()}, {"im", s.c3_mu(mu).imag()}});
    j["anisotropy_c2"] = c2;
    j["chiral_c3"] = c3;
    write_json_file(out_path(o.common, "potential.json"), j);

    if (o.npts > 0) {
        // Radial profile of the orientation-averaged attraction and the rms
        // chiral part, in kelvin, for quick plotting.
        CsvFile csv(out_path(o.common, "potential_radial.csv"), provenance_comments(d, cfg),
                    {"r_angstrom", "v_iso_K", "v_chiral_rms_K"});
        for (int i = 0; i < o.npts; ++i) {
            const double rA =
                o.rmin_A + (o.rmax_A - o.rmin_A) * double(i) / std::max(1, o.npts - 1);
            const double r = rA * units::angstrom;
            csv.row({rA, units::au_to_kelvin(-s.C6 / std::pow(r, 6)),
                     units::au_to_kelvin(-s.cbar / std::pow(r, 7))});
        }
    }
    std::printf("C6 = %.6f a.u.   cbar = %.6f a.u.   beta = %.4f bohr\n", s.C6, s.cbar, beta);
    std::printf("wrote %s\n", out_path(o.common, "potential.json").c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// scatter

struct ScatterOpts {
    CommonOpts common;
    double emin_K = 0.02;
    double emax_K = 2.0;
    int npts = 9;
    bool linear_grid = false;
    std::vector<double> energies_K;  // explicit grid overrides emin/emax
    int j_max = -1;                  // -1: dataset default
    double closed_max_K = -1.0;      // -1: dataset default
    int J_max = 40;
    double tail_rtol = 1e-6;
    double r_start_A = -1.0;  // -1: dataset core radius
    double r_match_A = -1.0;  // -1: 250 bohr
    double step_A = -1.0;     // -1: 0.01 bohr
    std::string mode = "poly";
    bool no_chiral = false;
    bool dump_s = false;
    bool resume = false;
    bool convergence_check = false;
};

json smatrix_block_json(const SMatrixBlock& b) {
    json ch = json::array();
    for (const auto& c : b.open_channels)
        ch.push_back({{"level", c.level_index},
                      {"j", c.j},
                      {"tau", c.tau},
                      {"l", c.l},
                      {"threshold_K", c.threshold_K}});
    const int n = int(b.open_channels.size());
    json re = json::array(), im = json::array();
    for (int i = 0; i < n; ++i) {
        json rrow = json::array(), irow = json::array();
        for (int q = 0; q < n; ++q) {
            rrow.push_back(b.S(i, q).real());
            irow.push_back(b.S(i, q).imag());
        }
        re.push_back(rrow);
        im.push_back(irow);
    }
    return {{"J", b.J},       {"parity", b.parity}, {"channels", ch},
            {"S_re", re},     {"S_im", im}};
}

// Deterministic parallel sweep: energies are assigned to workers by an atomic
// counter, results land in index-ordered slots, and the writer thread flushes
// the longest contiguous prefix, so output order never depends on timing.
struct SweepRunner {
    std::vector<double> energies;
    std::function<EnergySolution(double)> solve;
    std::function<void(std::size_t, const EnergySolution&)> emit;

    void run(int threads) {
        const std::size_t n = energies.size();
        std::vector<std::unique_ptr<EnergySolution>> done(n);
        std::exception_ptr failure;
        std::mutex mu;
        std::condition_variable cv;
        std::atomic<std::size_t> next{0};

        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    auto sol = std::make_unique<EnergySolution>(solve(energies[i]));
                    std::lock_guard<std::mutex> lk(mu);
                    done[i] = std::move(sol);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!failure) failure = std::current_exception();
                }
                cv.notify_all();
            }
        };

        std::vector<std::thread> pool;
        const int nt = std::max(1, std::min<int>(threads, int(n ? n : 1)));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);

        std::size_t emitted = 0;
        {
            std::unique_lock<std::mutex> lk(mu);
            while (emitted < n) {
                cv.wait(lk, [&] { return failure || done[emitted] != nullptr; });
                if (failure) break;
                while (emitted < n && done[emitted]) {
                    emit(emitted, *done[emitted]);
                    done[emitted].reset();
                    ++emitted;
                }
            }
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
};

int run_scatter(const ScatterOpts& o) {
    Dataset d = load_common_dataset(o.common);
    TruncationParams trunc = d.truncation;
    if (o.j_max >= 0) trunc.j_max = o.j_max;
    if (o.closed_max_K >= 0) trunc.closed_max_K = o.closed_max_K;

    SolveSettings s;
    s.trunc = trunc;
    s.J_max = o.J_max;
    s.tail_rtol = o.tail_rtol;
    s.r_start = o.r_start_A > 0 ? o.r_start_A * units::angstrom : d.core_radius;
    s.r_match = o.r_match_A > 0 ? o.r_match_A * units::angstrom : 250.0;
    s.target_h = o.step_A > 0 ? o.step_A * units::angstrom : 0.01;
    if (o.mode == "poly")
        s.mode = PropagatorMode::poly;
    else if (o.mode == "eigh")
        s.mode = PropagatorMode::eigh;
    else
        throw CLI::ValidationError("--mode", "must be 'poly' or 'eigh'");
    if (!(s.r_start > 0 && s.r_match > s.r_start))
        throw CLI::ValidationError("--rmatch", "need 0 < r_start < r_match");

    std::vector<double> energies = o.energies_K;
    if (energies.empty()) {
        if (!(o.emin_K > 0 && o.emax_K >= o.emin_K && o.npts >= 1))
            throw CLI::ValidationError("--emin/--emax/--npts", "need 0 < emin <= emax, npts >= 1");
        for (int i = 0; i < o.npts; ++i) {
            const double f = o.npts == 1 ? 0.0 : double(i) / (o.npts - 1);
            energies.push_back(o.linear_grid
                                   ? o.emin_K + (o.emax_K - o.emin_K) * f
                                   : o.emin_K * std::pow(o.emax_K / o.emin_K, f));
        }
    }
    for (std::size_t i = 1; i < energies.size(); ++i)
        if (!(energies[i] > energies[i - 1]))
            throw CLI::ValidationError("--energies", "energy grid must be strictly increasing");

    const json cfg{{"command", "scatter"},
                   {"energies_K", energies},
                   {"j_max", trunc.j_max},
                   {"closed_max_K", trunc.closed_max_K},
                   {"J_max", s.J_max},
                   {"tail_rtol", s.tail_rtol},
                   {"r_start_bohr", s.r_start},
                   {"r_match_bohr", s.r_match},
                   {"step_bohr", s.target_h},
                   {"mode", o.mode},
                   {"no_chiral", o.no_chiral}};

    PotentialSurface surf = dispersion_coefficients(d.susceptibilities());
    surf.r_core = d.core_radius;
    if (o.no_chiral) surf.c3.fill(0.0);  // V_L = V_R: decoherence must vanish
    const RotorSpec spec = rotor_spec_from_geometry(d.geometry);
    const auto levels = rotor_levels(spec, trunc.j_max);
    const CouplingBuilder builder = coupling_from_surface(surf);

    const std::string csv_path = out_path(o.common, "scatter.csv");
    std::set<double> done_keys;
    if (o.resume) done_keys = csv_first_column(csv_path);
    const bool append = o.resume && !done_keys.empty();

    CsvFile csv(csv_path, provenance_comments(d, cfg),
                {"energy_K", "sigma_tot_a02", "eta_tot_a02", "eps_tot_a02", "sigma_L_a02",
                 "sigma_R_a02", "eta_parity_odd_a02", "J_used", "tail_fraction",
                 "unitarity_max", "symmetry_max"},
                append);

    std::vector<double> todo;
    for (double e : energies) {
        bool skip = false;
        for (double k : done_keys)
            if (std::abs(k - e) <= 1e-12 * std::max(1.0, std::abs(e))) skip = true;
        if (!skip) todo.push_back(e);
    }

    json meta;
    meta["provenance"] = provenance_json(d, cfg);
    meta["skipped_resume"] = int(energies.size() - todo.size());
    json per_energy = json::array();
    bool all_converged = true;

    SweepRunner runner;
    runner.energies = todo;
    runner.solve = [&](double e) { return solve_energy(levels, 0, e, d.mstar, builder, s); };
    runner.emit = [&](std::size_t, const EnergySolution& sol) {
        const auto& t = sol.totals;
        const double sigma_tot = 0.5 * (t.sigma_L + t.sigma_R);
        csv.row({sol.energy_K, sigma_tot, t.eta, t.epsilon, t.sigma_L, t.sigma_R,
                 t.eta_parity_odd, double(sol.J_used), sol.tail_fraction,
                 sol.unitarity_max, sol.symmetry_max});
        per_energy.push_back({{"energy_K", sol.energy_K},
                              {"J_used", sol.J_used},
                              {"tail_converged", sol.tail_converged},
                              {"tail_fraction", sol.tail_fraction},
                              {"unitarity_max", sol.unitarity_max},
                              {"symmetry_max", sol.symmetry_max},
                              {"radial_steps", sol.stats.steps}});
        all_converged = all_converged && sol.tail_converged;
        if (o.dump_s) {
            json dump;
            dump["provenance"] = meta["provenance"];
            dump["energy_K"] = sol.energy_K;
            json bl = json::array(), br = json::array();
            for (const auto& b : sol.blocks_L) bl.push_back(smatrix_block_json(b));
            for (const auto& b : sol.blocks_R) br.push_back(smatrix_block_json(b));
            dump["left"] = bl;
            dump["right"] = br;
            std::ostringstream name;
            name << "smatrix_E" << std::setprecision(12) << sol.energy_K << "K.json";
            write_json_file(out_path(o.common, name.str()), dump);
        }
        std::printf("E = %10.5f K   sigma = %12.4f   eta = %12.6f   J_used = %d%s\n",
                    sol.energy_K, sigma_tot, t.eta, sol.J_used,
                    sol.tail_converged ? "" : "   [J tail NOT converged]");
        std::fflush(stdout);
    };
    runner.run(o.common.threads);

    meta["per_energy"] = per_energy;
    meta["all_converged"] = all_converged;

    if (o.convergence_check && !todo.empty()) {
        // One-point sensitivity check at the highest energy: double the match
        // radius and halve the step, report the relative shifts.
        const double e = todo.back();
        const EnergySolution base = solve_energy(levels, 0, e, d.mstar, builder, s);
        SolveSettings s2 = s;
        s2.r_match = 2.0 * s.r_match;
        const EnergySolution far = solve_energy(levels, 0, e, d.mstar, builder, s2);
        SolveSettings s3 = s;
        s3.target_h = 0.5 * s.target_h;
        const EnergySolution fine = solve_energy(levels, 0, e, d.mstar, builder, s3);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); };
        meta["convergence_check"] = {
            {"energy_K", e},
            {"rmatch_doubling_sigma_rel", rel(far.totals.sigma_L, base.totals.sigma_L)},
            {"rmatch_doubling_eta_rel", rel(far.totals.eta, base.totals.eta)},
            {"step_halving_sigma_rel", rel(fine.totals.sigma_L, base.totals.sigma_L)},
            {"step_halving_eta_rel", rel(fine.totals.eta, base.totals.eta)}};
    }

    write_json_file(out_path(o.common, "scatter_meta.json"), meta);
    std::printf("wrote %s and scatter_meta.json\n", csv_path.c_str());
    if (!all_converged) {
        std::fprintf(stderr,
                     "error: partial-wave tail not converged at one or more energies "
                     "(see scatter_meta.json); raise --Jmax\n");
        return kExitConvergence;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// highenergy

struct HighEnergyOpts {
    CommonOpts common;
    double xmin = 1.0;
    double xmax = 400.0;
    int npts = 60;
    double refit_lo = 40.0;
    double refit_hi = 400.0;
    int refit_npts = 13;
};

int run_highenergy(const HighEnergyOpts& o) {
    Dataset d = load_common_dataset(o.common);
    const json cfg{{"command", "highenergy"}, {"xmin", o.xmin},
                   {"xmax", o.xmax},          {"npts", o.npts},
                   {"refit_lo", o.refit_lo},  {"refit_hi", o.refit_hi},
                   {"refit_npts", o.refit_npts}};
    if (!(o.xmin > 0 && o.xmax > o.xmin && o.npts >= 2))
        throw CLI::ValidationError("--xmin/--xmax", "need 0 < xmin < xmax, npts >= 2");

    PotentialSurface surf = dispersion_coefficients(d.susceptibilities());
    const double beta = beta_parameter(surf, d.mstar);
    const BornRefit fit = refit_born_constants(o.refit_lo, o.refit_hi, o.refit_npts);

    CsvFile csv(out_path(o.common, "highenergy.csv"), provenance_comments(d, cfg),
                {"k_beta", "shape_G", "eta_a02", "eta_twoterm_a02", "eta_leading_a02",
                 "collision_energy_K"});
    for (int i = 0; i < o.npts; ++i) {
        const double x = o.xmin * std::pow(o.xmax / o.xmin, double(i) / (o.npts - 1));
        const double k = x / beta;
        const double ecol = units::au_to_kelvin(k * k / (2.0 * d.mstar));
        csv.row({x, decoherence_shape_G(x), eta_exponential_born(k, beta),
                 eta_born_twoterm(k, beta, fit.c1, fit.c2), eta_born_leading(k, beta, fit.c1),
                 ecol});
    }

    json j;
    j["provenance"] = provenance_json(d, cfg);
    j["beta_bohr"] = beta;
    j["refit"] = {{"c1", fit.c1},
                  {"c2", fit.c2},
                  {"c3", fit.c3},
                  {"max_rel_error", fit.max_rel_resid},
                  {"window_k_beta", json::array({o.refit_lo, o.refit_hi})}};
    write_json_file(out_path(o.common, "highenergy.json"), j);
    std::printf("refit constants: c1 = %.6f, c2 = %.6f (max rel err %.2e)\n", fit.c1, fit.c2,
                fit.max_rel_resid);
    std::printf("wrote %s and highenergy.json\n", out_path(o.common, "highenergy.csv").c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// master

struct MasterOpts {
    CommonOpts common;
    double tunneling_hz = -1.0;  // -1: dataset value
    double gamma_over_omega = 100.0;
    double gamma_per_s = -1.0;  // overrides the ratio when >= 0
    double omega_x_over_omega = 0.0;
    double x0 = 1.0, y0 = 0.0, z0 = 0.0;
    double cycles = 5.0;
    int npts = 400;
};

int run_master(const MasterOpts& o) {
    Dataset d = load_common_dataset(o.common);
    const double nu = o.tunneling_hz > 0 ? o.tunneling_hz : d.tunneling_hz;
    const double omega_z = units::hz_to_au(nu);
    MasterParams p;
    p.omega_z = omega_z;
    p.omega_x = o.omega_x_over_omega * omega_z;
    p.gamma = o.gamma_per_s >= 0 ? o.gamma_per_s / units::rate_au_to_si(1.0)
                                 : o.gamma_over_omega * omega_z;
    const json cfg{{"command", "master"},
                   {"tunneling_hz", nu},
                   {"gamma_over_omega", p.gamma / omega_z},
                   {"omega_x_over_omega", o.omega_x_over_omega},
                   {"initial_bloch", {o.x0, o.y0, o.z0}},
                   {"cycles", o.cycles},
                   {"npts", o.npts}};

    const MasterSpectrum sp = master_spectrum(p);
    json j;
    j["provenance"] = provenance_json(d, cfg);
    j["omega_z_rad_per_s"] = units::rate_au_to_si(p.omega_z);
    j["gamma_per_s"] = units::rate_au_to_si(p.gamma);
    j["rates_per_s"] = {{"slow", units::rate_au_to_si(sp.slow)},
                        {"fast_min", units::rate_au_to_si(sp.fast_min)},
                        {"oscillation_rad_per_s", units::rate_au_to_si(sp.oscillation)}};
    j["slow_over_zeno_scale"] = sp.slow / (p.omega_z * p.omega_z / p.gamma);
    j["slow_closed_form_per_s"] = units::rate_au_to_si(slow_rate_closed_form(p.omega_z, p.gamma));
    json evs = json::array();
    for (const auto& ev : sp.eigenvalues)
        evs.push_back({{"re_per_s", units::rate_au_to_si(ev.real())},
                       {"im_per_s", units::rate_au_to_si(ev.imag())}});
    j["eigenvalues"] = evs;
    write_json_file(out_path(o.common, "master_rates.json"), j);

    // Bloch trajectory (x hosts the left/right superposition imbalance).
    CsvFile csv(out_path(o.common, "master_trajectory.csv"), provenance_comments(d, cfg),
                {"t_s", "x", "y", "z"});
    const double t_end = o.cycles * 2.0 * M_PI / p.omega_z;
    const Eigen::Vector3d r0(o.x0, o.y0, o.z0);
    for (int i = 0; i <= o.npts; ++i) {
        const double t = t_end * double(i) / o.npts;
        const Eigen::Vector3d r = evolve_state(p, r0, t);
        csv.row({t * units::time_au_s, r(0), r(1), r(2)});
    }
    std::printf("slow rate = %.6e s^-1 (omega_z^2/gamma = %.6e), fast >= %.6e s^-1\n",
                units::rate_au_to_si(sp.slow),
                units::rate_au_to_si(p.omega_z * p.omega_z / p.gamma),
                units::rate_au_to_si(sp.fast_min));
    std::printf("wrote master_rates.json and master_trajectory.csv in %s\n", o.common.out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictOpts {
    CommonOpts common;
    double tmin_K = 100.0;
    double tmax_K = 600.0;
    int npts = 13;
    double at_T_K = 300.0;
    double at_p_mbar = 1.6e-5;
    bool full_shape = false;
};

int run_predict(const PredictOpts& o) {
    Dataset d = load_common_dataset(o.common);
    const json cfg{{"command", "predict"},   {"tmin_K", o.tmin_K},
                   {"tmax_K", o.tmax_K},     {"npts", o.npts},
                   {"at_T_K", o.at_T_K},     {"at_p_mbar", o.at_p_mbar},
                   {"full_shape", o.full_shape}};
    if (!(o.tmin_K > 0 && o.tmax_K > o.tmin_K && o.npts >= 2))
        throw CLI::ValidationError("--tmin/--tmax", "need 0 < tmin < tmax, npts >= 2");

    PotentialSurface surf = dispersion_coefficients(d.susceptibilities());
    PredictParams p;
    p.omega_z = d.omega_z_au();
    p.mstar = d.mstar;
    p.m_gas = mass_He_amu * units::amu;
    p.beta = beta_parameter(surf, d.mstar);

    const PressureLawFit law = critical_pressure_law(p, o.tmin_K, o.tmax_K, o.npts, o.full_shape);
    json table = json::array();
    double dev_max = 0.0;
    for (std::size_t i = 0; i < law.T_K.size(); ++i) {
        const double T = law.T_K[i], pc = law.p_mbar[i];
        const double scale_const = pc * std::pow(T, -2.0 / 3.0);
        dev_max = std::max(dev_max, std::abs(scale_const / law.prefactor_mbar - 1.0));
        table.push_back({{"T_K", T},
                         {"pc_mbar", pc},
                         {"scaling_const_mbar", scale_const}});
    }

    // Decoherence rate at a chosen gas condition, compared with the rate that
    // freezes tunneling (one decohering collision per tunneling cycle).
    const double n_density = (o.at_p_mbar / units::pressure_au_mbar) /
                             (units::k_B * o.at_T_K);
    const double vbar_eta = mean_v_eta_leading(o.at_T_K, p);
    const double gamma_at = n_density * vbar_eta;
    const double gamma_c = critical_rate(p.omega_z);

    json j;
    j["provenance"] = provenance_json(d, cfg);
    j["beta_bohr"] = p.beta;
    j["critical_rate_per_s"] = units::rate_au_to_si(gamma_c);
    j["pc_table"] = table;
    j["law"] = {{"exponent", law.exponent},
                {"prefactor_mbar_K", law.prefactor_mbar},
                {"max_flatness_dev", dev_max}};
    j["gamma_at"] = {{"T_K", o.at_T_K},
                     {"p_mbar", o.at_p_mbar},
                     {"gamma_per_s", units::rate_au_to_si(gamma_at)},
                     {"gamma_over_critical", gamma_at / gamma_c}};
    write_json_file(out_path(o.common, "predict.json"), j);

    const double pc300 = critical_pressure_mbar(300.0, p);
    std::printf("p_c(300 K) = %.4e mbar   exponent = %.6f   prefactor = %.4e mbar K^-2/3\n",
                pc300, law.exponent, law.prefactor_mbar);
    std::printf("wrote %s\n", out_path(o.common, "predict.json").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chirascat: collisional decoherence of chiral molecules"};
    app.require_subcommand(1);

    LevelsOpts lo;
    CLI::App* levels = app.add_subcommand("levels", "asymmetric-top level table");
    add_common(levels, lo.common);
    levels->add_option("--jmax", lo.j_max, "rotor basis cutoff")->capture_default_str();
    levels->add_option("--temperature", lo.temperature_K, "thermal weight temperature [K]")
        ->capture_default_str();

    PotentialOpts po;
    CLI::App* pot = app.add_subcommand("potential", "dispersion coefficients");
    add_common(pot, po.common);
    pot->add_option("--nfreq", po.nfreq, "imaginary-frequency quadrature points")
        ->capture_default_str();
    pot->add_option("--ntheta", po.ntheta, "polar quadrature points")->capture_default_str();
    pot->add_option("--nphi", po.nphi, "azimuthal quadrature points")->capture_default_str();
    pot->add_option("--rmin", po.rmin_A, "radial table start [Angstrom]")->capture_default_str();
    pot->add_option("--rmax", po.rmax_A, "radial table end [Angstrom]")->capture_default_str();
    pot->add_option("--npts", po.npts, "radial table points (0 = skip)")->capture_default_str();

    ScatterOpts so;
    CLI::App* sc = app.add_subcommand("scatter", "coupled-channel cross-section sweep");
    add_common(sc, so.common);
    sc->add_option("--emin", so.emin_K, "lowest collision energy [K]")->capture_default_str();
    sc->add_option("--emax", so.emax_K, "highest collision energy [K]")->capture_default_str();
    sc->add_option("--npts", so.npts, "number of energies")->capture_default_str();
    sc->add_flag("--linear", so.linear_grid, "linear instead of geometric energy grid");
    sc->add_option("--energies", so.energies_K, "explicit energy list [K], overrides the grid");
    sc->add_option("--jmax", so.j_max, "rotor basis cutoff (-1: dataset default)")
        ->capture_default_str();
    sc->add_option("--ecw", so.closed_max_K,
                   "closed-channel retention window above E [K] (-1: dataset default)")
        ->capture_default_str();
    sc->add_option("--Jmax", so.J_max, "hard cap on total angular momentum")
        ->capture_default_str();
    sc->add_option("--tail-rtol", so.tail_rtol, "partial-wave tail tolerance (0: run all J)")
        ->capture_default_str();
    sc->add_option("--rstart", so.r_start_A, "inner wall [Angstrom] (-1: dataset core radius)")
        ->capture_default_str();
    sc->add_option("--rmatch", so.r_match_A, "matching radius [Angstrom] (-1: 250 bohr)")
        ->capture_default_str();
    sc->add_option("--step", so.step_A, "radial step [Angstrom] (-1: 0.01 bohr)")
        ->capture_default_str();
    sc->add_option("--mode", so.mode, "log-derivative stepper: poly | eigh")
        ->capture_default_str();
    sc->add_flag("--no-chiral", so.no_chiral, "drop the odd (chiral) coupling: V_L = V_R");
    sc->add_flag("--dump-s", so.dump_s, "write per-energy S-matrix JSON dumps");
    sc->add_flag("--resume", so.resume, "skip energies already present in scatter.csv");
    sc->add_flag("--convergence-check", so.convergence_check,
                 "re-solve the top energy with doubled rmatch / halved step");

    HighEnergyOpts ho;
    CLI::App* he = app.add_subcommand("highenergy", "semiclassical decoherence cross section");
    add_common(he, ho.common);
    he->add_option("--xmin", ho.xmin, "lowest k*beta")->capture_default_str();
    he->add_option("--xmax", ho.xmax, "highest k*beta")->capture_default_str();
    he->add_option("--npts", ho.npts, "table points")->capture_default_str();
    he->add_option("--refit-lo", ho.refit_lo, "refit window start [k*beta]")
        ->capture_default_str();
    he->add_option("--refit-hi", ho.refit_hi, "refit window end [k*beta]")->capture_default_str();
    he->add_option("--refit-npts", ho.refit_npts, "refit points")->capture_default_str();

    MasterOpts mo;
    CLI::App* ma = app.add_subcommand("master", "two-level master-equation rates");
    add_common(ma, mo.common);
    ma->add_option("--tunneling-hz", mo.tunneling_hz, "tunneling frequency [Hz] (-1: dataset)")
        ->capture_default_str();
    ma->add_option("--gamma-over-omega", mo.gamma_over_omega, "gamma / omega_z")
        ->capture_default_str();
    ma->add_option("--gamma-per-s", mo.gamma_per_s, "decoherence rate [1/s], overrides ratio")
        ->capture_default_str();
    ma->add_option("--omega-x-over-omega", mo.omega_x_over_omega, "omega_x / omega_z")
        ->capture_default_str();
    ma->add_option("--x0", mo.x0, "initial Bloch x")->capture_default_str();
    ma->add_option("--y0", mo.y0, "initial Bloch y")->capture_default_str();
    ma->add_option("--z0", mo.z0, "initial Bloch z")->capture_default_str();
    ma->add_option("--cycles", mo.cycles, "trajectory length in tunneling cycles")
        ->capture_default_str();
    ma->add_option("--npts", mo.npts, "trajectory samples")->capture_default_str();

    PredictOpts pr;
    CLI::App* pd = app.add_subcommand("predict", "critical pressure and scaling law");
    add_common(pd, pr.common);
    pd->add_option("--tmin", pr.tmin_K, "scan start [K]")->capture_default_str();
    pd->add_option("--tmax", pr.tmax_K, "scan end [K]")->capture_default_str();
    pd->add_option("--npts", pr.npts, "scan points")->capture_default_str();
    pd->add_option("--at-temperature", pr.at_T_K, "report gamma at this T [K]")
        ->capture_default_str();
    pd->add_option("--at-pressure", pr.at_p_mbar, "report gamma at this p [mbar]")
        ->capture_default_str();
    pd->add_flag("--full-shape", pr.full_shape,
                 "average the full shape function instead of the leading power law");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*levels) return run_levels(lo);
        if (*pot) return run_potential(po);
        if (*sc) return run_scatter(so);
        if (*he) return run_highenergy(ho);
        if (*ma) return run_master(mo);
        if (*pd) return run_predict(pr);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
