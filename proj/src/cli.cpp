#include "nullshadow/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "nullshadow/dynamics.hpp"
#include "nullshadow/ensemble.hpp"
#include "nullshadow/interferometer.hpp"
#include "nullshadow/master.hpp"
#include "nullshadow/output.hpp"
#include "nullshadow/parallel.hpp"
#include "nullshadow/random.hpp"

namespace nullshadow::cli {

namespace {

using json = nlohmann::ordered_json;

// The embedded closed-form check on master-equation populations.
constexpr double kAnalyticTol = 1e-6;

struct StateFlags {
    double p_excited{0.5};
    double a0_re{0}, a0_im{0}, a1_re{0}, a1_im{0};
    CLI::Option* p_option{nullptr};
    std::vector<CLI::Option*> amplitude_options;

    void add_to(CLI::App& app) {
        p_option = app.add_option("--p-excited", p_excited, "Excited population of a real superposition")
                       ->capture_default_str();
        amplitude_options = {
            app.add_option("--a0-re", a0_re, "Ground amplitude, real part"),
            app.add_option("--a0-im", a0_im, "Ground amplitude, imaginary part"),
            app.add_option("--a1-re", a1_re, "Excited amplitude, real part"),
            app.add_option("--a1-im", a1_im, "Excited amplitude, imaginary part"),
        };
        for (auto* o : amplitude_options) p_option->excludes(o);
    }

    bool complex_given() const {
        for (const auto* o : amplitude_options)
            if (o->count() > 0) return true;
        return false;
    }

    QubitState resolve() const {
        if (complex_given()) return normalize(QubitState({a0_re, a0_im}, {a1_re, a1_im}));
        return QubitState::from_excited_population(p_excited);
    }
};

struct AtomFlags {
    AtomParams params{};

    void add_to(CLI::App& app) {
        app.add_option("--gamma", params.gamma, "Decay rate")->capture_default_str();
        app.add_option("--e0", params.e0, "Ground energy (angular frequency)")->capture_default_str();
        app.add_option("--e1", params.e1, "Excited energy (angular frequency)")->capture_default_str();
    }
};

struct OutputFlags {
    std::string path{"-"};
    std::string format{"csv"};

    void add_to(CLI::App& app, bool with_format = true) {
        app.add_option("--out", path, "Output file ('-' for standard output)")->capture_default_str();
        if (with_format)
            app.add_option("--format", format, "Output format")
                ->check(CLI::IsMember({"csv", "json"}))
                ->capture_default_str();
    }

    Format parsed() const { return format == "json" ? Format::Json : Format::Csv; }
};

json state_json(const QubitState& s) {
    return {{"a0", {s.a0().real(), s.a0().imag()}}, {"a1", {s.a1().real(), s.a1().imag()}}};
}

json atom_json(const AtomParams& p) { return {{"e0", p.e0}, {"e1", p.e1}, {"gamma", p.gamma}}; }

int emit(const OutputRecord& rec, const OutputFlags& flags, std::ostream& out, std::ostream& err) {
    if (flags.path == "-") {
        write_record(out, rec, flags.parsed());
        out.flush();
        return out ? kOk : kIoError;
    }
    std::ofstream file(flags.path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot open '" << flags.path << "' for writing\n";
        return kIoError;
    }
    write_record(file, rec, flags.parsed());
    file.close();
    if (!file) {
        err << "error: failed writing '" << flags.path << "'\n";
        return kIoError;
    }
    return kOk;
}

std::vector<std::int64_t> as_signed(const std::vector<std::uint64_t>& v) {
    return {v.begin(), v.end()};
}

std::vector<double> fractions(const std::vector<std::uint64_t>& counts, const std::vector<std::uint64_t>& totals) {
    std::vector<double> f(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        f[k] = totals[k] == 0 ? std::nan("") : static_cast<double>(counts[k]) / static_cast<double>(totals[k]);
    return f;
}

// ---------------------------------------------------------------------------

struct DecayEnsembleCmd {
    StateFlags state;
    AtomFlags atom;
    OutputFlags output;
    std::uint64_t n_atoms{1000};
    double horizon{10.0};
    std::size_t grid{101};
    std::uint64_t seed{0};
    bool premeasure{false};
    bool measure_survivors{false};

    void add_to(CLI::App& root) {
        auto* app = root.add_subcommand("decay-ensemble", "Blackened-cell counts for an ensemble of decaying atoms");
        app->add_option("--n-atoms", n_atoms, "Number of atoms")->check(CLI::PositiveNumber)->capture_default_str();
        state.add_to(*app);
        atom.add_to(*app);
        app->add_option("--horizon", horizon, "Final time")->capture_default_str();
        app->add_option("--grid", grid, "Number of grid times in [0, horizon]")->capture_default_str();
        app->add_option("--seed", seed, "Base seed")->capture_default_str();
        app->add_flag("--premeasure", premeasure, "Projectively measure every atom at t = 0");
        app->add_flag("--measure-survivors", measure_survivors,
                      "Add a sampled projective measurement of survivors at every grid time");
        output.add_to(*app);
        app->footer(
            "CSV columns: t, blackened_count, blackened_fraction, survivors, survivor_excited_prob, "
            "expected_blackened [, measured_excited_count, measured_excited_fraction]");
        app->callback([this, app] { selected = app; });
    }

    int run(std::ostream& out, std::ostream& err, unsigned threads) const {
        EnsembleConfig cfg;
        cfg.n_atoms = n_atoms;
        cfg.initial = state.resolve();
        cfg.params = atom.params;
        cfg.horizon = horizon;
        cfg.grid_points = grid;
        cfg.base_seed = seed;
        cfg.premeasure = premeasure;
        cfg.measure_survivors = measure_survivors;
        const EnsembleStats stats = run_ensemble(cfg, threads);

        const double p1 = cfg.initial.excited_population();
        const double n = static_cast<double>(n_atoms);
        std::vector<double> expected;
        for (double t : stats.grid) expected.push_back(expected_blackened(n, p1, cfg.params.gamma, t));
        const std::vector<std::uint64_t> totals(stats.grid.size(), n_atoms);

        OutputRecord rec;
        rec.scenario = "decay-ensemble";
        rec.seed = seed;
        rec.config = {{"n_atoms", n_atoms},     {"initial", state_json(cfg.initial)},
                      {"atom", atom_json(cfg.params)}, {"horizon", horizon},
                      {"grid", grid},           {"premeasure", premeasure},
                      {"measure_survivors", measure_survivors}};
        rec.columns = {{"t", stats.grid},
                       {"blackened_count", as_signed(stats.blackened_count)},
                       {"blackened_fraction", fractions(stats.blackened_count, totals)},
                       {"survivors", as_signed(stats.survivors)},
                       {"survivor_excited_prob", stats.survivor_excited_prob},
                       {"expected_blackened", expected}};
        if (stats.survivor_measured_excited) {
            rec.columns.push_back({"measured_excited_count", as_signed(*stats.survivor_measured_excited)});
            rec.columns.push_back(
                {"measured_excited_fraction", fractions(*stats.survivor_measured_excited, stats.survivors)});
        }
        rec.summary = {{"fraction_blackened_final", stats.fraction_blackened_final},
                       {"expected_fraction_final", expected.back() / n}};
        return emit(rec, output, out, err);
    }

    CLI::App* selected{nullptr};
};

struct ConditionalStateCmd {
    StateFlags state;
    AtomFlags atom;
    OutputFlags output;
    double horizon{10.0};
    std::size_t grid{101};

    void add_to(CLI::App& root) {
        auto* app = root.add_subcommand("conditional-state", "Survivor state after waiting without a photon (exact)");
        state.add_to(*app);
        atom.add_to(*app);
        app->add_option("--horizon", horizon, "Final time")->capture_default_str();
        app->add_option("--grid", grid, "Number of grid times in [0, horizon]")->capture_default_str();
        output.add_to(*app);
        app->footer("CSV columns: t, excited_prob, ground_fidelity, survival_probability");
        app->callback([this, app] { selected = app; });
    }

    int run(std::ostream& out, std::ostream& err, unsigned) const {
        const QubitState initial = state.resolve();
        const AtomParams& params = atom.params;
        params.validate();
        if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
        const auto times = grid_times(horizon, grid);
        const double p1 = initial.excited_population();
        std::vector<double> excited, ground_fid, survival;
        for (double t : times) {
            const QubitState s = survivor_state(t, initial, params);
            excited.push_back(s.excited_population());
            ground_fid.push_back(fidelity(s, QubitState::ground()));
            survival.push_back(no_jump_survival(p1, params.gamma, t));
        }
        OutputRecord rec;
        rec.scenario = "conditional-state";
        rec.config = {{"initial", state_json(initial)}, {"atom", atom_json(params)}, {"horizon", horizon},
                      {"grid", grid}};
        rec.columns = {{"t", times},
                       {"excited_prob", excited},
                       {"ground_fidelity", ground_fid},
                       {"survival_probability", survival}};
        rec.summary = {{"final_ground_fidelity", ground_fid.back()}};
        return emit(rec, output, out, err);
    }

    CLI::App* selected{nullptr};
};

struct EvCmd {
    OutputFlags output;
    std::string blocker{"none"};
    double t1{0.5}, t2{0.5};
    double phase_a{0.0}, phase_b{0.0};
    std::uint64_t shots{0};
    std::uint64_t seed{0};

    void add_to(CLI::App& root) {
        auto* app = root.add_subcommand("ev", "Two-splitter interferometer with optional blocker");
        app->add_option("--blocker", blocker, "Blocked arm")
            ->check(CLI::IsMember({"none", "a", "b"}))
            ->capture_default_str();
        app->add_option("--t1", t1, "First splitter power transmissivity")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app->add_option("--t2", t2, "Second splitter power transmissivity")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app->add_option("--phase-a", phase_a, "Arm A phase (rad)")->capture_default_str();
        app->add_option("--phase-b", phase_b, "Arm B phase (rad)")->capture_default_str();
        app->add_option("--shots", shots, "Sampled photons (0 = exact only)")->capture_default_str();
        app->add_option("--seed", seed, "Seed")->capture_default_str();
        output.add_to(*app);
        app->footer("CSV columns: outcome, probability [, count, fraction]; rows D1, D2, Absorbed");
        app->callback([this, app] { selected = app; });
    }

    int run(std::ostream& out, std::ostream& err, unsigned) const {
        EVConfig cfg;
        cfg.splitter1_transmissivity = t1;
        cfg.splitter2_transmissivity = t2;
        cfg.phase_a = phase_a;
        cfg.phase_b = phase_b;
        if (blocker == "a") cfg.blocker = Arm::A;
        if (blocker == "b") cfg.blocker = Arm::B;
        const DetectionProbs probs = detection_probs(cfg);

        const std::vector<Outcome> order{Outcome::D1, Outcome::D2, Outcome::Absorbed};
        std::vector<std::string> names;
        std::vector<double> p;
        for (Outcome o : order) {
            names.emplace_back(to_string(o));
            p.push_back(probs[o]);
        }

        OutputRecord rec;
        rec.scenario = "ev";
        rec.config = {{"blocker", blocker}, {"t1", t1},    {"t2", t2},
                      {"phase_a", phase_a}, {"phase_b", phase_b}, {"shots", shots}};
        rec.columns = {{"outcome", names}, {"probability", p}};
        rec.summary = {{"p_d1", probs.d1}, {"p_d2", probs.d2}, {"p_absorbed", probs.absorbed}};
        if (shots > 0) {
            rec.seed = seed;
            std::vector<std::int64_t> counts(order.size(), 0);
            SplitMix64 rng(substream_seed(seed, 0));
            for (std::uint64_t s = 0; s < shots; ++s) ++counts[static_cast<std::size_t>(sample_outcome(probs, uniform01(rng)))];
            std::vector<double> freq;
            for (auto c : counts) freq.push_back(static_cast<double>(c) / static_cast<double>(shots));
            rec.columns.push_back({"count", counts});
            rec.columns.push_back({"fraction", freq});
        }
        return emit(rec, output, out, err);
    }

    CLI::App* selected{nullptr};
};

struct MasterCheckCmd {
    StateFlags state;
    AtomFlags atom;
    OutputFlags output;
    std::uint64_t n_traj{10000};
    double horizon{5.0};
    double dt{0.01};
    std::size_t grid{50};
    std::uint64_t seed{0};
    std::optional<double> tol;

    void add_to(CLI::App& root) {
        auto* app = root.add_subcommand("master-check",
                                        "Compare the trajectory average with the master-equation solution");
        state.add_to(*app);
        atom.add_to(*app);
        app->add_option("--n-traj", n_traj, "Number of trajectories")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--horizon", horizon, "Final time")->capture_default_str();
        app->add_option("--dt", dt, "Largest RK4 step")->capture_default_str();
        app->add_option("--grid", grid, "Number of grid times in [0, horizon]")->capture_default_str();
        app->add_option("--seed", seed, "Base seed")->capture_default_str();
        app->add_option("--tol", tol, "Deviation tolerance (default 5/sqrt(n-traj))");
        output.add_to(*app);
        app->footer(
            "CSV columns: t, master_rho00, master_rho11, master_rho01_re, master_rho01_im, traj_rho00, traj_rho11, "
            "traj_rho01_re, traj_rho01_im, analytic_rho11, deviation. Exit 3 when the deviation reaches --tol or "
            "the master populations leave the closed form by more than 1e-6.");
        app->callback([this, app] { selected = app; });
    }

    int run(std::ostream& out, std::ostream& err, unsigned threads) const {
        EnsembleConfig cfg;
        cfg.n_atoms = n_traj;
        cfg.initial = state.resolve();
        cfg.params = atom.params;
        cfg.horizon = horizon;
        cfg.grid_points = grid;
        cfg.base_seed = seed;
        cfg.validate();

        MasterRunConfig user{dt, horizon, 1};
        user.validate(cfg.params);
        const auto intervals = static_cast<long long>(grid - 1);
        const auto per_interval = static_cast<long long>(std::ceil(horizon / static_cast<double>(intervals) / dt - 1e-9));
        MasterRunConfig mcfg{horizon / static_cast<double>(intervals * per_interval), horizon,
                             static_cast<int>(per_interval)};
        const MasterSeries master = integrate_master(density_from_state(cfg.initial), cfg.params, mcfg);
        if (master.states.size() != grid) throw std::logic_error("master grid does not match trajectory grid");

        const auto paths = trajectory_paths(cfg, threads);
        const auto averaged = average_trajectories<double>(paths);
        const auto times = grid_times(horizon, grid);

        const double p1 = cfg.initial.excited_population();
        Column t{"t", times}, m00{"master_rho00", std::vector<double>{}}, m11{"master_rho11", std::vector<double>{}},
            m01r{"master_rho01_re", std::vector<double>{}}, m01i{"master_rho01_im", std::vector<double>{}},
            a00{"traj_rho00", std::vector<double>{}}, a11{"traj_rho11", std::vector<double>{}},
            a01r{"traj_rho01_re", std::vector<double>{}}, a01i{"traj_rho01_im", std::vector<double>{}},
            analytic{"analytic_rho11", std::vector<double>{}}, dev{"deviation", std::vector<double>{}};
        auto push = [](Column& c, double v) { std::get<std::vector<double>>(c.values).push_back(v); };
        double max_dev = 0.0;
        double analytic_err = 0.0;
        for (std::size_t k = 0; k < grid; ++k) {
            const auto& m = master.states[k];
            const auto& a = averaged[k];
            const double exact = p1 * std::exp(-cfg.params.gamma * times[k]);
            const double d = (m.m - a.m).cwiseAbs().maxCoeff();
            max_dev = std::max(max_dev, d);
            analytic_err = std::max(analytic_err, std::abs(m.rho11() - exact));
            push(m00, m.rho00());
            push(m11, m.rho11());
            push(m01r, m.rho01().real());
            push(m01i, m.rho01().imag());
            push(a00, a.rho00());
            push(a11, a.rho11());
            push(a01r, a.rho01().real());
            push(a01i, a.rho01().imag());
            push(analytic, exact);
            push(dev, d);
        }
        const double tolerance = tol.value_or(5.0 / std::sqrt(static_cast<double>(n_traj)));
        const bool passed = max_dev < tolerance && analytic_err <= kAnalyticTol;

        OutputRecord rec;
        rec.scenario = "master-check";
        rec.seed = seed;
        rec.config = {{"initial", state_json(cfg.initial)},
                      {"atom", atom_json(cfg.params)},
                      {"n_traj", n_traj},
                      {"horizon", horizon},
                      {"dt", dt},
                      {"grid", grid},
                      {"tol", tolerance}};
        rec.columns = {t, m00, m11, m01r, m01i, a00, a11, a01r, a01i, analytic, dev};
        rec.summary = {{"max_deviation", max_dev},
                       {"tol", tolerance},
                       {"analytic_max_error", analytic_err},
                       {"analytic_tol", kAnalyticTol},
                       {"passed", passed}};
        const int io = emit(rec, output, out, err);
        if (io != kOk) return io;
        err << "master-check: max deviation " << format_double(max_dev) << " (tol " << format_double(tolerance)
            << "), analytic error " << format_double(analytic_err) << '\n';
        return passed ? kOk : kToleranceExceeded;
    }

    CLI::App* selected{nullptr};
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum-trajectory simulator for decaying two-level atoms and the two-splitter interferometer",
                 "nullshadow"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // Heap-allocated so the callbacks capturing `this` stay valid.
    auto decay = std::make_unique<DecayEnsembleCmd>();
    auto conditional = std::make_unique<ConditionalStateCmd>();
    auto ev = std::make_unique<EvCmd>();
    auto master = std::make_unique<MasterCheckCmd>();
    decay->add_to(app);
    conditional->add_to(app);
    ev->add_to(app);
    master->add_to(app);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kUsage;
    }

    const unsigned threads = thread_count_from_env();
    try {
        if (decay->selected) return decay->run(out, err, threads);
        if (conditional->selected) return conditional->run(out, err, threads);
        if (ev->selected) return ev->run(out, err, threads);
        if (master->selected) return master->run(out, err, threads);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NullStateError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace nullshadow::cli
