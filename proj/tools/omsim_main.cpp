// omsim: frequency-domain simulator for radiation-pressure back-action
// amplification in a detuned optomechanical cavity.
//
// Subcommands:
//   amplification  amplification factor traces vs detuning
//   sensitivity    quantum-limited sensitivity curves and SQL references
//   spectrum       model thermal displacement spectra (detuned and bare)
//   experiment     emulated three-step measurement protocol
//   sweep          re-run the curve set over values of one config key
//
// Exit codes: 0 success, 2 configuration error, 3 model-validity or
// instability error, 1 anything else. Partial outputs are removed when a
// command fails.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "omsim/config.hpp"
#include "omsim/csv.hpp"
#include "omsim/errors.hpp"
#include "omsim/lab.hpp"
#include "omsim/noise.hpp"
#include "omsim/response.hpp"

namespace {

namespace fs = std::filesystem;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Everything a command writes is registered here so a failing run can
// clean up after itself.
class OutputTracker {
  public:
    std::string prepare(const fs::path& path) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        std::lock_guard<std::mutex> lock(mutex_);
        files_.push_back(path);
        return path.string();
    }

    void track_directory(const fs::path& dir) {
        std::lock_guard<std::mutex> lock(mutex_);
        directories_.push_back(dir);
    }

    void remove_all() {
        std::lock_guard<std::mutex> lock(mutex_);
        std::error_code ec;
        for (const auto& f : files_) fs::remove(f, ec);
        for (auto it = directories_.rbegin(); it != directories_.rend(); ++it)
            fs::remove_all(*it, ec);
    }

  private:
    std::mutex mutex_;
    std::vector<fs::path> files_;
    std::vector<fs::path> directories_;
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> power_mw;
    std::string detunings;  // comma-separated psi/gamma values
    bool finite_bandwidth = true;
    bool amplified = true;
    std::string sweep_key;
    std::string sweep_values;  // comma-separated
};

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            while (used < token.size() && std::isspace(token[used])) ++used;
            if (used != token.size()) throw std::invalid_argument(token);
            values.push_back(v);
        } catch (const std::exception&) {
            throw omsim::config_error(std::string("cannot parse ") + what +
                                      " list entry '" + token + "'");
        }
    }
    if (values.empty())
        throw omsim::config_error(std::string("empty ") + what + " list");
    return values;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

omsim::RunConfig apply_overrides(omsim::RunConfig config,
                                 const CommonOptions& opt) {
    if (opt.seed)
        config = omsim::with_key_value(config, "run.seed",
                                       static_cast<double>(*opt.seed));
    if (opt.power_mw)
        config =
            omsim::with_key_value(config, "drive.power_w", *opt.power_mw * 1e-3);
    return config;
}

struct ModelSet {
    omsim::OpticalParams optical;
    omsim::MechanicalParams mech;
    omsim::BathParams bath;
    std::vector<double> grid;
};

ModelSet models_from(const omsim::RunConfig& config) {
    ModelSet m;
    m.optical = omsim::optical_from(config);
    m.mech = omsim::mechanical_from(config);
    m.bath = omsim::bath_from(config);
    m.grid = omsim::grid_from(config);
    return m;
}

struct CurveSummary {
    double detuning_over_gamma = 0.0;
    double power_w = 0.0;
    double peak_amplification = 0.0;
    double peak_f_hz = 0.0;
    double f_eff_hz = 0.0;
    double gamma_eff_rad_s = 0.0;
    bool stable = true;
    double attenuation_at_resonance = 0.0;
    double max_db_vs_sql_eff = 0.0;
    double max_db_vs_sql_bare = 0.0;
};

// Amplification trace plus mode parameters for one detuning; throws
// instability_error for dynamically unstable drives.
CurveSummary evaluate_amplification(const ModelSet& m,
                                    const omsim::DriveState& drive,
                                    std::vector<double>& trace_out) {
    const auto mode = omsim::effective_mode_params(
        m.mech, m.optical, drive,
        omsim::make_mode_search_grid(m.mech, m.optical, drive));
    if (!mode.stable)
        throw omsim::instability_error(
            "drive configuration is dynamically unstable (gamma_eff = " +
            format_number(mode.gamma_eff) + " rad/s)");

    CurveSummary summary;
    summary.detuning_over_gamma = drive.detuning_over_gamma;
    summary.power_w = drive.power_w;
    summary.f_eff_hz = mode.omega_eff / kTwoPi;
    summary.gamma_eff_rad_s = mode.gamma_eff;
    summary.stable = mode.stable;
    summary.attenuation_at_resonance = omsim::amplification_factor(
        m.mech, m.optical, drive, m.mech.resonance_rad_s);

    trace_out.clear();
    trace_out.reserve(m.grid.size());
    for (const double omega : m.grid)
        trace_out.push_back(
            omsim::amplification_factor(m.mech, m.optical, drive, omega));

    // The run grid can be coarse; locate the peak on the fine mode search
    // scale around the effective resonance instead.
    const auto fine = omsim::make_linear_grid(
        mode.omega_eff - 20.0 * std::abs(mode.gamma_eff),
        mode.omega_eff + 20.0 * std::abs(mode.gamma_eff), 4001);
    double peak = 0.0, peak_omega = mode.omega_eff;
    for (const double omega : fine) {
        const double a =
            omsim::amplification_factor(m.mech, m.optical, drive, omega);
        if (a > peak) {
            peak = a;
            peak_omega = omega;
        }
    }
    summary.peak_amplification = peak;
    summary.peak_f_hz = peak_omega / kTwoPi;
    return summary;
}

void summarize_sensitivity(const ModelSet& m, const omsim::DriveState& drive,
                           const omsim::SensitivityCurve& amplified,
                           CurveSummary& summary) {
    double best_eff = -1e300, best_bare = -1e300;
    for (const double omega : amplified.trace.omega) {
        best_eff = std::max(best_eff,
                            omsim::improvement_db(m.mech, m.optical, drive,
                                                  amplified,
                                                  omsim::SqlReference::effective,
                                                  omega));
        best_bare = std::max(best_bare,
                             omsim::improvement_db(m.mech, m.optical, drive,
                                                   amplified,
                                                   omsim::SqlReference::bare,
                                                   omega));
    }
    summary.max_db_vs_sql_eff = best_eff;
    summary.max_db_vs_sql_bare = best_bare;
}

void print_amplification_summary(const CurveSummary& s) {
    std::cout << "curve detuning_over_gamma=" << format_number(s.detuning_over_gamma)
              << " power_mw=" << format_number(s.power_w * 1e3)
              << " peak_amplification=" << format_number(s.peak_amplification)
              << " peak_f_hz=" << format_number(s.peak_f_hz)
              << " f_eff_hz=" << format_number(s.f_eff_hz)
              << " gamma_eff_rad_s=" << format_number(s.gamma_eff_rad_s)
              << " amplification_at_resonance="
              << format_number(s.attenuation_at_resonance) << "\n";
}

int run_amplification(const omsim::RunConfig& config, const CommonOptions& opt,
                      OutputTracker& outputs) {
    const ModelSet m = models_from(config);
    std::vector<double> detunings = {config.drive_detuning_over_gamma};
    if (!opt.detunings.empty())
        detunings = parse_double_list(opt.detunings, "detuning");

    std::vector<std::vector<double>> traces(detunings.size());
    std::vector<omsim::CsvColumn> combined;
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        const auto drive = omsim::derive_drive_state(m.optical,
                                                     config.drive_power_w,
                                                     detunings[i]);
        const CurveSummary summary =
            evaluate_amplification(m, drive, traces[i]);
        print_amplification_summary(summary);

        const std::string name =
            "amplification_detuning_" + format_number(detunings[i]);
        omsim::write_csv(
            outputs.prepare(fs::path(opt.out_dir) / (name + ".csv")), m.grid,
            {{"amplification", &traces[i]}});
        combined.push_back({name, &traces[i]});
    }
    if (detunings.size() > 1)
        omsim::write_csv(
            outputs.prepare(fs::path(opt.out_dir) / "amplification.csv"),
            m.grid, combined);
    return 0;
}

int run_sensitivity(const omsim::RunConfig& config, const CommonOptions& opt,
                    OutputTracker& outputs) {
    const ModelSet m = models_from(config);
    const auto drive = omsim::drive_from(config, m.optical);

    std::vector<double> amp_trace;
    CurveSummary summary = evaluate_amplification(m, drive, amp_trace);

    const auto amplified = omsim::sensitivity_curve(
        m.mech, m.optical, drive, m.grid, true, opt.finite_bandwidth);
    const auto unamplified = omsim::sensitivity_curve(
        m.mech, m.optical, drive, m.grid, false, opt.finite_bandwidth);
    std::vector<double> sql_eff(m.grid.size()), sql_bare(m.grid.size());
    for (std::size_t i = 0; i < m.grid.size(); ++i) {
        sql_eff[i] = omsim::sql_effective(m.mech, m.optical, drive, m.grid[i]);
        sql_bare[i] = omsim::sql_bare(m.mech, m.grid[i]);
    }
    summarize_sensitivity(m, drive, amplified, summary);

    std::cout << "sensitivity power_mw=" << format_number(drive.power_w * 1e3)
              << " detuning_over_gamma="
              << format_number(drive.detuning_over_gamma)
              << " finite_bandwidth=" << (opt.finite_bandwidth ? "on" : "off")
              << " max_db_vs_sql_eff=" << format_number(summary.max_db_vs_sql_eff)
              << " max_db_vs_sql_bare="
              << format_number(summary.max_db_vs_sql_bare) << "\n";

    const fs::path dir(opt.out_dir);
    std::vector<omsim::CsvColumn> columns;
    if (opt.amplified) {
        omsim::write_csv(outputs.prepare(dir / "sensitivity_amplified.csv"),
                         m.grid, {{"amplified_m2_per_hz", &amplified.trace.value}});
        columns.push_back({"amplified_m2_per_hz", &amplified.trace.value});
    }
    omsim::write_csv(outputs.prepare(dir / "sensitivity_unamplified.csv"),
                     m.grid, {{"unamplified_m2_per_hz", &unamplified.trace.value}});
    omsim::write_csv(outputs.prepare(dir / "sensitivity_sql_effective.csv"),
                     m.grid, {{"sql_eff_m2_per_hz", &sql_eff}});
    omsim::write_csv(outputs.prepare(dir / "sensitivity_sql_bare.csv"), m.grid,
                     {{"sql_bare_m2_per_hz", &sql_bare}});
    columns.push_back({"unamplified_m2_per_hz", &unamplified.trace.value});
    columns.push_back({"sql_eff_m2_per_hz", &sql_eff});
    columns.push_back({"sql_bare_m2_per_hz", &sql_bare});
    omsim::write_csv(outputs.prepare(dir / "sensitivity.csv"), m.grid, columns);
    return 0;
}

int run_spectrum(const omsim::RunConfig& config, const CommonOptions& opt,
                 OutputTracker& outputs) {
    const ModelSet m = models_from(config);
    const auto drive = omsim::drive_from(config, m.optical);
    const auto probe_off = omsim::derive_drive_state(m.optical, 0.0, 0.0);

    std::vector<double> detuned(m.grid.size()), bare(m.grid.size());
    for (std::size_t i = 0; i < m.grid.size(); ++i) {
        detuned[i] = omsim::thermal_displacement_psd(m.mech, m.optical, drive,
                                                     m.bath, m.grid[i]);
        bare[i] = omsim::thermal_displacement_psd(m.mech, m.optical, probe_off,
                                                  m.bath, m.grid[i]);
    }
    const auto mode = omsim::effective_mode_params(
        m.mech, m.optical, drive,
        omsim::make_mode_search_grid(m.mech, m.optical, drive));
    std::cout << "spectrum f_eff_hz=" << format_number(mode.omega_eff / kTwoPi)
              << " gamma_eff_rad_s=" << format_number(mode.gamma_eff)
              << " gamma_rad_s=" << format_number(m.mech.damping_rad_s)
              << " peak_detuned_m2_per_hz="
              << format_number(*std::max_element(detuned.begin(), detuned.end()))
              << " peak_bare_m2_per_hz="
              << format_number(*std::max_element(bare.begin(), bare.end()))
              << "\n";

    omsim::write_csv(outputs.prepare(fs::path(opt.out_dir) / "spectrum.csv"),
                     m.grid,
                     {{"thermal_detuned_m2_per_hz", &detuned},
                      {"thermal_bare_m2_per_hz", &bare}});
    return 0;
}

int run_experiment(const omsim::RunConfig& config, const CommonOptions& opt,
                   OutputTracker& outputs) {
    const auto protocol = omsim::protocol_from(config);
    const auto record = omsim::run_protocol(protocol, config.seed);

    const fs::path dir = fs::path(opt.out_dir) / "experiment";
    outputs.track_directory(dir);
    omsim::write_experiment_record(record, dir.string());

    std::cout << "experiment seed=" << record.seed
              << " f_eff_hz=" << format_number(record.fitted_eff.omega_eff / kTwoPi)
              << " gamma_eff_rad_s=" << format_number(record.fitted_eff.gamma_eff)
              << " f_bare_hz="
              << format_number(record.fitted_bare.resonance_rad_s / kTwoPi)
              << " gamma_bare_rad_s="
              << format_number(record.fitted_bare.damping_rad_s)
              << " drift_applied_hz=" << format_number(record.drift_applied_hz)
              << " converged="
              << (record.fit_detuned.converged && record.fit_bare.converged)
              << "\n";
    return 0;
}

unsigned worker_limit(std::size_t tasks) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (const char* env = std::getenv("OMSIM_WORKERS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1)
            workers = static_cast<unsigned>(parsed);
    }
    return static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
}

int run_sweep(const omsim::RunConfig& config, const CommonOptions& opt,
              OutputTracker& outputs) {
    if (opt.sweep_key.empty() || opt.sweep_values.empty())
        throw omsim::config_error(
            "sweep requires --key <config key> and --values v1,v2,...");
    const auto values = parse_double_list(opt.sweep_values, "sweep value");

    struct PointResult {
        CurveSummary summary;
        std::exception_ptr error;
    };
    std::vector<PointResult> results(values.size());
    std::atomic<std::size_t> next{0};

    const auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            try {
                const auto point_config =
                    omsim::with_key_value(config, opt.sweep_key, values[i]);
                const ModelSet m = models_from(point_config);
                const auto drive = omsim::drive_from(point_config, m.optical);

                std::vector<double> amp_trace;
                results[i].summary = evaluate_amplification(m, drive, amp_trace);

                const fs::path dir = fs::path(opt.out_dir) / "sweep" /
                                     (opt.sweep_key + "=" +
                                      format_number(values[i]));
                omsim::write_csv(outputs.prepare(dir / "amplification.csv"),
                                 m.grid, {{"amplification", &amp_trace}});

                const auto amplified = omsim::sensitivity_curve(
                    m.mech, m.optical, drive, m.grid, true,
                    opt.finite_bandwidth);
                summarize_sensitivity(m, drive, amplified, results[i].summary);
                omsim::write_csv(
                    outputs.prepare(dir / "sensitivity_amplified.csv"), m.grid,
                    {{"amplified_m2_per_hz", &amplified.trace.value}});
            } catch (...) {
                results[i].error = std::current_exception();
            }
        }
    };

    const unsigned workers = worker_limit(values.size());
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < values.size(); ++i) {
        if (results[i].error) {
            try {
                std::rethrow_exception(results[i].error);
            } catch (const std::exception& e) {
                std::cerr << "sweep point " << opt.sweep_key << " = "
                          << format_number(values[i]) << " failed: " << e.what()
                          << "\n";
            }
            std::rethrow_exception(results[i].error);
        }
    }

    std::vector<double> col_value(values.size()), col_peak(values.size()),
        col_feff(values.size()), col_geff(values.size()),
        col_db_eff(values.size()), col_db_bare(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& s = results[i].summary;
        col_value[i] = values[i];
        col_peak[i] = s.peak_amplification;
        col_feff[i] = s.f_eff_hz;
        col_geff[i] = s.gamma_eff_rad_s;
        col_db_eff[i] = s.max_db_vs_sql_eff;
        col_db_bare[i] = s.max_db_vs_sql_bare;
        print_amplification_summary(s);
    }
    // Summary rows are keyed by the swept value, not by frequency; reuse
    // the CSV writer by treating the value column as the leading axis.
    std::ostringstream out;
    out << opt.sweep_key
        << ",peak_amplification,f_eff_hz,gamma_eff_rad_s,max_db_vs_sql_eff,"
           "max_db_vs_sql_bare\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      col_value[i], col_peak[i], col_feff[i], col_geff[i],
                      col_db_eff[i], col_db_bare[i]);
        out << buf;
    }
    omsim::write_text_file(
        outputs.prepare(fs::path(opt.out_dir) / "sweep" / "sweep_summary.csv"),
        out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Frequency-domain simulator for radiation-pressure back-action "
        "amplification in a detuned optomechanical cavity"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string command;
    for (const char* name : {"amplification", "sensitivity", "spectrum",
                             "experiment", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "configuration file")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "override run.seed");
        sub->add_option("--detuning", opt.detunings,
                        "comma-separated detunings in units of gamma");
        sub->add_option("--power-mw", opt.power_mw,
                        "override drive power, milliwatts");
        sub->add_option("--finite-bandwidth", opt.finite_bandwidth,
                        "include finite cavity bandwidth corrections")
            ->transform(CLI::IsMember({"on", "off"}))
            ->default_str("on");
        sub->add_option("--amplified", opt.amplified,
                        "emit the amplified sensitivity curve")
            ->transform(CLI::IsMember({"on", "off"}))
            ->default_str("on");
        sub->add_option("--key", opt.sweep_key, "config key to sweep");
        sub->add_option("--values", opt.sweep_values,
                        "comma-separated sweep values");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    OutputTracker outputs;
    try {
        auto config = apply_overrides(omsim::load_config(opt.config_path), opt);
        if (command == "amplification")
            return run_amplification(config, opt, outputs);
        if (command == "sensitivity")
            return run_sensitivity(config, opt, outputs);
        if (command == "spectrum") return run_spectrum(config, opt, outputs);
        if (command == "experiment")
            return run_experiment(config, opt, outputs);
        if (command == "sweep") return run_sweep(config, opt, outputs);
        std::cerr << "unknown command\n";
        return 2;
    } catch (const omsim::config_error& e) {
        outputs.remove_all();
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const omsim::grid_error& e) {
        outputs.remove_all();
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const omsim::model_validity_error& e) {
        outputs.remove_all();
        std::cerr << "model validity error: " << e.what() << "\n";
        return 3;
    } catch (const omsim::instability_error& e) {
        outputs.remove_all();
        std::cerr << "instability error: " << e.what() << "\n";
        return 3;
    } catch (const omsim::singular_inverse_error& e) {
        outputs.remove_all();
        std::cerr << "instability error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        outputs.remove_all();
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
