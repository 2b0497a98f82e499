// leezeno_cli.cpp - Command-line front end: survival curves, measurement rates, poles,
// reductions and the data behind the figures

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <toml.hpp>

#include "leezeno/io.hpp"
#include "leezeno/leezeno.hpp"

namespace {

using namespace leezeno;
namespace fs = std::filesystem;
using io::fmt;
using io::json;

struct Options {
    std::string form_factor{"lorentzian"};
    double lambda{0.1};
    double Lambda{1.0};
    double gamma{0.01};
    double omega_a{1.0};
    double omega0{0.0};
    std::string table;
    std::string t_grid;
    std::string tau_grid;
    std::string Gamma_grid;
    std::string method;
    std::string out;
    std::string summary;
    double tau_max{0.0};  // 0: 1e3 / gamma
    int oracle_n{4000};
    int threads{0};  // 0: hardware concurrency
};

// One entry per option shared by flags and the TOML file, so precedence is handled in one place.
struct Binding {
    std::string name;
    std::function<void(Options&, const Options&)> copy;
    std::function<void(Options&, const toml::node&)> from_toml;
    CLI::Option* flag{nullptr};
};

template <class T>
Binding binding(const std::string& name, T Options::*field) {
    Binding b;
    b.name = name;
    b.copy = [field](Options& dst, const Options& src) { dst.*field = src.*field; };
    b.from_toml = [field, name](Options& dst, const toml::node& node) {
        if constexpr (std::is_same_v<T, std::string>) {
            if (const auto* s = node.as_string()) {
                dst.*field = s->get();
                return;
            }
            if (const auto* arr = node.as_array()) {
                // a TOML array of numbers is an explicit grid
                std::string list;
                for (const auto& v : *arr) {
                    const auto x = v.value<double>();
                    if (!x) fail(Errc::ParseError, "config key '" + name + "': array entries must be numbers");
                    list += (list.empty() ? "" : ",") + fmt(*x);
                }
                dst.*field = list;
                return;
            }
            fail(Errc::ParseError, "config key '" + name + "' must be a string");
        } else {
            const auto x = node.value<double>();
            if (!x) fail(Errc::ParseError, "config key '" + name + "' must be a number");
            if constexpr (std::is_same_v<T, int>) dst.*field = static_cast<int>(*x);
            else dst.*field = *x;
        }
    };
    return b;
}

// ---------------------------------------------------------------------------------------------
// Grids: "lin:a:b:n", "log:a:b:n" or an explicit comma-separated list

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) parts.push_back(cur);
    return parts;
}

double number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) fail(Errc::ParseError, what + ": not a number: '" + s + "'");
    return v;
}

std::vector<double> parse_grid(const std::string& text, const std::string& what) {
    std::vector<double> g;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const auto parts = split(text.substr(colon + 1), ':');
        if ((kind != "lin" && kind != "log") || parts.size() != 3)
            fail(Errc::ParseError, what + ": expected lin:a:b:n, log:a:b:n or a comma list");
        const double a = number(parts[0], what), b = number(parts[1], what);
        const double nd = number(parts[2], what);
        if (nd < 2 || nd != std::floor(nd)) fail(Errc::ParseError, what + ": point count must be an integer >= 2");
        const auto n = static_cast<std::size_t>(nd);
        if (kind == "log") {
            if (!(a > 0.0 && b > a)) fail(Errc::ParseError, what + ": log grid needs 0 < a < b");
            g = detail::log_grid(a, b, n);
        } else {
            for (std::size_t i = 0; i < n; ++i) g.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
            g.back() = b;
        }
    } else {
        for (const auto& p : split(text, ',')) g.push_back(number(p, what));
    }
    if (g.empty()) fail(Errc::ParseError, what + ": empty grid");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) fail(Errc::ParseError, what + ": grid must be strictly increasing");
    return g;
}

// Zeno region on a log scale, then the exponential era on a linear one.
std::vector<double> hybrid_times(double scale, double rate) {
    const double knee = 1.0 / scale;
    const double end = std::max(50.0 * knee, rate > 0.0 ? 10.0 / rate : 0.0);
    std::vector<double> t{0.0};
    for (double v : detail::log_grid(1e-3 * knee, knee, 41)) t.push_back(v);
    for (int i = 1; i <= 400; ++i) t.push_back(knee + (end - knee) * i / 400.0);
    return t;
}

// ---------------------------------------------------------------------------------------------
// Sweeps: cells run on worker threads, results land in their own slot and are written in order

template <class T>
struct Cell {
    std::optional<T> value;
    std::string error;
};

template <class T, class F>
std::vector<Cell<T>> sweep(std::size_t n, int threads, F&& f) {
    std::vector<Cell<T>> cells(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                cells[i].value = f(i);
            } catch (const std::exception& e) {
                cells[i].error = e.what();
            }
        }
    };
    unsigned k = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    k = static_cast<unsigned>(std::min<std::size_t>(k, n));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < k; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return cells;
}

// ---------------------------------------------------------------------------------------------

struct Run {
    Options opt;
    LeeModel model;
    std::vector<std::string> failures;

    void failed(const std::string& cell, const std::exception& e) { failures.push_back(cell + ": " + e.what()); }

    double scale() const { return bandwidth_scale(model.ff); }

    double rate_or_zero() {
        try {
            return natural_rate(model);
        } catch (const Error& e) {
            failed("gamma", e);
            return 0.0;
        }
    }
};

LeeModel build_model(const Options& o) {
    LeeModel m;
    m.omega_a = o.omega_a;
    if (o.form_factor == "lorentzian") m.ff = make_lorentzian(o.lambda, o.Lambda);
    else if (o.form_factor == "flat") m.ff = make_flat_band(o.gamma);
    else if (o.form_factor == "dirac") m.ff = make_dirac(o.lambda, o.omega0);
    else if (o.form_factor == "tabulated") {
        if (o.table.empty()) fail(Errc::InvalidArgument, "--form-factor tabulated needs --table");
        m.ff = io::read_tabulated_csv(o.table);
    } else {
        fail(Errc::InvalidArgument, "unknown form factor '" + o.form_factor + "'");
    }
    if (!std::isfinite(m.omega_a)) fail(Errc::InvalidArgument, "omega_a must be finite");
    return m;
}

json model_json(const Run& r) {
    json j;
    j["form_factor"] = kind_name(r.model.ff);
    j["omega_a"] = r.model.omega_a;
    std::visit(overloaded{
                   [&](const Lorentzian& f) {
                       j["lambda"] = f.coupling;
                       j["Lambda"] = f.bandwidth;
                   },
                   [&](const FlatBand& f) { j["gamma"] = f.rate; },
                   [&](const Dirac& f) {
                       j["lambda"] = f.coupling;
                       j["omega0"] = f.location;
                   },
                   [&](const Tabulated& f) {
                       j["table"] = r.opt.table;
                       j["samples"] = f.omega().size();
                   },
               },
               r.model.ff);
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write " + path);
    out << text;
    if (!out) fail(Errc::IoError, "write failed for " + path);
}

// ---------------------------------------------------------------------------------------------
// survival

const char* default_method(const FormFactor& ff) {
    switch (ff.index()) {
    case 0: return "two-pole";
    case 1: return "ww";
    case 2: return "rabi";
    default: return "spectral";
    }
}

SurvivalSeries run_method(Run& r, Method m, const std::vector<double>& times) {
    const LeeModel& model = r.model;
    switch (m) {
    case Method::TwoPoleClosed: {
        const auto* f = std::get_if<Lorentzian>(&model.ff);
        if (!f) fail(Errc::InvalidArgument, "two-pole method needs a Lorentzian form factor");
        return series_two_pole(two_pole_closed(f->coupling, f->bandwidth, model.omega_a), times);
    }
    case Method::Spectral: return amplitude_spectral(model, times);
    case Method::Oracle: {
        if (r.opt.oracle_n < 1) fail(Errc::InvalidArgument, "--oracle-n must be positive");
        return amplitude_oracle(model, static_cast<std::size_t>(r.opt.oracle_n), times);
    }
    case Method::WW: {
        if (const auto* f = std::get_if<FlatBand>(&model.ff)) {
            const double rate = f->rate, w = model.omega_a;
            return tabulate_series(times, m, [&](double t) { return std::exp(cplx(-0.5 * rate * t, -w * t)); });
        }
        const auto ww = weisskopf_wigner(model);
        return tabulate_series(times, m, [&](double t) { return ww.amplitude(t); });
    }
    case Method::ShortTime:
        zeno_time(model.ff);  // surfaces SecondMomentDivergent before any row
        return tabulate_series(times, m, [&](double t) { return short_time(model, t).amplitude; });
    case Method::Rabi: {
        const auto* f = std::get_if<Dirac>(&model.ff);
        if (!f) fail(Errc::InvalidArgument, "rabi method needs a dirac form factor");
        const double l = f->coupling, w0 = f->location, det = model.omega_a - f->location;
        return tabulate_series(times, m, [&](double t) { return rabi_survival(l, det, t).amplitude * std::exp(cplx(0.0, -w0 * t)); });
    }
    case Method::StrongCoupling: {
        const auto* f = std::get_if<Lorentzian>(&model.ff);
        if (!f) fail(Errc::InvalidArgument, "strong-coupling method needs a Lorentzian form factor");
        const double l = f->coupling, b = f->bandwidth, w = model.omega_a;
        return tabulate_series(times, m, [&](double t) { return strong_coupling_amplitude(l, b, w, t); });
    }
    }
    fail(Errc::InvalidArgument, "unhandled method");
}

void cmd_survival(Run& r) {
    const auto times = r.opt.t_grid.empty() ? hybrid_times(r.scale(), r.rate_or_zero()) : parse_grid(r.opt.t_grid, "--t-grid");
    const std::string methods = r.opt.method.empty() ? default_method(r.model.ff) : r.opt.method;
    const auto names = split(methods, ',');
    const auto cells = sweep<SurvivalSeries>(names.size(), r.opt.threads, [&](std::size_t i) {
        const auto m = parse_method(names[i]);
        if (!m) fail(Errc::InvalidArgument, "unknown method");
        return run_method(r, *m, times);
    });
    std::vector<SurvivalSeries> blocks;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].value) blocks.push_back(*cells[i].value);
        else r.failures.push_back("method=" + names[i] + ": " + cells[i].error);
    }
    std::ostringstream out;
    io::write_survival_csv(out, blocks);
    write_text(r.opt.out, out.str());
}

// ---------------------------------------------------------------------------------------------
// zeno and continuous

double default_tau_max(Run& r, double gamma) {
    if (r.opt.tau_max > 0.0) return r.opt.tau_max;
    return gamma > 0.0 ? 1e3 / gamma : 1e3 / r.scale();
}

std::string summary_path(const Options& o) {
    if (!o.summary.empty()) return o.summary;
    if (o.out.empty() || o.out == "-") return {};
    fs::path p(o.out);
    p.replace_extension(".json");
    return p.string();
}

void cmd_zeno(Run& r) {
    const double gamma = r.rate_or_zero();
    const double tau_max = default_tau_max(r, gamma);
    const auto taus = r.opt.tau_grid.empty() ? detail::log_grid(1e-4 / r.scale(), tau_max, 200) : parse_grid(r.opt.tau_grid, "--tau-grid");
    if (!(taus.front() > 0.0)) fail(Errc::InvalidArgument, "--tau-grid values must be > 0");
    const SurvivalLaw law(r.model, std::max(tau_max, taus.back()));

    std::ostringstream csv;
    csv << "tau,gamma_eff,regime\n";
    const auto cells = sweep<double>(taus.size(), r.opt.threads, [&](std::size_t i) { return effective_rate_pulsed(law, taus[i]); });
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!cells[i].value) {
            r.failures.push_back("tau=" + fmt(taus[i]) + ": " + cells[i].error);
            continue;
        }
        const double g = *cells[i].value;
        csv << fmt(taus[i]) << ',' << fmt(g) << ',' << to_string(classify_rate(g, gamma)) << '\n';
    }

    json j;
    j["model"] = model_json(r);
    j["gamma"] = gamma;
    try {
        const auto c = sufficient_condition(r.model);
        j["Z"] = c.z;
        j["condition_holds"] = c.holds;
        if (c.weak_coupling_check) j["weak_coupling_check"] = *c.weak_coupling_check;
    } catch (const Error& e) {
        r.failed("Z", e);
        j["Z"] = nullptr;
        j["condition_holds"] = nullptr;
    }
    try {
        j["golden_rule"] = golden_rule(r.model);
    } catch (const Error&) {
        j["golden_rule"] = nullptr;  // not defined for a discrete level; not a failure
    }
    try {
        j["tau_stars"] = find_tau_star(law, gamma, TauStarOptions{}.lower / r.scale(), tau_max);
    } catch (const Error& e) {
        r.failed("tau_stars", e);
        j["tau_stars"] = nullptr;
    }
    j["tau_max"] = tau_max;

    write_text(r.opt.out, csv.str());
    const std::string sp = summary_path(r.opt);
    if (sp.empty()) std::cout << "# " << j.dump() << '\n';
    else write_text(sp, j.dump(2) + "\n");
}

void cmd_continuous(Run& r) {
    const auto rates = r.opt.Gamma_grid.empty() ? detail::log_grid(1e-2 * r.scale(), 1e3 * r.scale(), 101)
                                                : parse_grid(r.opt.Gamma_grid, "--Gamma-grid");
    if (rates.front() < 0.0) fail(Errc::InvalidArgument, "--Gamma-grid values must be >= 0");
    std::ostringstream csv;
    csv << "Gamma,gamma_eff,asymptote\n";
    const auto cells = sweep<std::pair<double, double>>(rates.size(), r.opt.threads, [&](std::size_t i) {
        const double g = rates[i];
        double asym = std::numeric_limits<double>::quiet_NaN();
        if (!std::holds_alternative<FlatBand>(r.model.ff) && g > 0.0) asym = continuous_rate_asymptote(r.model, g);
        return std::pair{continuous_rate(r.model, g), asym};
    });
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!cells[i].value) {
            r.failures.push_back("Gamma=" + fmt(rates[i]) + ": " + cells[i].error);
            continue;
        }
        csv << fmt(rates[i]) << ',' << fmt(cells[i].value->first) << ',' << fmt(cells[i].value->second) << '\n';
    }
    write_text(r.opt.out, csv.str());
}

// ---------------------------------------------------------------------------------------------
// poles and reduce

void cmd_poles(Run& r) {
    json j;
    j["model"] = model_json(r);
    try {
        j["pole"] = io::pole_json(find_pole(r.model));
    } catch (const Error& e) {
        r.failed("pole", e);
        j["pole"] = nullptr;
    }
    if (const auto* f = std::get_if<Lorentzian>(&r.model.ff); f && f->coupling > 0.0) {
        const auto p = two_pole_closed(f->coupling, f->bandwidth, r.model.omega_a);
        json c;
        c["E1"] = io::complex_json(p.e1);
        c["E2"] = io::complex_json(p.e2);
        c["R"] = io::complex_json(p.r);
        c["Z"] = p.z;
        j["two_pole"] = c;
    }
    try {
        j["golden_rule"] = golden_rule(r.model);
    } catch (const Error&) {
        j["golden_rule"] = nullptr;
    }
    try {
        j["zeno_time"] = zeno_time(r.model.ff);
    } catch (const Error&) {
        j["zeno_time"] = nullptr;
    }
    write_text(r.opt.out, j.dump(2) + "\n");
}

void cmd_reduce(Run& r) {
    json j;
    j["model"] = model_json(r);
    try {
        j["reduction"] = io::reduction_json(two_pole_reduce(r.model.ff, r.model.omega_a));
    } catch (const Error& e) {
        r.failed("reduction", e);
        j["reduction"] = nullptr;
    }
    try {
        const auto c = cascade_equivalent(r.model);
        const double s = r.scale();
        std::vector<cplx> samples;
        for (int k = -2; k <= 2; ++k) samples.emplace_back(r.model.omega_a + k * s, 0.5 * s);
        j["cascade"] = io::cascade_json(c, samples);
    } catch (const Error& e) {
        r.failed("cascade", e);
        j["cascade"] = nullptr;
    }
    write_text(r.opt.out, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------------------------
// figures: one CSV per figure, named by content

struct FigureWriter {
    Run& run;
    fs::path dir;

    void emit(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::ostringstream out;
        try {
            body(out);
            write_text((dir / name).string(), out.str());
        } catch (const Error& e) {
            run.failed("figure=" + name, e);
        }
    }
};

void cmd_figures(Run& r) {
    const std::string dir = r.opt.out.empty() ? "figures" : r.opt.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(Errc::IoError, "cannot create directory " + dir);
    FigureWriter fw{r, dir};
    const double lam = r.opt.lambda, bw = r.opt.Lambda;

    // survival with and without pulsed measurements, plus the interpolating exponential
    fw.emit("pulsed_evolution.csv", [&](std::ostream& out) {
        const LeeModel m{0.0, make_lorentzian(lam, bw)};
        const SurvivalLaw law(m);
        const double tau = 0.5 / bw;
        const double g = effective_rate_pulsed(law, tau);
        const double end = 3.0 / natural_rate(m);
        out << "t,P_free,P_measured,P_interpolated,tau\n";
        for (int i = 0; i <= 600; ++i) {
            const double t = end * i / 600.0;
            const double n = std::floor(t / tau);
            const double pm = std::pow(law.probability(tau), n) * law.probability(t - n * tau);
            out << fmt(t) << ',' << fmt(law.probability(t)) << ',' << fmt(pm) << ',' << fmt(std::exp(-g * t)) << ','
                << fmt(tau) << '\n';
        }
    });

    // Z < 1: P(t) against e^{-gamma t} and Z e^{-gamma t}, and gamma_eff(tau) against gamma
    auto curves = [&](std::ostream& out, const std::string& label, double w, bool header) {
        const LeeModel m{w, make_lorentzian(lam, bw)};
        const auto p = two_pole_closed(lam, bw, w);
        const SurvivalLaw law(m);
        if (header) out << "case,t,P,exp_gamma,Z_exp_gamma,gamma_eff,gamma\n";
        const double end = 3.0 / p.width;
        for (int i = 1; i <= 300; ++i) {
            const double t = end * i / 300.0;
            out << label << ',' << fmt(t) << ',' << fmt(law.probability(t)) << ',' << fmt(std::exp(-p.width * t)) << ','
                << fmt(p.z * std::exp(-p.width * t)) << ',' << fmt(effective_rate_pulsed(law, t)) << ',' << fmt(p.width)
                << '\n';
        }
    };
    fw.emit("renormalization_below_one.csv", [&](std::ostream& out) { curves(out, "omega_a=" + fmt(4.0 * bw), 4.0 * bw, true); });
    fw.emit("renormalization_above_one.csv", [&](std::ostream& out) {
        curves(out, "no_crossing", 0.0, true);
        curves(out, "crossing", 0.98 * bw, false);
    });

    // form factor around omega_a and the two poles
    fw.emit("form_factor_and_poles.csv", [&](std::ostream& out) {
        const double w = r.opt.omega_a;
        const auto p = two_pole_closed(lam, bw, w);
        out << "kind,x,y\n";
        for (int i = 0; i <= 400; ++i) {
            const double x = -5.0 * bw + 10.0 * bw * i / 400.0;
            out << "g2," << fmt(x) << ',' << fmt(eval_density(make_lorentzian(lam, bw), x)) << '\n';
        }
        out << "omega_a," << fmt(w) << ",0\n";
        out << "pole_E1," << fmt(p.e1.real()) << ',' << fmt(p.e1.imag()) << '\n';
        out << "pole_E2," << fmt(p.e2.real()) << ',' << fmt(p.e2.imag()) << '\n';
    });

    // cascade equivalent: Lorentzian continuum vs auxiliary level decaying into a flat one
    fw.emit("cascade_equivalent.csv", [&](std::ostream& out) {
        const auto c = cascade_equivalent({r.opt.omega_a, make_lorentzian(lam, bw)});
        out << "omega,g2_a,g2_b,omega_b,lambda\n";
        for (int i = 0; i <= 200; ++i) {
            const double x = -5.0 * bw + 10.0 * bw * i / 200.0;
            out << fmt(x) << ',' << fmt(eval_density(c.source, x)) << ',' << fmt(c.density_b(x)) << ',' << fmt(c.omega_b)
                << ',' << fmt(c.coupling) << '\n';
        }
    });

    // gamma_eff(tau) for a family of |omega_a| / Lambda
    fw.emit("gamma_eff_ratios.csv", [&](std::ostream& out) {
        out << "ratio,tau,gamma_eff,gamma\n";
        for (double ratio : {0.2, 1.0, 2.0, 4.0, 10.0}) {
            const LeeModel m{ratio * bw, make_lorentzian(lam, bw)};
            const SurvivalLaw law(m);
            const double g = natural_rate(m);
            const auto taus = detail::log_grid(1e-3 / bw, 1e3 / bw, 301);
            const auto cells = sweep<double>(taus.size(), r.opt.threads, [&](std::size_t i) { return effective_rate_pulsed(law, taus[i]); });
            for (std::size_t i = 0; i < taus.size(); ++i) {
                if (!cells[i].value) fail(Errc::InvalidArgument, "tau=" + fmt(taus[i]) + ": " + cells[i].error);
                out << fmt(ratio) << ',' << fmt(taus[i]) << ',' << fmt(*cells[i].value) << ',' << fmt(g) << '\n';
            }
        }
    });

    // continuous measurement against its large-Gamma asymptote
    fw.emit("continuous_rate.csv", [&](std::ostream& out) {
        const LeeModel m{r.opt.omega_a, make_lorentzian(lam, bw)};
        out << "Gamma,gamma_eff,asymptote\n";
        for (double g : detail::log_grid(1e-2 * bw, 1e3 * bw, 101))
            out << fmt(g) << ',' << fmt(continuous_rate(m, g)) << ',' << fmt(continuous_rate_asymptote(m, g)) << '\n';
    });
}

// ---------------------------------------------------------------------------------------------

Options load_config(const std::string& path, std::vector<Binding>& bindings) {
    Options o;
    toml::table tbl;
    try {
        tbl = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << path << ":" << e.source().begin.line << ": " << e.description();
        fail(Errc::ParseError, msg.str());
    }
    for (const auto& [key, node] : tbl) {
        std::string k(key.str());
        std::replace(k.begin(), k.end(), '_', '-');
        auto it = std::find_if(bindings.begin(), bindings.end(), [&](const Binding& b) { return b.name == k; });
        if (it == bindings.end()) fail(Errc::ParseError, path + ": unknown key '" + std::string(key.str()) + "'");
        it->from_toml(o, node);
    }
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay, measurement and Zeno-effect calculations for a level coupled to a continuum"};
    app.require_subcommand(1);
    app.fallthrough();

    Options flags;
    std::vector<Binding> bindings{
        binding("form-factor", &Options::form_factor), binding("lambda", &Options::lambda), binding("Lambda", &Options::Lambda),
        binding("gamma", &Options::gamma),             binding("omega-a", &Options::omega_a), binding("omega0", &Options::omega0),
        binding("table", &Options::table),             binding("t-grid", &Options::t_grid),   binding("tau-grid", &Options::tau_grid),
        binding("Gamma-grid", &Options::Gamma_grid),   binding("method", &Options::method),   binding("out", &Options::out),
        binding("summary", &Options::summary),         binding("tau-max", &Options::tau_max), binding("oracle-n", &Options::oracle_n),
        binding("threads", &Options::threads),
    };
    auto& b = bindings;
    b[0].flag = app.add_option("--form-factor", flags.form_factor, "lorentzian | flat | dirac | tabulated")
                    ->check(CLI::IsMember({"lorentzian", "flat", "dirac", "tabulated"}));
    b[1].flag = app.add_option("--lambda", flags.lambda, "coupling (Lorentzian, Dirac)");
    b[2].flag = app.add_option("--Lambda", flags.Lambda, "Lorentzian bandwidth");
    b[3].flag = app.add_option("--gamma", flags.gamma, "flat-band decay rate");
    b[4].flag = app.add_option("--omega-a", flags.omega_a, "energy of the initial level");
    b[5].flag = app.add_option("--omega0", flags.omega0, "Dirac level position");
    b[6].flag = app.add_option("--table", flags.table, "CSV table 'omega,g2' for the tabulated form factor");
    b[7].flag = app.add_option("--t-grid", flags.t_grid, "times: lin:a:b:n, log:a:b:n or a comma list");
    b[8].flag = app.add_option("--tau-grid", flags.tau_grid, "pulse intervals: lin:a:b:n, log:a:b:n or a comma list");
    b[9].flag = app.add_option("--Gamma-grid", flags.Gamma_grid, "measurement rates: lin:a:b:n, log:a:b:n or a comma list");
    b[10].flag = app.add_option("--method", flags.method, "comma list of two-pole, spectral, oracle, ww, short-time, rabi, strong-coupling");
    b[11].flag = app.add_option("--out", flags.out, "output file (directory for figures); stdout if omitted");
    b[12].flag = app.add_option("--summary", flags.summary, "zeno: JSON summary path (default: --out with .json)");
    b[13].flag = app.add_option("--tau-max", flags.tau_max, "zeno: upper end of the crossing search (default 1e3 / gamma)");
    b[14].flag = app.add_option("--oracle-n", flags.oracle_n, "oracle: number of continuum modes");
    b[15].flag = app.add_option("--threads", flags.threads, "worker threads for sweeps (0: all cores); output order is fixed");
    std::string config;
    app.add_option("--config", config, "TOML file with the same keys; flags take precedence")->check(CLI::ExistingFile);

    std::map<std::string, std::function<void(Run&)>> commands{
        {"survival", cmd_survival}, {"zeno", cmd_zeno},     {"poles", cmd_poles},
        {"continuous", cmd_continuous}, {"reduce", cmd_reduce}, {"figures", cmd_figures},
    };
    const std::map<std::string, std::string> help{
        {"survival", "survival amplitude and probability, one block per method"},
        {"zeno", "effective decay rate under pulsed measurement, crossings tau*"},
        {"poles", "resonance pole, residue and renormalization (JSON)"},
        {"continuous", "decay rate under continuous measurement of strength Gamma"},
        {"reduce", "two-pole reduction and cascade equivalent (JSON)"},
        {"figures", "data for the standard plots as named CSVs in the --out directory"},
    };
    for (const auto& [name, _] : commands) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Run run;
    try {
        Options o = config.empty() ? Options{} : load_config(config, bindings);
        for (const auto& bd : bindings)
            if (bd.flag->count() > 0) bd.copy(o, flags);
        run.opt = o;
        run.model = build_model(o);
        const std::string cmd = app.get_subcommands().front()->get_name();
        commands.at(cmd)(run);
    } catch (const Error& e) {
        run.failed("run", e);
    }
    for (const auto& f : run.failures) std::cerr << "error: " << f << '\n';
    return run.failures.empty() ? 0 : 1;
}
