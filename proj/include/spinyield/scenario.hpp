// scenario.hpp: run configuration, figure presets, and sweep orchestration.
// This is the layer behind the command-line surface: it turns a flat
// key-value config into engine calls and a result table ready for emission.
#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spinyield/closed.hpp"
#include "spinyield/collective.hpp"
#include "spinyield/noise.hpp"
#include "spinyield/rf.hpp"
#include "spinyield/system.hpp"
#include "spinyield/units.hpp"

namespace spinyield::scenario {

inline constexpr const char* kVersion = "0.1.0";

// Bad user input. Messages name the offending key (and line where known);
// the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Engine { auto_pick, full, collective };
enum class Route { auto_pick, spectral, quadrature, resolvent, stepped };
enum class NoiseAxis { vertical, parallel };

// Which drive frequency an rf run means by "resonant": the model's exact
// dark-coherence resonance 2*gamma*B0, or the 1.315 MHz (ordinary) tone
// quoted in the robin disorientation experiments.
enum class Resonance { exact, quoted };

struct RfConfig {
    double b_rf = 0;      // amplitude, tesla
    Resonance resonance = Resonance::exact;
    double omega = 0;     // explicit drive frequency, rad/s; 0 defers to resonance
    double t_max = 0;     // trajectory horizon, s; 0 picks 12/k
    long steps = 0;       // step count; 0 picks the default budget
};

struct ScenarioConfig {
    std::string label = "run";
    int n_nuclei = 0;
    std::vector<sys::HyperfineTensor> tensors;
    double b0 = 0;                 // static field magnitude, tesla
    double phi = 0;                // field azimuth, rad
    std::vector<double> thetas;    // field polar angles, rad
    sys::StateKind initial_state = sys::StateKind::singlet;
    double k = 1e4;                // recombination rate, 1/s
    Engine engine = Engine::auto_pick;
    Route route = Route::auto_pick;
    double magnetic_rate = 0;      // Gamma_B, 1/s
    NoiseAxis magnetic_axis = NoiseAxis::vertical;
    double hyperfine_rate = 0;     // Gamma_H, 1/s
    bool has_rf = false;
    RfConfig rf;
    units::UnitSystem units{};

    bool has_noise() const { return magnetic_rate > 0 || hyperfine_rate > 0; }

    // The collective engine needs one shared axial tensor and a purely
    // coherent flow; anything else falls back to the full Hilbert space.
    bool collective_eligible() const {
        if (n_nuclei < 1 || has_noise() || has_rf) return false;
        if (static_cast<int>(tensors.size()) != n_nuclei) return false;
        const sys::HyperfineTensor& first = tensors.front();
        if (!first.axial()) return false;
        for (const sys::HyperfineTensor& t : tensors)
            if (t.ax != first.ax || t.ay != first.ay || t.az != first.az) return false;
        return true;
    }

    std::string collective_obstacle() const {
        if (n_nuclei < 1) return "at least one nucleus";
        if (has_rf) return "no rf drive";
        if (has_noise()) return "no noise channels";
        for (const sys::HyperfineTensor& t : tensors)
            if (!t.axial()) return "axial tensors (ax == ay)";
        return "one tensor shared by every nucleus";
    }

    Engine resolved_engine() const {
        if (engine != Engine::auto_pick) return engine;
        bool route_fits = route == Route::auto_pick || route == Route::spectral;
        return (route_fits && collective_eligible()) ? Engine::collective : Engine::full;
    }

    Route resolved_route() const {
        if (has_rf) return Route::stepped;
        if (route != Route::auto_pick) return route;
        return has_noise() ? Route::resolvent : Route::spectral;
    }

    void validate() const {
        if (label.empty()) throw ConfigError("label: must not be empty");
        for (char c : label)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' &&
                c != '-')
                throw ConfigError("label: '" + label + "' is not a safe file stem");
        try {
            sys::SpinSystem{n_nuclei, tensors}.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("system: ") + e.what());
        }
        for (const sys::HyperfineTensor& t : tensors)
            if (!std::isfinite(t.ax) || !std::isfinite(t.ay) || !std::isfinite(t.az))
                throw ConfigError("tensor: components must be finite");
        if (!std::isfinite(b0) || b0 < 0)
            throw ConfigError("field.b0: must be a finite nonnegative field");
        if (!std::isfinite(phi)) throw ConfigError("field.phi: must be finite");
        if (thetas.empty()) throw ConfigError("theta: grid is empty");
        for (double th : thetas)
            if (!std::isfinite(th)) throw ConfigError("theta: grid holds a non-finite angle");
        if (!std::isfinite(k) || k <= 0) throw ConfigError("k: must be a positive rate");
        if (!std::isfinite(magnetic_rate) || magnetic_rate < 0)
            throw ConfigError("noise.magnetic.rate: must be a nonnegative rate");
        if (!std::isfinite(hyperfine_rate) || hyperfine_rate < 0)
            throw ConfigError("noise.hyperfine.rate: must be a nonnegative rate");
        if (hyperfine_rate > 0 && n_nuclei != 1)
            throw ConfigError(
                "noise.hyperfine.rate: hyperfine noise covers exactly one nucleus, got " +
                std::to_string(n_nuclei));
        if (has_rf) {
            if (has_noise())
                throw ConfigError("rf: cannot be combined with noise channels");
            if (!std::isfinite(rf.b_rf) || rf.b_rf < 0)
                throw ConfigError("rf.b_rf: must be a nonnegative amplitude");
            if (!std::isfinite(rf.omega) || rf.omega < 0)
                throw ConfigError("rf.omega: must be a nonnegative frequency");
            if (rf.t_max != 0 && rf.t_max < 10 / k)
                throw ConfigError("rf.t_max: below 10/k, cuts the decay envelope short");
            if (rf.steps < 0) throw ConfigError("rf.steps: must be nonnegative");
            if (route != Route::auto_pick && route != Route::stepped)
                throw ConfigError("route: rf runs are time-stepped; use auto or stepped");
        } else if (route == Route::stepped) {
            throw ConfigError("route: stepped applies to rf runs only");
        }
        if (route == Route::spectral && has_noise())
            throw ConfigError(
                "route: spectral handles closed runs only; use resolvent or quadrature");
        if (engine == Engine::collective) {
            if (!collective_eligible())
                throw ConfigError("engine: collective requires " + collective_obstacle());
            if (route == Route::quadrature || route == Route::resolvent)
                throw ConfigError(
                    "route: the collective engine evaluates spectrally; use auto or spectral");
        }
    }
};

// %.12g, the one number format shared by metadata, CSV, and SVG. Twelve
// significant digits reparse to a double that prints the same way again.
inline std::string g12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace detail {

inline const char* engine_name(Engine e) {
    return e == Engine::collective ? "collective" : "full";
}

inline const char* route_name(Route r) {
    switch (r) {
        case Route::spectral: return "spectral";
        case Route::quadrature: return "quadrature";
        case Route::resolvent: return "resolvent";
        case Route::stepped: return "stepped";
        case Route::auto_pick: break;
    }
    return "auto";
}

inline const char* state_name(sys::StateKind kind) {
    switch (kind) {
        case sys::StateKind::singlet: return "singlet";
        case sys::StateKind::triplet0: return "triplet0";
        case sys::StateKind::dark_incoherent: return "dark";
    }
    return "singlet";
}

inline rf::RfField drive_for(const ScenarioConfig& cfg, double theta) {
    rf::RfField drive;
    drive.b_rf = cfg.rf.b_rf;
    if (cfg.rf.omega > 0)
        drive.omega = cfg.rf.omega;
    else if (cfg.rf.resonance == Resonance::quoted)
        drive.omega = 2 * M_PI * 1.315e6;
    else
        drive.omega = 2 * cfg.units.gamma * cfg.b0;
    drive.alpha = theta + M_PI / 2;  // drive normal to the static field, in plane
    return drive;
}

inline std::vector<noise::NoiseSpec> noise_specs(const ScenarioConfig& cfg, double theta) {
    std::vector<noise::NoiseSpec> specs;
    if (cfg.magnetic_rate > 0) {
        double axis =
            cfg.magnetic_axis == NoiseAxis::vertical ? theta + M_PI / 2 : theta;
        specs.push_back({noise::Kind::magnetic, cfg.magnetic_rate, axis});
    }
    if (cfg.hyperfine_rate > 0)
        specs.push_back({noise::Kind::hyperfine, cfg.hyperfine_rate, 0});
    return specs;
}

inline closed::YieldRecord evaluate_point(const ScenarioConfig& cfg, Engine eng,
                                          Route rt, double theta) {
    sys::SpinSystem system{cfg.n_nuclei, cfg.tensors};
    sys::FieldVector field{cfg.b0, theta, cfg.phi};
    Matrix rho_e = sys::initial_state(cfg.initial_state, theta, cfg.phi);
    switch (rt) {
        case Route::spectral:
            if (eng == Engine::collective) {
                const sys::HyperfineTensor& t = cfg.tensors.front();
                return collective::sector_yield(cfg.n_nuclei, 2 * t.ax, 2 * t.az, field,
                                                rho_e, cfg.k, cfg.units);
            }
            return closed::yield_spectral(system, field, rho_e, cfg.k, cfg.units);
        case Route::quadrature:
            if (cfg.has_noise())
                return noise::integrated_yield(system, field, noise_specs(cfg, theta),
                                               rho_e, cfg.k, 0, 0, cfg.units);
            return closed::yield_quadrature(system, field, rho_e, cfg.k, 0, 0, cfg.units);
        case Route::resolvent:
            return noise::resolvent_yield(system, field, noise_specs(cfg, theta), rho_e,
                                          cfg.k, cfg.units);
        case Route::stepped:
            return rf::rf_yield(system, field, drive_for(cfg, theta), rho_e, cfg.k,
                                cfg.rf.t_max, cfg.rf.steps, cfg.units);
        case Route::auto_pick: break;
    }
    throw std::logic_error("evaluate_point: route left unresolved");
}

// Metadata block: every resolved input as a config-grammar line, so the
// header of an emitted table can be fed back through parse_config. The
// wall clock stays out of here on purpose; identical runs must emit
// identical bytes.
inline std::vector<std::string> describe(const ScenarioConfig& cfg, Engine eng,
                                         Route rt) {
    std::vector<std::string> m;
    m.push_back(std::string("spinyield ") + kVersion);
    m.push_back("schema = 1");
    m.push_back("label = " + cfg.label);
    m.push_back("system.n_nuclei = " + std::to_string(cfg.n_nuclei));
    for (int i = 0; i < cfg.n_nuclei; ++i) {
        std::string p = "tensor." + std::to_string(i + 1) + ".";
        m.push_back(p + "ax = " + g12(cfg.tensors[i].ax));
        m.push_back(p + "ay = " + g12(cfg.tensors[i].ay));
        m.push_back(p + "az = " + g12(cfg.tensors[i].az));
    }
    m.push_back("field.b0 = " + g12(cfg.b0));
    m.push_back("field.phi = " + g12(cfg.phi));
    std::string grid = "theta.list_deg =";
    for (double th : cfg.thetas) grid += " " + g12(th * 180 / M_PI);
    m.push_back(grid);
    m.push_back(std::string("initial_state = ") + state_name(cfg.initial_state));
    m.push_back("k = " + g12(cfg.k));
    m.push_back(std::string("engine = ") + engine_name(eng));
    m.push_back(std::string("route = ") + route_name(rt));
    if (cfg.magnetic_rate > 0) {
        m.push_back("noise.magnetic.rate = " + g12(cfg.magnetic_rate));
        m.push_back(std::string("noise.magnetic.axis = ") +
                    (cfg.magnetic_axis == NoiseAxis::vertical ? "vertical" : "parallel"));
    }
    if (cfg.hyperfine_rate > 0)
        m.push_back("noise.hyperfine.rate = " + g12(cfg.hyperfine_rate));
    if (cfg.has_rf) {
        m.push_back("rf.b_rf = " + g12(cfg.rf.b_rf));
        if (cfg.rf.omega > 0)
            m.push_back("rf.omega = " + g12(cfg.rf.omega));
        else
            m.push_back(std::string("rf.resonance = ") +
                        (cfg.rf.resonance == Resonance::quoted ? "quoted" : "exact"));
        m.push_back("rf.t_max = " + g12(cfg.rf.t_max > 0 ? cfg.rf.t_max : 12 / cfg.k));
        m.push_back("rf.steps = " + std::to_string(cfg.rf.steps));
    }
    return m;
}

}  // namespace detail

// Rows are exactly what the CSV carries; meta lines get a '#' when emitted.
// wall_seconds is stderr material and never reaches the output bytes.
struct ResultTable {
    std::string label;
    std::vector<std::string> meta;
    std::vector<closed::YieldRecord> rows;
    double wall_seconds = 0;
};

inline ResultTable run_scenario(const ScenarioConfig& cfg, int jobs = 1) {
    cfg.validate();
    Engine eng = cfg.resolved_engine();
    Route rt = cfg.resolved_route();

    std::vector<double> thetas = cfg.thetas;
    std::sort(thetas.begin(), thetas.end());  // rows ordered by angle

    auto t0 = std::chrono::steady_clock::now();
    std::vector<closed::YieldRecord> rows(thetas.size());
    auto work = [&](size_t i) { rows[i] = detail::evaluate_point(cfg, eng, rt, thetas[i]); };

    int workers = std::clamp<int>(jobs, 1, 256);
    workers = std::min<int>(workers, static_cast<int>(thetas.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < thetas.size(); ++i) work(i);
    } else {
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next++; i < thetas.size(); i = next++) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < workers; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    ResultTable table;
    table.label = cfg.label;
    table.meta = detail::describe(cfg, eng, rt);
    table.rows = std::move(rows);
    table.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return table;
}

// ---------------------------------------------------------------------------
// Config parsing: flat `key = value` lines, '#' comments, dotted sections.
// Quantities may carry a unit suffix ("5 lambda", "0.1 k", "46 uT", "90 deg",
// "1.315 MHz"); plain numbers are SI (tesla, rad, rad/s, 1/s, s).

namespace detail {

enum class Dim { plain, field, coupling, angle, rate, frequency, time };

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline double unit_factor(Dim dim, const std::string& suffix, const std::string& key,
                          const units::UnitSystem& units, double k) {
    if (suffix.empty()) return 1;
    auto reject = [&](const char* accepted) -> double {
        throw ConfigError(key + ": unknown unit '" + suffix + "' (accepted: " +
                          accepted + ")");
    };
    switch (dim) {
        case Dim::plain:
            return reject("none");
        case Dim::field:
            if (suffix == "T") return 1;
            if (suffix == "uT") return 1e-6;
            if (suffix == "nT") return 1e-9;
            return reject("T, uT, nT");
        case Dim::coupling:
        case Dim::frequency:
            if (suffix == "lambda") return units.lambda();
            if (suffix == "MHz") return 2 * M_PI * 1e6;
            if (suffix == "kHz") return 2 * M_PI * 1e3;
            if (suffix == "Hz") return 2 * M_PI;
            return reject("lambda, MHz, kHz, Hz (plain = rad/s)");
        case Dim::angle:
            if (suffix == "deg") return M_PI / 180;
            if (suffix == "rad") return 1;
            return reject("deg, rad");
        case Dim::rate:
            if (suffix == "k") return k;
            return reject("k (plain = 1/s)");
        case Dim::time:
            if (suffix == "s") return 1;
            if (suffix == "ms") return 1e-3;
            if (suffix == "us") return 1e-6;
            return reject("s, ms, us");
    }
    return 1;
}

struct RawValue {
    std::string text;
    int line = 0;
    bool used = false;
};

// The parsed key-value soup plus typed, consuming getters. Whatever is
// still unconsumed at the end is an unrecognized key.
struct KeyValues {
    std::map<std::string, RawValue> entries;
    units::UnitSystem units{};
    double k_scale = 0;  // scenario k, set before rate keys are read

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    bool has_prefix(const std::string& prefix) const {
        auto it = entries.lower_bound(prefix);
        return it != entries.end() && it->first.compare(0, prefix.size(), prefix) == 0;
    }

    RawValue* claim(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string word(const std::string& key) {
        RawValue* rv = claim(key);
        if (!rv) throw ConfigError(key + ": required");
        if (rv->text.find_first_of(" \t") != std::string::npos)
            throw ConfigError(key + ": expected a single word, got '" + rv->text + "'");
        return rv->text;
    }

    std::string word_or(const std::string& key, const std::string& dflt) {
        return has(key) ? word(key) : dflt;
    }

    double number(const std::string& key, Dim dim) {
        RawValue* rv = claim(key);
        if (!rv) throw ConfigError(key + ": required");
        const char* s = rv->text.c_str();
        char* end = nullptr;
        double x = std::strtod(s, &end);
        if (end == s)
            throw ConfigError(key + ": expected a number, got '" + rv->text + "'");
        if (!std::isfinite(x)) throw ConfigError(key + ": non-finite value");
        return x * unit_factor(dim, trim(std::string(end)), key, units, k_scale);
    }

    double number_or(const std::string& key, Dim dim, double dflt) {
        return has(key) ? number(key, dim) : dflt;
    }

    long integer(const std::string& key) {
        RawValue* rv = claim(key);
        if (!rv) throw ConfigError(key + ": required");
        const char* s = rv->text.c_str();
        char* end = nullptr;
        long x = std::strtol(s, &end, 10);
        if (end == s || !trim(std::string(end)).empty())
            throw ConfigError(key + ": expected an integer, got '" + rv->text + "'");
        return x;
    }

    long integer_or(const std::string& key, long dflt) {
        return has(key) ? integer(key) : dflt;
    }

    std::vector<double> angle_list_deg(const std::string& key) {
        RawValue* rv = claim(key);
        if (!rv) throw ConfigError(key + ": required");
        std::vector<double> out;
        std::istringstream in(rv->text);
        std::string token;
        while (in >> token) {
            const char* s = token.c_str();
            char* end = nullptr;
            double x = std::strtod(s, &end);
            if (end == s || *end != '\0')
                throw ConfigError(key + ": '" + token + "' is not a number");
            out.push_back(x * M_PI / 180);
        }
        if (out.empty()) throw ConfigError(key + ": no angles given");
        return out;
    }

    void finish() const {
        for (const auto& [key, rv] : entries)
            if (!rv.used)
                throw ConfigError("unrecognized key '" + key + "' (line " +
                                  std::to_string(rv.line) + ")");
    }
};

inline bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
                  c == '_';
        if (!ok) return false;
    }
    return true;
}

inline KeyValues split_lines(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError("line " + std::to_string(lineno) + ": malformed key '" +
                              key + "'");
        if (value.empty())
            throw ConfigError(key + ": empty value (line " + std::to_string(lineno) +
                              ")");
        if (!kv.entries.emplace(key, RawValue{value, lineno, false}).second)
            throw ConfigError("duplicate key '" + key + "' (line " +
                              std::to_string(lineno) + ")");
    }
    return kv;
}

template <typename T>
inline T keyword(KeyValues& kv, const std::string& key,
                 std::initializer_list<std::pair<const char*, T>> table, T dflt) {
    if (!kv.has(key)) return dflt;
    std::string w = kv.word(key);
    std::string accepted;
    for (const auto& [name, value] : table) {
        if (w == name) return value;
        if (!accepted.empty()) accepted += ", ";
        accepted += name;
    }
    throw ConfigError(key + ": unknown value '" + w + "' (accepted: " + accepted + ")");
}

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& text,
                                   const std::string& fallback_label = "run") {
    using detail::Dim;
    detail::KeyValues kv = detail::split_lines(text);

    std::string schema = kv.word("schema");
    if (schema != "1")
        throw ConfigError("schema: this build reads schema 1, got '" + schema + "'");

    ScenarioConfig cfg;
    kv.units = cfg.units;
    cfg.label = kv.word_or("label", fallback_label);
    cfg.k = kv.number_or("k", Dim::plain, cfg.units.k_default);
    kv.k_scale = cfg.k;

    long n = kv.integer_or("system.n_nuclei", 0);
    if (n < 0 || n > 8)
        throw ConfigError("system.n_nuclei: expected 0..8, got " + std::to_string(n));
    cfg.n_nuclei = static_cast<int>(n);

    bool shared_tensor = kv.has_prefix("tensor.all.");
    if (cfg.n_nuclei > 0) {
        if (shared_tensor) {
            sys::HyperfineTensor t{kv.number("tensor.all.ax", Dim::coupling),
                                   kv.number("tensor.all.ay", Dim::coupling),
                                   kv.number("tensor.all.az", Dim::coupling)};
            cfg.tensors.assign(cfg.n_nuclei, t);
        } else {
            for (int i = 1; i <= cfg.n_nuclei; ++i) {
                std::string p = "tensor." + std::to_string(i) + ".";
                cfg.tensors.push_back({kv.number(p + "ax", Dim::coupling),
                                       kv.number(p + "ay", Dim::coupling),
                                       kv.number(p + "az", Dim::coupling)});
            }
        }
    }

    bool grid_style = kv.has("theta.start") || kv.has("theta.stop") || kv.has("theta.count");
    bool list_style = kv.has("theta.list_deg");
    if (grid_style && list_style)
        throw ConfigError("theta: give theta.start/stop/count or theta.list_deg, not both");
    if (!grid_style && !list_style)
        throw ConfigError("theta: grid missing (theta.start/stop/count or theta.list_deg)");
    if (grid_style) {
        double start = kv.number("theta.start", Dim::angle);
        double stop = kv.number("theta.stop", Dim::angle);
        long count = kv.integer("theta.count");
        if (count < 1) throw ConfigError("theta.count: need at least one point");
        if (count > 100000) throw ConfigError("theta.count: grid too large");
        cfg.thetas.resize(count);
        for (long i = 0; i < count; ++i)
            cfg.thetas[i] =
                count == 1 ? start : start + (stop - start) * i / double(count - 1);
    } else {
        cfg.thetas = kv.angle_list_deg("theta.list_deg");
    }

    cfg.b0 = kv.number("field.b0", Dim::field);
    cfg.phi = kv.number_or("field.phi", Dim::angle, 0);

    cfg.initial_state = detail::keyword<sys::StateKind>(
        kv, "initial_state",
        {{"singlet", sys::StateKind::singlet},
         {"triplet0", sys::StateKind::triplet0},
         {"dark", sys::StateKind::dark_incoherent},
         {"dark_incoherent", sys::StateKind::dark_incoherent}},
        sys::StateKind::singlet);
    cfg.engine = detail::keyword<Engine>(kv, "engine",
                                         {{"auto", Engine::auto_pick},
                                          {"full", Engine::full},
                                          {"collective", Engine::collective}},
                                         Engine::auto_pick);
    cfg.route = detail::keyword<Route>(kv, "route",
                                       {{"auto", Route::auto_pick},
                                        {"spectral", Route::spectral},
                                        {"quadrature", Route::quadrature},
                                        {"resolvent", Route::resolvent},
                                        {"stepped", Route::stepped}},
                                       Route::auto_pick);

    cfg.magnetic_rate = kv.number_or("noise.magnetic.rate", Dim::rate, 0);
    if (kv.has("noise.magnetic.axis")) {
        if (!(cfg.magnetic_rate > 0))
            throw ConfigError("noise.magnetic.axis: set without noise.magnetic.rate");
        cfg.magnetic_axis = detail::keyword<NoiseAxis>(
            kv, "noise.magnetic.axis",
            {{"vertical", NoiseAxis::vertical}, {"parallel", NoiseAxis::parallel}},
            NoiseAxis::vertical);
    } else if (cfg.magnetic_rate > 0) {
        throw ConfigError("noise.magnetic.axis: required when noise.magnetic.rate is set");
    }
    cfg.hyperfine_rate = kv.number_or("noise.hyperfine.rate", Dim::rate, 0);

    cfg.has_rf = kv.has_prefix("rf.");
    if (cfg.has_rf) {
        cfg.rf.b_rf = kv.number("rf.b_rf", Dim::field);
        bool explicit_omega = kv.has("rf.omega");
        bool named_resonance = kv.has("rf.resonance");
        if (explicit_omega && named_resonance)
            throw ConfigError("rf.omega: conflicts with rf.resonance; give one of them");
        if (explicit_omega)
            cfg.rf.omega = kv.number("rf.omega", Dim::frequency);
        else
            cfg.rf.resonance = detail::keyword<Resonance>(
                kv, "rf.resonance",
                {{"exact", Resonance::exact}, {"quoted", Resonance::quoted}},
                Resonance::exact);
        cfg.rf.t_max = kv.number_or("rf.t_max", Dim::time, 0);
        cfg.rf.steps = kv.integer_or("rf.steps", 0);
    }

    kv.finish();
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Figure presets. Each preset is a bundle of fully resolved configs, one
// per curve, labeled so the emitted files sort next to each other.

namespace detail {

inline std::vector<double> quarter_grid(int count) {
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) grid[i] = (M_PI / 2) * i / double(count - 1);
    return grid;
}

inline ScenarioConfig stock_pair(const std::string& label) {
    ScenarioConfig cfg;
    cfg.label = label;
    cfg.n_nuclei = 1;
    double lam = cfg.units.lambda();
    cfg.tensors = {{3 * lam, 3 * lam, 5 * lam}};
    cfg.b0 = cfg.units.b_ref;
    cfg.thetas = quarter_grid(91);
    cfg.k = cfg.units.k_default;
    return cfg;
}

template <typename Apply>
inline void noise_family(std::vector<ScenarioConfig>& members, const char* stem,
                         Apply apply) {
    const double factors[] = {0, 0.01, 0.1, 1, 10};
    const char* tags[] = {"0", "0.01k", "0.1k", "1k", "10k"};
    for (int i = 0; i < 5; ++i) {
        ScenarioConfig cfg = stock_pair(std::string(stem) + "_gamma" + tags[i]);
        apply(cfg, factors[i] * cfg.k);
        members.push_back(cfg);
    }
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
    return {"fig1", "fig2a", "fig2b", "fig3", "figA1", "figA2", "figA3", "figA4"};
}

inline std::vector<ScenarioConfig> preset(const std::string& name) {
    std::vector<ScenarioConfig> members;
    if (name == "fig1") {
        members.push_back(detail::stock_pair("fig1"));
    } else if (name == "fig2a") {
        detail::noise_family(members, "fig2a", [](ScenarioConfig& cfg, double rate) {
            cfg.magnetic_rate = rate;
            cfg.magnetic_axis = NoiseAxis::vertical;
        });
    } else if (name == "fig2b") {
        detail::noise_family(members, "fig2b", [](ScenarioConfig& cfg, double rate) {
            cfg.magnetic_rate = rate;
            cfg.magnetic_axis = NoiseAxis::parallel;
        });
    } else if (name == "fig3") {
        detail::noise_family(members, "fig3", [](ScenarioConfig& cfg, double rate) {
            cfg.hyperfine_rate = rate;
        });
    } else if (name == "figA1") {
        for (int n = 1; n <= 4; ++n) {
            ScenarioConfig cfg = detail::stock_pair("figA1_n" + std::to_string(n));
            double lam = cfg.units.lambda();
            cfg.n_nuclei = n;
            cfg.tensors.assign(n, {1.5 * lam, 1.5 * lam, 2.5 * lam});
            members.push_back(cfg);
        }
    } else if (name == "figA2") {
        const double fields[] = {32.2e-6, 46e-6, 59.8e-6};
        const char* tags[] = {"32.2uT", "46uT", "59.8uT"};
        for (int i = 0; i < 3; ++i) {
            ScenarioConfig cfg = detail::stock_pair(std::string("figA2_b") + tags[i]);
            cfg.b0 = fields[i];
            members.push_back(cfg);
        }
    } else if (name == "figA3") {
        // 19 angles keep the stepped trajectories affordable; the rf members
        // expose both readings of "resonant" (2 gamma B0 and the quoted tone).
        ScenarioConfig base = detail::stock_pair("figA3_base");
        base.thetas = detail::quarter_grid(19);
        members.push_back(base);
        ScenarioConfig driven = base;
        driven.label = "figA3_rf";
        driven.has_rf = true;
        driven.rf.b_rf = 150e-9;
        members.push_back(driven);
        ScenarioConfig quoted = driven;
        quoted.label = "figA3_rf_quoted";
        quoted.rf.resonance = Resonance::quoted;
        members.push_back(quoted);
    } else if (name == "figA4") {
        for (int n = 1; n <= 3; ++n) {
            ScenarioConfig cfg = detail::stock_pair("figA4_n" + std::to_string(n));
            double lam = cfg.units.lambda();
            cfg.n_nuclei = n;
            cfg.tensors.assign(n, {5 * lam, 5 * lam, 5 * lam});
            cfg.initial_state = sys::StateKind::triplet0;
            members.push_back(cfg);
        }
    } else {
        std::string msg = "unknown preset '" + name + "'; available:";
        for (const std::string& p : preset_names()) msg += " " + p;
        throw ConfigError(msg);
    }
    return members;
}

}  // namespace spinyield::scenario
