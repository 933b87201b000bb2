#include "smolu/runio.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smolu {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

Config parse_lines(std::istream& in, const std::string& label) {
    Config cfg = Config::from_string("", label);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(label + ":" + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(label + ":" + std::to_string(line_no) + ": empty key");
        cfg.set(key, value, line_no);
    }
    return cfg;
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    return parse_lines(in, path);
}

Config Config::from_string(const std::string& text, const std::string& label) {
    if (text.empty()) {
        Config cfg;
        cfg.label_ = label;
        return cfg;
    }
    std::istringstream in(text);
    return parse_lines(in, label);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second.value, &pos);
        if (pos != it->second.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(key, "not a number: '" + it->second.value + "'");
    }
}

long Config::get_long(const std::string& key, long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second.value, &pos);
        if (pos != it->second.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(key, "not an integer: '" + it->second.value + "'");
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(it->second.value, &pos);
        if (pos != it->second.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(key, "not an unsigned integer: '" + it->second.value + "'");
    }
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream ss(it->second.value);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail(key, "not a number list: '" + it->second.value + "'");
        }
    }
    if (out.empty())
        fail(key, "empty list");
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    entries_[key] = ConfigEntry{value, 0};
}

void Config::fail(const std::string& key, const std::string& message) const {
    auto it = entries_.find(key);
    const int line = it == entries_.end() ? 0 : it->second.line;
    throw std::invalid_argument(label_ + ":" + std::to_string(line) + ": " + key + ": " +
                                message);
}

SimConfig sim_config_from(const Config& cfg) {
    SimConfig out;

    const std::string variant = cfg.get_string("kernel.variant", "maier-saupe");
    const double b = cfg.get_double("kernel.b", 0.0);
    if (b < 0.0)
        cfg.fail("kernel.b", "must be >= 0");
    if (variant == "maier-saupe") {
        out.kernel = KernelSpec::maier_saupe(b);
    } else if (variant == "cosine-series") {
        out.kernel = KernelSpec::cosine_series(
            cfg.get_double_list("kernel.cosine_coeffs", {0.0}), b);
    } else {
        cfg.fail("kernel.variant", "must be maier-saupe or cosine-series");
    }

    if (cfg.has("gradient.u11") || cfg.has("gradient.u12") || cfg.has("gradient.u21") ||
        cfg.has("gradient.u22")) {
        const VelocityGradient u{
            cfg.get_double("gradient.u11", 0.0), cfg.get_double("gradient.u12", 0.0),
            cfg.get_double("gradient.u21", 0.0), cfg.get_double("gradient.u22", 0.0)};
        out.flow = flow_from_gradient(u);
    } else {
        out.flow.omega = cfg.get_double("flow.omega", 0.0);
        out.flow.s = cfg.get_double("flow.s", 0.0);
        out.flow.alpha = cfg.get_double("flow.alpha", 0.0);
        if (out.flow.s < 0.0)
            cfg.fail("flow.s", "must be >= 0");
    }

    out.n_modes = int(cfg.get_long("sim.n_modes", 64));
    if (out.n_modes < 4)
        cfg.fail("sim.n_modes", "must be >= 4");
    out.dt = cfg.get_double("sim.dt", 1e-3);
    if (out.dt <= 0.0)
        cfg.fail("sim.dt", "must be > 0");
    out.t_end = cfg.get_double("sim.t_end", 200.0);
    if (out.t_end <= 0.0)
        cfg.fail("sim.t_end", "must be > 0");
    out.record_every = int(cfg.get_long("sim.record_every", 100));
    if (out.record_every < 1)
        cfg.fail("sim.record_every", "must be >= 1");

    const std::string kind = cfg.get_string("init.kind", "fourier");
    if (kind == "isotropic") {
        out.initial = InitialData::isotropic();
    } else if (kind == "nematic+" || kind == "nematic-") {
        out.initial = InitialData::nematic(kind == "nematic+" ? +1 : -1);
    } else if (kind == "fourier") {
        out.initial = InitialData::fourier(cfg.get_u64("init.seed", 1),
                                           cfg.get_double("init.amplitude", 0.02),
                                           cfg.get_double("init.decay", 0.85));
        if (out.initial.amplitude < 0.0)
            cfg.fail("init.amplitude", "must be >= 0");
        if (out.initial.decay <= 0.0 || out.initial.decay > 1.0)
            cfg.fail("init.decay", "must lie in (0, 1]");
    } else if (kind == "explicit") {
        const std::string path = cfg.get_string("init.coeffs_file", "");
        if (path.empty())
            cfg.fail("init.coeffs_file", "required for init.kind = explicit");
        out.initial = InitialData::explicit_coeffs(read_spectral_csv(path).raw());
    } else {
        cfg.fail("init.kind", "must be isotropic, nematic+, nematic-, fourier or explicit");
    }
    return out;
}

Tolerances tolerances_from(const Config& cfg) {
    Tolerances tol;
    tol.tol_s = cfg.get_double("classify.tol_steady", tol.tol_s);
    tol.tol_var = cfg.get_double("classify.tol_variation", tol.tol_var);
    if (tol.tol_s <= 0.0)
        cfg.fail("classify.tol_steady", "must be > 0");
    if (tol.tol_var <= 0.0)
        cfg.fail("classify.tol_variation", "must be > 0");
    return tol;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::map<std::string, std::string> resolve_keys(const SimConfig& cfg) {
    std::map<std::string, std::string> m;
    m["kernel.variant"] =
        cfg.kernel.variant() == KernelSpec::Variant::MaierSaupe ? "maier-saupe" : "cosine-series";
    m["kernel.b"] = format_g17(cfg.kernel.b());
    if (cfg.kernel.variant() == KernelSpec::Variant::CosineSeries) {
        std::string list;
        for (double c : cfg.kernel.cosine_coeffs())
            list += (list.empty() ? "" : ",") + format_g17(c);
        m["kernel.cosine_coeffs"] = list;
    }
    m["flow.omega"] = format_g17(cfg.flow.omega);
    m["flow.s"] = format_g17(cfg.flow.s);
    m["flow.alpha"] = format_g17(cfg.flow.alpha);
    m["sim.n_modes"] = std::to_string(cfg.n_modes);
    m["sim.dt"] = format_g17(cfg.dt);
    m["sim.t_end"] = format_g17(cfg.t_end);
    m["sim.record_every"] = std::to_string(cfg.record_every);
    switch (cfg.initial.kind) {
    case InitialData::Kind::Isotropic:
        m["init.kind"] = "isotropic";
        break;
    case InitialData::Kind::Nematic:
        m["init.kind"] = cfg.initial.sign > 0 ? "nematic+" : "nematic-";
        break;
    case InitialData::Kind::FourierPerturbation:
        m["init.kind"] = "fourier";
        m["init.seed"] = std::to_string(cfg.initial.seed);
        m["init.amplitude"] = format_g17(cfg.initial.amplitude);
        m["init.decay"] = format_g17(cfg.initial.decay);
        break;
    case InitialData::Kind::ExplicitCoeffs:
        m["init.kind"] = "explicit";
        break;
    }
    return m;
}

void write_manifest(const RunManifest& man, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << "# smolu run manifest (re-feedable as --config)\n";
    out << "# command: " << man.command << "\n";
    out << "# config: " << (man.config_path.empty() ? "<defaults>" : man.config_path) << "\n";
    out << "# version: " << man.version << "\n";
    out << "# started: " << man.started << "\n";
    out << "# finished: " << man.finished << "\n";
    for (const auto& [k, v] : man.resolved)
        out << k << " = " << v << "\n";
}

void write_trajectory_csv(const SimResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << "t,y1,s1,y2,s2,y3,s3,y4,s4,l2,h1,energy,min_f\n";
    for (const TrajectoryRecord& rec : res.records) {
        out << format_g17(rec.t);
        for (int k = 0; k < 4; ++k)
            out << ',' << format_g17(rec.y[std::size_t(k)]) << ','
                << format_g17(rec.s[std::size_t(k)]);
        out << ',' << format_g17(rec.l2) << ',' << format_g17(rec.h1) << ',';
        if (rec.energy)
            out << format_g17(*rec.energy);
        out << ',' << format_g17(rec.min_f) << "\n";
    }
}

void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << "b,s,omega,kind,period,residual_steady,residual_strobe,time_variation,seed\n";
    for (const SweepCell& cell : cells) {
        out << format_g17(cell.b) << ',' << format_g17(cell.s) << ',' << format_g17(cell.omega)
            << ',' << to_string(cell.result.kind) << ',' << format_g17(cell.result.period) << ','
            << format_g17(cell.result.residual_steady) << ','
            << format_g17(cell.result.residual_strobe) << ','
            << format_g17(cell.result.time_variation) << ',' << cell.seed << "\n";
    }
}

} // namespace smolu
