#pragma once

#include "smolu/dynamics.hpp"
#include "smolu/lab.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Flat key = value run configuration ('#' comments, dotted keys), the run
// manifest, and the CSV writers shared by the command-line front end.

namespace smolu {

struct ConfigEntry {
    std::string value;
    int line = 0;
};

class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text, const std::string& label = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value, int line = 0);
    const std::map<std::string, ConfigEntry>& entries() const { return entries_; }
    const std::string& label() const { return label_; }

    // error text "key (line N): ..." for value complaints
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

private:
    std::map<std::string, ConfigEntry> entries_;
    std::string label_;
};

// materialized simulation config; throws std::invalid_argument with the
// offending key named on bad values
SimConfig sim_config_from(const Config& cfg);
Tolerances tolerances_from(const Config& cfg);

struct RunManifest {
    std::string command;
    std::string config_path;
    std::string version;
    std::string started;
    std::string finished;
    std::map<std::string, std::string> resolved; // every key that affects the run
};

// manifest doubles as a re-feedable config: metadata as comments, resolved
// parameters as plain key = value lines
void write_manifest(const RunManifest& m, const std::string& path);

// resolved key set for a simulation config (defaults materialized)
std::map<std::string, std::string> resolve_keys(const SimConfig& cfg);

std::string format_g17(double v);

void write_trajectory_csv(const SimResult& res, const std::string& path);
void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path);

} // namespace smolu
