#pragma once
// Config loading/validation with field-path errors, resolved-config echo and
// hashing, the binary coefficient container (length-prefixed JSON header +
// little-endian f64 payload), and CSV/JSON writers for reports.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "floerlab/dynamics.hpp"
#include "floerlab/fredholm.hpp"
#include "floerlab/model.hpp"
#include "floerlab/spectrum.hpp"

namespace floerlab {

struct RunConfig {
    ModelSpec spec;
    int n_max = 8;
    int m_max = -1;  // resolved to 4 * n_max^d when missing
    CouplingSpec coupling;
    double sigma = 0.5;
    double tol = 1e-10;
    int max_iter = 30;
    int ell = -1;  // resolved to n_max when missing
    std::vector<int> ell_sweep;
    double s_half_width = 8.0;
    double ds = 0.25;
    std::vector<double> h_values;
    unsigned long long seed = 12345;
    std::string out_dir = "runs";

    nlohmann::json resolved;  // the config with all defaults filled
};

// Parse/validate; throws ValidationError with a path-to-field message.
RunConfig config_from_json(const nlohmann::json& j);
// Reads the file; parse errors propagate as nlohmann::json::parse_error.
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& s);
std::string config_hash(const RunConfig& c);  // hex FNV-1a of the resolved dump

// {"version": ..., "config_hash": ...} embedded in every output.
nlohmann::json meta_json(const RunConfig& c);

void write_json(const std::string& path, const nlohmann::json& j);

// ---- binary container ------------------------------------------------------

void write_container(const std::string& path, const nlohmann::json& header,
                     const std::vector<double>& data);
std::pair<nlohmann::json, std::vector<double>> read_container(const std::string& path);

// ---- CSV -------------------------------------------------------------------

// One "# key=value ..." comment line from meta, then the header row.
void write_spectrum_csv(const std::string& path, const SpectrumReport& rep, double h_used,
                        const nlohmann::json& meta);

// Field coefficients of a loop vector: n components, m, re, im.
void write_loop_csv(const std::string& path, const LoopBasis& b, const Eigen::VectorXd& xi,
                    const nlohmann::json& meta);

nlohmann::json verification_to_json(const VerificationReport& rep, const nlohmann::json& meta);
void write_trend_csv(const std::string& path, const VerificationReport& rep,
                     const nlohmann::json& meta);

nlohmann::json spectrum_to_json(const SpectrumReport& rep, const nlohmann::json& meta);

nlohmann::json model_to_json(const ModelSpec& spec, int n_max, int m_max);

}  // namespace floerlab
