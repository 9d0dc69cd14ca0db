#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vmpredict/asymptotics.hpp"
#include "vmpredict/weights.hpp"

namespace vmp::io {

using json = nlohmann::json;

/// Series CSV: header `x`, one value per line, full record x_{1-p}..x_n.
/// The sidecar JSON carries {n, p, family, theta[, decay, threshold]}.
void write_series(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                  const TimeSeries& series, const ModelSpec& spec);

struct LoadedSeries {
    TimeSeries series;
    ModelSpec spec;  // as recorded in the sidecar
};
LoadedSeries read_series(const std::filesystem::path& csv_path,
                         const std::filesystem::path& json_path);

/// Residual/weight export, columns (i, eps, w).
void write_residuals(const std::filesystem::path& path, const ResidualSet& r, const ELWeights& w);

/// Efficiency surface, columns (theta, x, tau_sq, tau_w_sq, ratio).
void write_surface(const std::filesystem::path& path, const EfficiencySurface& surface);

json model_to_json(const ModelSpec& spec);
ModelSpec model_from_json(const json& j);

/// Hex FNV-1a digest of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// Run manifest: command, parameters, seed, version, timestamp and the
/// digests of every produced file; enough to re-execute the run.
class Manifest {
public:
    Manifest(std::string command, json parameters);
    void record_output(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;
    const json& data() const { return data_; }

private:
    json data_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace vmp::io
