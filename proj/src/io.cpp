#include "vmpredict/io.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vmpredict/version.hpp"

namespace vmp::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.precision(17);
    return out;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

json model_to_json(const ModelSpec& spec) {
    json j{{"family", family_name(spec.family)}, {"theta", spec.theta}};
    if (spec.family == Family::Expar1) j["decay"] = spec.decay;
    if (spec.family == Family::Setar211) j["threshold"] = spec.threshold;
    return j;
}

ModelSpec model_from_json(const json& j) {
    ModelSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.theta = j.at("theta").get<std::vector<double>>();
    spec.decay = j.value("decay", 1.0);
    spec.threshold = j.value("threshold", 0.0);
    return spec;
}

void write_series(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                  const TimeSeries& series, const ModelSpec& spec) {
    auto csv = open_out(csv_path);
    csv << "x\n";
    for (double v : series.values) csv << v << '\n';

    json side = model_to_json(spec);
    side["n"] = series.n;
    side["p"] = series.p;
    auto js = open_out(json_path);
    js << side.dump(2) << '\n';
}

LoadedSeries read_series(const std::filesystem::path& csv_path,
                         const std::filesystem::path& json_path) {
    std::ifstream js(json_path);
    if (!js) throw std::runtime_error("cannot open sidecar: " + json_path.string());
    json side = json::parse(js);

    LoadedSeries out;
    out.spec = model_from_json(side);
    out.series.n = side.at("n").get<int>();
    out.series.p = side.at("p").get<int>();

    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open series: " + csv_path.string());
    std::string line;
    if (!std::getline(csv, line) || line != "x")
        throw std::runtime_error("series CSV must start with header 'x'");
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        out.series.values.push_back(std::stod(line));
    }
    if (static_cast<int>(out.series.values.size()) != out.series.n + out.series.p)
        throw std::runtime_error("series length does not match the sidecar n + p");
    return out;
}

void write_residuals(const std::filesystem::path& path, const ResidualSet& r, const ELWeights& w) {
    auto out = open_out(path);
    out << "i,eps,w\n";
    for (std::size_t i = 0; i < r.eps.size(); ++i)
        out << (i + 1) << ',' << r.eps[i] << ',' << w.w[i] << '\n';
}

void write_surface(const std::filesystem::path& path, const EfficiencySurface& s) {
    auto out = open_out(path);
    out << "theta,x,tau_sq,tau_w_sq,ratio\n";
    for (std::size_t i = 0; i < s.theta_grid.size(); ++i)
        for (std::size_t j = 0; j < s.x_grid.size(); ++j)
            out << s.theta_grid[i] << ',' << s.x_grid[j] << ',' << s.tau_sq[i][j] << ','
                << s.tau_w_sq[i][j] << ',' << s.ratio[i][j] << '\n';
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

Manifest::Manifest(std::string command, json parameters) {
    data_["command"] = std::move(command);
    data_["parameters"] = std::move(parameters);
    data_["version"] = VMPREDICT_VERSION;
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    data_["timestamp"] = ts.str();
    data_["outputs"] = json::array();
}

void Manifest::record_output(const std::filesystem::path& path) {
    data_["outputs"].push_back({{"path", path.string()}, {"digest", file_digest(path)}});
}

void Manifest::write(const std::filesystem::path& path) const {
    auto out = open_out(path);
    out << data_.dump(2) << '\n';
}

}  // namespace vmp::io
