#include "droplet/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace droplet {

BoxGrid::BoxGrid(double half_width, int nodes_per_side)
    : half_width_(half_width), m_(nodes_per_side) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw ArgumentError("BoxGrid: half_width must be positive and finite");
    if (nodes_per_side < 16 || nodes_per_side % 2 != 0)
        throw ArgumentError("BoxGrid: nodes_per_side must be even and >= 16");
    h_ = 2.0 * half_width_ / m_;
}

bool BoxGrid::contains(Complex z) const {
    return std::abs(z.real()) <= half_width_ && std::abs(z.imag()) <= half_width_;
}

std::pair<int, int> BoxGrid::locate(Complex z) const {
    if (!contains(z))
        throw DomainError("point outside grid box");
    auto clamp = [this](double t) {
        int i = int(std::floor((t + half_width_) / h_));
        return std::min(std::max(i, 0), m_ - 1);
    };
    return {clamp(z.real()), clamp(z.imag())};
}

double DiscreteMeasure::total() const {
    double h2 = grid.spacing() * grid.spacing();
    double s = 0.0, c = 0.0;
    for (double w : weights) { // Kahan, deterministic
        double y = w - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return h2 * s;
}

void write_field(const std::string& path, const ScalarField& field) {
    nlohmann::json header = {
        {"half_width", field.grid.half_width()},
        {"nodes_per_side", field.grid.nodes_per_side()},
        {"dtype", "f64-le"},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << header.dump() << "\n";
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              std::streamsize(field.values.size() * sizeof(double)));
    if (!out)
        throw Error("write failed: " + path);
}

ScalarField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open: " + path);
    std::string line;
    std::getline(in, line);
    nlohmann::json header = nlohmann::json::parse(line);
    if (header.at("dtype").get<std::string>() != "f64-le")
        throw Error("unsupported dtype in " + path);
    BoxGrid grid(header.at("half_width").get<double>(),
                 header.at("nodes_per_side").get<int>());
    ScalarField field(grid);
    in.read(reinterpret_cast<char*>(field.values.data()),
            std::streamsize(field.values.size() * sizeof(double)));
    if (std::size_t(in.gcount()) != field.values.size() * sizeof(double))
        throw Error("truncated field file: " + path);
    return field;
}

} // namespace droplet
