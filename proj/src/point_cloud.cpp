#include "facref/point_cloud.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s, std::size_t line_no, std::string_view column) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ParseError(fmt::format("line {}: bad number '{}' in column {}", line_no, s, column));
    }
    return v;
}

constexpr std::array<const char*, 15> kColumns = {"x", "y", "z", "sx", "sy", "sz", "label",
                                                  "p_arch", "p_column", "p_molding", "p_floor",
                                                  "p_door", "p_window", "p_wall", "p_other"};

}  // namespace

void validate_probs(const LabelProbs& p, double tolerance) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw SchemaError(fmt::format("probability {} outside [0,1]", v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        throw SchemaError(fmt::format("probabilities sum to {:.9f}, expected 1", sum));
    }
}

std::array<long long, kLabelCount> quantize_probs(const LabelProbs& p) {
    constexpr long long kScale = 1'000'000;
    std::array<long long, kLabelCount> q{};
    std::array<double, kLabelCount> rem{};
    long long total = 0;
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        const double scaled = p[i] * static_cast<double>(kScale);
        q[i] = std::llround(scaled);
        rem[i] = scaled - static_cast<double>(q[i]);
        total += q[i];
    }
    // Largest-remainder correction; the stable index order keeps output deterministic.
    std::array<std::size_t, kLabelCount> order{};
    std::iota(order.begin(), order.end(), 0);
    while (total != kScale) {
        if (total < kScale) {
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
            q[order[0]] += 1;
            rem[order[0]] -= 1.0;
            ++total;
        } else {
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] < rem[b]; });
            for (auto i : order) {
                if (q[i] > 0) {
                    q[i] -= 1;
                    rem[i] += 1.0;
                    break;
                }
            }
            --total;
        }
    }
    return q;
}

PointCloud parse_point_cloud(std::istream& in) {
    PointCloud cloud;
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPointCloudHeader) throw ParseError(fmt::format("line 1: unexpected header '{}'", line));

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != kColumns.size()) {
            throw ParseError(fmt::format("line {}: expected {} fields, got {}", line_no, kColumns.size(), fields.size()));
        }
        PointRecord r;
        for (int a = 0; a < 3; ++a) {
            r.position[a] = parse_double(fields[a], line_no, kColumns[a]);
            r.sensor[a] = parse_double(fields[3 + a], line_no, kColumns[3 + a]);
        }
        if (!fields[6].empty()) {
            int id = -1;
            const auto [ptr, ec] = std::from_chars(fields[6].data(), fields[6].data() + fields[6].size(), id);
            if (ec != std::errc{} || ptr != fields[6].data() + fields[6].size()) {
                throw ParseError(fmt::format("line {}: bad label '{}'", line_no, fields[6]));
            }
            r.true_label = label_from_id(id);
            if (!r.true_label) throw SchemaError(fmt::format("line {}: label id {} out of range", line_no, id));
        }
        for (std::size_t i = 0; i < kLabelCount; ++i) {
            r.prob[i] = parse_double(fields[7 + i], line_no, kColumns[7 + i]);
        }
        try {
            validate_probs(r.prob);
        } catch (const SchemaError& e) {
            throw SchemaError(fmt::format("line {}: {}", line_no, e.what()));
        }
        cloud.points.push_back(r);
    }
    return cloud;
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open point cloud '{}'", path.string()));
    return parse_point_cloud(in);
}

void write_point_cloud(const PointCloud& cloud, std::ostream& out) {
    out << kPointCloudHeader << '\n';
    fmt::memory_buffer buf;
    for (const auto& r : cloud.points) {
        buf.clear();
        fmt::format_to(std::back_inserter(buf), "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},",
                       r.position.x(), r.position.y(), r.position.z(),
                       r.sensor.x(), r.sensor.y(), r.sensor.z());
        if (r.true_label) fmt::format_to(std::back_inserter(buf), "{}", index_of(*r.true_label));
        const auto q = quantize_probs(r.prob);
        for (auto v : q) {
            fmt::format_to(std::back_inserter(buf), ",{}.{:06d}", v / 1'000'000, v % 1'000'000);
        }
        buf.push_back('\n');
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write point cloud '{}'", path.string()));
    write_point_cloud(cloud, out);
}

}  // namespace facref
