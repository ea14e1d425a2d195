#include "mvfcm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mvfcm {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool skip_line(const std::string& line) { return line.empty() || line.front() == '#'; }

double parse_double(const std::string& field, const std::string& source, std::size_t line_no) {
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
        throw DataError(source + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::uint64_t parse_uint_value(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

double parse_real_value(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

Matrix parse_view_text(const std::string& text, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (skip_line(line)) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            row.push_back(parse_double(trim(std::string_view(line).substr(start, comma - start)), source, line_no));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                            " fields, found " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(source + ": no data rows");

    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return out;
}

Matrix read_view_file(const std::filesystem::path& path) { return parse_view_text(slurp(path), path.string()); }

Labels parse_label_text(const std::string& text, const std::string& source) {
    Labels labels;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (skip_line(line)) continue;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc() || ptr != line.data() + line.size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": not an integer label: '" + line + "'");
        }
        if (value < 1) throw DataError(source + ":" + std::to_string(line_no) + ": labels must be >= 1");
        labels.push_back(value);
    }
    return labels;
}

Labels read_label_file(const std::filesystem::path& path) { return parse_label_text(slurp(path), path.string()); }

MultiViewDataset load_multiview(std::span<const std::filesystem::path> view_paths,
                                const std::optional<std::filesystem::path>& label_path) {
    if (view_paths.empty()) throw DataError("no view files given");
    std::vector<Matrix> views;
    std::vector<std::string> names;
    for (std::size_t p = 0; p < view_paths.size(); ++p) {
        views.push_back(read_view_file(view_paths[p]));
        names.push_back(view_paths[p].stem().string());
        if (views[p].rows() != views.front().rows()) {
            throw DataError("view " + std::to_string(p + 1) + " (" + view_paths[p].string() + ") has " +
                            std::to_string(views[p].rows()) + " rows, view 1 has " +
                            std::to_string(views.front().rows()));
        }
    }
    std::optional<Labels> labels;
    if (label_path) {
        labels = read_label_file(*label_path);
        if (static_cast<Eigen::Index>(labels->size()) != views.front().rows()) {
            throw DataError("label file " + label_path->string() + " has " + std::to_string(labels->size()) +
                            " rows, views have " + std::to_string(views.front().rows()));
        }
    }
    return MultiViewDataset(std::move(views), std::move(labels), std::move(names));
}

void write_view_file(const std::filesystem::path& path, const Matrix& view) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (Eigen::Index i = 0; i < view.rows(); ++i) {
        for (Eigen::Index j = 0; j < view.cols(); ++j) {
            if (j) out << ',';
            out << format_double(view(i, j));
        }
        out << '\n';
    }
}

void write_label_file(const std::filesystem::path& path, const Labels& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (int l : labels) out << l << '\n';
}

std::vector<std::filesystem::path> write_dataset(const MultiViewDataset& data, const std::string& prefix) {
    std::vector<std::filesystem::path> written;
    for (std::size_t p = 0; p < data.num_views(); ++p) {
        written.emplace_back(prefix + "_view" + std::to_string(p + 1) + ".csv");
        write_view_file(written.back(), data.view(p));
    }
    if (data.labels()) {
        written.emplace_back(prefix + "_labels.txt");
        write_label_file(written.back(), *data.labels());
    }
    return written;
}

KeyValues parse_key_values(const std::string& text, const std::string& source) {
    KeyValues values;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (skip_line(line)) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        auto key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        values[std::move(key)] = trim(std::string_view(line).substr(eq + 1));
    }
    return values;
}

KeyValues read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open spec file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str(), path.string());
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        auto item = trim(std::string_view(value).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

SyntheticSpec synthetic_spec_from(const KeyValues& values) {
    SyntheticSpec spec;
    for (const auto& [key, value] : values) {
        if (key == "k") {
            spec.k = parse_uint_value(key, value);
        } else if (key == "per_cluster_n") {
            spec.per_cluster_n = parse_uint_value(key, value);
        } else if (key == "view_dims") {
            spec.view_dims.clear();
            for (const auto& item : split_list(value)) spec.view_dims.push_back(parse_uint_value(key, item));
        } else if (key == "separation") {
            spec.separation = parse_real_value(key, value);
        } else if (key == "spread") {
            spec.spread = parse_real_value(key, value);
        } else if (key == "noise_view_prob") {
            spec.noise_view_prob = parse_real_value(key, value);
        } else if (key == "noise_views") {
            spec.noise_views.clear();
            for (const auto& item : split_list(value)) spec.noise_views.push_back(parse_uint_value(key, item));
        } else if (key == "noise_std") {
            spec.noise_std = parse_real_value(key, value);
        } else if (key == "seed") {
            spec.seed = parse_uint_value(key, value);
        } else {
            throw ConfigError("unknown synthetic spec key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

}  // namespace mvfcm
