#include "glctkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glctkit/errors.hpp"

namespace glctkit::io {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        while (!field.empty() && field.front() == ' ') {
            field.erase(field.begin());
        }
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

namespace {

double parse_number(const std::string& s, std::size_t lineno) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(lineno, "expected a finite number, got '" + s + "'");
    }
    return v;
}

}  // namespace

SignalVector parse_signal(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw ParseError(1, "empty signal file");
    }
    ++lineno;
    const auto header = split_csv_line(line);
    if (header != std::vector<std::string>{"vertex", "real", "imag"}) {
        throw ParseError(lineno, "expected header 'vertex,real,imag'");
    }
    std::vector<Complex> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 3) {
            throw ParseError(lineno, "expected 3 fields");
        }
        int vertex = -1;
        auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), vertex);
        if (ec != std::errc() || ptr != f[0].data() + f[0].size()) {
            throw ParseError(lineno, "bad vertex index '" + f[0] + "'");
        }
        if (vertex != static_cast<int>(values.size())) {
            throw ParseError(lineno, "vertices must be listed in ascending order starting at 0");
        }
        values.emplace_back(parse_number(f[1], lineno), parse_number(f[2], lineno));
    }
    SignalVector x(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = values[i];
    }
    return x;
}

SignalVector read_signal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open signal file '" + path.string() + "'");
    }
    return parse_signal(in);
}

void write_signal(const SignalVector& x, std::ostream& out) {
    out << "vertex,real,imag\n";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out << i << ',' << format_double(x(i).real()) << ',' << format_double(x(i).imag()) << '\n';
    }
}

void write_signal(const SignalVector& x, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write signal file '" + path.string() + "'");
    }
    write_signal(x, out);
}

}  // namespace glctkit::io
