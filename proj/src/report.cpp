#include "wrflow/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wrflow/errors.hpp"

namespace wrflow {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Report::set_raw(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

const std::string& Report::get_raw(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    throw ParseError("Report: missing key '" + key + "'");
}

void Report::set_int(const std::string& key, long long v) {
    set_raw(key, std::to_string(v));
}

void Report::set_real(const std::string& key, double v) {
    set_raw(key, format_real(v));
}

void Report::set_flag(const std::string& key, bool v) {
    set_raw(key, v ? "true" : "false");
}

void Report::set_string(const std::string& key, const std::string& v) {
    set_raw(key, v);
}

void Report::set_matrix(const std::string& key, const Eigen::MatrixXd& m) {
    std::ostringstream os;
    os << m.rows() << " " << m.cols();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            os << " " << format_real(m(i, j));
        }
    }
    set_raw(key, os.str());
}

bool Report::has(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return true;
    }
    return false;
}

long long Report::get_int(const std::string& key) const {
    return std::stoll(get_raw(key));
}

double Report::get_real(const std::string& key) const {
    return std::stod(get_raw(key));
}

bool Report::get_flag(const std::string& key) const {
    const std::string& v = get_raw(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ParseError("Report: key '" + key + "' is not a flag: " + v);
}

std::string Report::get_string(const std::string& key) const {
    return get_raw(key);
}

Eigen::MatrixXd Report::get_matrix(const std::string& key) const {
    std::istringstream is(get_raw(key));
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0) {
        throw ParseError("Report: malformed matrix under key '" + key + "'");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (!(is >> m(i, j))) {
                throw ParseError("Report: truncated matrix under key '" + key + "'");
            }
        }
    }
    return m;
}

std::string Report::serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) {
        os << k << " = " << v << "\n";
    }
    return os.str();
}

std::string Report::serialize_without_timings() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) {
        if (k.rfind("timing.", 0) == 0) continue;
        os << k << " = " << v << "\n";
    }
    return os.str();
}

Report Report::parse(const std::string& text) {
    Report r;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto sep = line.find(" = ");
        if (sep == std::string::npos) {
            throw ParseError("Report: malformed line " + std::to_string(lineno) +
                             ": " + line);
        }
        r.entries_.emplace_back(line.substr(0, sep), line.substr(sep + 3));
    }
    return r;
}

void Report::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("Report: cannot open for writing: " + path);
    out << serialize();
    if (!out) throw IoError("Report: write failed: " + path);
}

Report Report::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("Report: cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

} // namespace wrflow
