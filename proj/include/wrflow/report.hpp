#ifndef WRFLOW_REPORT_HPP
#define WRFLOW_REPORT_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace wrflow {

// Ordered key/value tree serialized as "key = value" lines. Reals are
// written with 17 significant digits so parse(emit(r)) == r.
class Report {
public:
    void set_int(const std::string& key, long long v);
    void set_real(const std::string& key, double v);
    void set_flag(const std::string& key, bool v);
    void set_string(const std::string& key, const std::string& v);
    void set_matrix(const std::string& key, const Eigen::MatrixXd& m);

    bool has(const std::string& key) const;
    long long get_int(const std::string& key) const;
    double get_real(const std::string& key) const;
    bool get_flag(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    Eigen::MatrixXd get_matrix(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

    std::string serialize() const;
    static Report parse(const std::string& text);

    void write(const std::string& path) const;
    static Report read(const std::string& path);

    bool operator==(const Report& other) const { return entries_ == other.entries_; }

    // serialization with "timing." keys removed, for determinism checks
    std::string serialize_without_timings() const;

private:
    void set_raw(const std::string& key, const std::string& value);
    const std::string& get_raw(const std::string& key) const;

    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_real(double v);

} // namespace wrflow

#endif
