#pragma once

// Matrices and vectors serialize as {"shape": [rows, cols] | [n], "data": [...]}
// with data in row-major order.

#include "cgbound/core/errors.hpp"
#include "cgbound/core/linalg.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <string>
#include <vector>

namespace cgbound {

using json = nlohmann::json;

inline json to_json(const Vector& v)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
    return json{{"shape", {v.size()}}, {"data", std::move(data)}};
}

inline json to_json(const Matrix& m)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

namespace detail {

inline std::vector<double> read_numeric_array(const json& j, const std::string& where)
{
    if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(where + "/" + std::to_string(i), "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

} // namespace detail

/// Typed field access on a JSON object with JSON-pointer error locations.
class JsonSection {
public:
    JsonSection(const json& j, std::string where) : j_(j), where_(std::move(where))
    {
        if (!j_.is_object()) throw ConfigError(where_.empty() ? "/" : where_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    const json& raw(const std::string& key) const { return j_.at(key); }
    std::string path(const std::string& key) const { return where_ + "/" + key; }
    const std::string& where() const { return where_; }

    double number(const std::string& key) const
    {
        require(key);
        if (!j_.at(key).is_number()) throw ConfigError(path(key), "expected a number");
        return j_.at(key).get<double>();
    }
    double number(const std::string& key, double dflt) const { return has(key) ? number(key) : dflt; }

    long long integer(const std::string& key) const
    {
        require(key);
        if (!j_.at(key).is_number_integer()) throw ConfigError(path(key), "expected an integer");
        return j_.at(key).get<long long>();
    }
    long long integer(const std::string& key, long long dflt) const { return has(key) ? integer(key) : dflt; }

    std::string string(const std::string& key) const
    {
        require(key);
        if (!j_.at(key).is_string()) throw ConfigError(path(key), "expected a string");
        return j_.at(key).get<std::string>();
    }
    std::string string(const std::string& key, const std::string& dflt) const
    {
        return has(key) ? string(key) : dflt;
    }

    bool boolean(const std::string& key, bool dflt) const
    {
        if (!has(key)) return dflt;
        if (!j_.at(key).is_boolean()) throw ConfigError(path(key), "expected a boolean");
        return j_.at(key).get<bool>();
    }

    std::vector<double> numbers(const std::string& key) const
    {
        require(key);
        return detail::read_numeric_array(j_.at(key), path(key));
    }

    std::vector<int> integers(const std::string& key) const
    {
        require(key);
        const json& a = j_.at(key);
        if (!a.is_array()) throw ConfigError(path(key), "expected an array of integers");
        std::vector<int> out;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number_integer()) throw ConfigError(path(key) + "/" + std::to_string(i), "expected an integer");
            out.push_back(a[i].get<int>());
        }
        return out;
    }

    JsonSection section(const std::string& key) const
    {
        require(key);
        return JsonSection(j_.at(key), path(key));
    }

    void require(const std::string& key) const
    {
        if (!has(key)) throw ConfigError(path(key), "missing required field");
    }

    /// Rejects keys outside `allowed` so typos do not pass silently.
    void only(std::initializer_list<const char*> allowed) const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || it.key() == a;
            if (!ok) throw ConfigError(path(it.key()), "unknown field");
        }
    }

private:
    const json& j_;
    std::string where_;
};

/// Accepts the tagged schema or a bare numeric array.
inline Vector vector_from_json(const json& j, const std::string& where = "")
{
    if (j.is_array()) {
        const auto d = detail::read_numeric_array(j, where);
        return Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
    }
    if (!j.is_object() || !j.contains("data")) throw ConfigError(where, "expected {shape, data} vector");
    const auto d = detail::read_numeric_array(j.at("data"), where + "/data");
    if (j.contains("shape")) {
        const auto& s = j.at("shape");
        if (!s.is_array() || s.size() != 1 || !s[0].is_number_integer())
            throw ConfigError(where + "/shape", "vector shape must be [n]");
        if (s[0].get<long long>() != static_cast<long long>(d.size()))
            throw ConfigError(where + "/shape", "shape does not match data length");
    }
    return Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
}

/// Accepts the tagged schema or a nested array of rows.
inline Matrix matrix_from_json(const json& j, const std::string& where = "")
{
    if (j.is_array()) {
        const auto rows = static_cast<Eigen::Index>(j.size());
        if (rows == 0) throw ConfigError(where, "empty matrix");
        if (!j[0].is_array()) throw ConfigError(where + "/0", "expected an array row");
        const auto cols = static_cast<Eigen::Index>(j[0].size());
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const std::string w = where + "/" + std::to_string(i);
            const auto r = detail::read_numeric_array(j[static_cast<std::size_t>(i)], w);
            if (static_cast<Eigen::Index>(r.size()) != cols) throw ConfigError(w, "ragged matrix rows");
            for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = r[static_cast<std::size_t>(c)];
        }
        return m;
    }
    if (!j.is_object() || !j.contains("shape") || !j.contains("data"))
        throw ConfigError(where, "expected {shape, data} matrix");
    const auto& s = j.at("shape");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
        throw ConfigError(where + "/shape", "matrix shape must be [rows, cols]");
    const auto rows = s[0].get<long long>();
    const auto cols = s[1].get<long long>();
    if (rows < 0 || cols < 0) throw ConfigError(where + "/shape", "negative dimension");
    const auto d = detail::read_numeric_array(j.at("data"), where + "/data");
    if (static_cast<long long>(d.size()) != rows * cols)
        throw ConfigError(where + "/data", "data length does not match shape");
    Matrix m(rows, cols);
    for (long long i = 0; i < rows; ++i)
        for (long long c = 0; c < cols; ++c) m(i, c) = d[static_cast<std::size_t>(i * cols + c)];
    return m;
}

} // namespace cgbound
