#pragma once

// Output files: JSON reports and CSV at 17 significant digits, each stamped with the config hash.

#include <bcp/config.hpp>
#include <bcp/verify.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace bcp {

/// Non-finite residuals become null so the file stays valid JSON.
inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json report_to_json(const CheckReport& r, const std::string& hash)
{
    json meta = json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    return json{
        {"check_id", r.check_id},
        {"passed", r.passed},
        {"max_residual", number_or_null(r.max_residual)},
        {"tolerance", number_or_null(r.tolerance)},
        {"sample_count", r.sample_count},
        {"seed", r.seed},
        {"config_hash", hash},
        {"runtime_ms", r.runtime_ms},
        {"metadata", meta},
    };
}

inline std::filesystem::path ensure_dir(const std::filesystem::path& p)
{
    std::filesystem::create_directories(p);
    return p;
}

inline void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

/// CSV with a `# config_hash=...` first line and full-precision scientific numbers.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& hash, const std::vector<std::string>& columns,
              const std::string& comment = {})
        : out_(path)
    {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << "# config_hash=" << hash << '\n';
        if (!comment.empty()) out_ << "# " << comment << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << '\n';
    }

    CsvWriter& num(double x)
    {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.16e", x);
        out_ << buf;
        return *this;
    }
    CsvWriter& text(const std::string& s)
    {
        sep();
        out_ << s;
        return *this;
    }
    CsvWriter& integer(long long v)
    {
        sep();
        out_ << v;
        return *this;
    }
    void end()
    {
        out_ << '\n';
        first_ = true;
    }

private:
    void sep()
    {
        if (!first_) out_ << ',';
        first_ = false;
    }
    std::ofstream out_;
    bool first_ = true;
};

}
