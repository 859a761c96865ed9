#include "affdim/report.hpp"

#include <cstdio>
#include <fstream>

#include "affdim/errors.hpp"

namespace affdim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ReportWriter::section(const std::string& name) {
    if (!body_.empty()) body_ += "\n";
    body_ += "[" + name + "]\n";
}

void ReportWriter::kv(const std::string& key, const std::string& value) {
    body_ += key + " = " + value + "\n";
}
void ReportWriter::kv(const std::string& key, const char* value) {
    kv(key, std::string(value));
}
void ReportWriter::kv(const std::string& key, double value) { kv(key, format_double(value)); }
void ReportWriter::kv(const std::string& key, long value) { kv(key, std::to_string(value)); }
void ReportWriter::kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
void ReportWriter::kv(const std::string& key, bool value) {
    kv(key, std::string(value ? "true" : "false"));
}
void ReportWriter::blank() { body_ += "\n"; }

void ReportWriter::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open report file for writing: " + path);
    out << body_;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open CSV for writing: " + path);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

}  // namespace affdim
