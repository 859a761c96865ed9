#pragma once

#include <string>
#include <vector>

namespace affdim {

// All floats in persisted reports carry 17 significant digits so determinism
// can be checked byte for byte.
std::string format_double(double v);

// Structured text report: [section] headers over key = value lines.
class ReportWriter {
public:
    void section(const std::string& name);
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, const char* value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, long value);
    void kv(const std::string& key, int value);
    void kv(const std::string& key, bool value);
    void blank();

    const std::string& str() const { return body_; }
    void save(const std::string& path) const;

private:
    std::string body_;
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace affdim
