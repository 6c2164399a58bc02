#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace brw::io {

/// Formats a double with 17 significant digits so emitted values round-trip
/// exactly through text.
std::string fmt_double(double v);

/// Minimal ordered JSON object builder. All doubles go through fmt_double;
/// key order is emission order, which keeps golden files stable.
class JsonObject {
public:
    JsonObject& field(std::string_view key, double v);
    JsonObject& field(std::string_view key, std::int64_t v);
    JsonObject& field(std::string_view key, std::uint64_t v);
    JsonObject& field(std::string_view key, int v) { return field(key, static_cast<std::int64_t>(v)); }
    JsonObject& field(std::string_view key, bool v);
    JsonObject& field(std::string_view key, std::string_view v);
    JsonObject& field(std::string_view key, std::span<const double> v);
    JsonObject& field_raw(std::string_view key, std::string_view json);
    JsonObject& field_null(std::string_view key);

    std::string str() const;

private:
    void start_field(std::string_view key);
    std::string body_;
    bool first_ = true;
};

}  // namespace brw::io
