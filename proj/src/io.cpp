#include "brw/io.hpp"

#include <cstdio>

namespace brw::io {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonObject::start_field(std::string_view key) {
    if (!first_) body_ += ',';
    first_ = false;
    body_ += '"';
    body_ += key;
    body_ += "\":";
}

JsonObject& JsonObject::field(std::string_view key, double v) {
    start_field(key);
    body_ += fmt_double(v);
    return *this;
}

JsonObject& JsonObject::field(std::string_view key, std::int64_t v) {
    start_field(key);
    body_ += std::to_string(v);
    return *this;
}

JsonObject& JsonObject::field(std::string_view key, std::uint64_t v) {
    start_field(key);
    body_ += std::to_string(v);
    return *this;
}

JsonObject& JsonObject::field(std::string_view key, bool v) {
    start_field(key);
    body_ += v ? "true" : "false";
    return *this;
}

JsonObject& JsonObject::field(std::string_view key, std::string_view v) {
    start_field(key);
    body_ += '"';
    for (char ch : v) {
        if (ch == '"' || ch == '\\') body_ += '\\';
        body_ += ch;
    }
    body_ += '"';
    return *this;
}

JsonObject& JsonObject::field(std::string_view key, std::span<const double> v) {
    start_field(key);
    body_ += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) body_ += ',';
        body_ += fmt_double(v[i]);
    }
    body_ += ']';
    return *this;
}

JsonObject& JsonObject::field_raw(std::string_view key, std::string_view json) {
    start_field(key);
    body_ += json;
    return *this;
}

JsonObject& JsonObject::field_null(std::string_view key) {
    start_field(key);
    body_ += "null";
    return *this;
}

std::string JsonObject::str() const { return "{" + body_ + "}"; }

}  // namespace brw::io
