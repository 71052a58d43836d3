#pragma once

#include "bubbles/fields.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace bubbles {

// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);
std::string csv_escape(const std::string& field);

// RFC-4180: CRLF line ends, fields quoted when they contain ',', '"', CR or LF.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
};

void write_far_field_csv(const std::string& path, const FarFieldPattern& pattern);
void write_text_file(const std::string& path, const std::string& content);

// {a, s, t, seed, M, d, bubbles: [{kind, center, scale, params}]}
std::string cluster_to_json(const Cluster& cluster);
Cluster cluster_from_json(const std::string& text);

}  // namespace bubbles
