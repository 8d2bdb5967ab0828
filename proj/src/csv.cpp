#include "omsim/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw io_error("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw io_error("cannot move " + tmp + " into place: " + ec.message());
    }
}

void write_csv(const std::string& path, const std::vector<double>& omega_grid,
               const std::vector<CsvColumn>& columns) {
    if (columns.empty()) throw parameter_error("CSV needs at least one column");
    for (const auto& col : columns) {
        if (col.values == nullptr || col.values->size() != omega_grid.size())
            throw parameter_error("CSV columns must share the frequency grid");
        if (col.name.find_first_of(",\n\"") != std::string::npos)
            throw parameter_error("CSV column name contains a delimiter");
    }

    std::ostringstream out;
    out << "frequency_hz";
    for (const auto& col : columns) out << ',' << col.name;
    out << '\n';
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        out << format_value(omega_grid[i] / (2.0 * std::numbers::pi));
        for (const auto& col : columns)
            out << ',' << format_value((*col.values)[i]);
        out << '\n';
    }
    write_text_file(path, out.str());
}

}  // namespace omsim
