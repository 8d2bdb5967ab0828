#ifndef OMSIM_CSV_HPP
#define OMSIM_CSV_HPP

#include <string>
#include <vector>

namespace omsim {

struct CsvColumn {
    std::string name;
    const std::vector<double>* values = nullptr;
};

// Writes a CSV with a frequency_hz column (converted from the rad/s
// grid) followed by the given columns, which must share the grid length.
// Values carry 12 significant digits, rows end in LF, and the file is
// written atomically (temp + rename), so identical inputs always produce
// byte-identical files.
void write_csv(const std::string& path, const std::vector<double>& omega_grid,
               const std::vector<CsvColumn>& columns);

// Atomic plain-text write used for summary files.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace omsim

#endif
