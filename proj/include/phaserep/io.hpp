#ifndef PHASEREP_IO_HPP
#define PHASEREP_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "phaserep/metrics.hpp"
#include "phaserep/phase_model.hpp"

namespace phaserep {

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

// Plain-text parameter files. Values are written with format_double, so a
// write/read cycle reproduces the parameters bit for bit.
std::string params_to_text(const PhaseParams& p);
PhaseParams params_from_text(const std::string& text);
void write_params(const std::string& path, const PhaseParams& p);
PhaseParams read_params(const std::string& path);

// "iteration,cost" CSV; row 0 is the cost before the first sweep.
std::string cost_trace_csv(const std::vector<double>& trace);

struct ScoreRow {
  std::string dataset;
  std::string method;
  std::size_t source = 0;
  Scores scores;
};

// "dataset,method,source,sdr,sir,sar" CSV.
std::string scores_csv(const std::vector<ScoreRow>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// key=value lines; blank lines and #-comments ignored; later keys win.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> read_config(const std::string& path);

}  // namespace phaserep

#endif  // PHASEREP_IO_HPP
