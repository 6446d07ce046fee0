#include "phaserep/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phaserep/common.hpp"

namespace phaserep {
namespace {

constexpr const char* kParamsTag = "phaserep-params";

void append_row(std::string& out, const char* label, std::size_t k, std::size_t m,
                const double* v, std::size_t n, bool with_m) {
  out += label;
  out += ' ';
  out += std::to_string(k);
  if (with_m) {
    out += ' ';
    out += std::to_string(m);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out += ' ';
    out += format_double(v[i]);
  }
  out += '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

std::string params_to_text(const PhaseParams& p) {
  const std::size_t K = p.sources();
  require(K > 0, "params_to_text: empty parameters");
  const std::size_t F = p.bins();
  const std::size_t M = p.onsets();
  p.validate(F, M);

  std::string out;
  out += kParamsTag;
  out += " 1\n";
  out += "shape " + std::to_string(K) + ' ' + std::to_string(F) + ' ' + std::to_string(M) +
         '\n';
  for (std::size_t k = 0; k < K; ++k) {
    append_row(out, "refphase", k, 0, p.ref_phase[k].data(), F, false);
    append_row(out, "delay", k, 0, p.delay[k].data(), M, false);
    for (std::size_t m = 0; m < M; ++m)
      append_row(out, "onsetphase", k, m, p.onset_phase[k].col(m), F, true);
    for (std::size_t m = 0; m < M; ++m)
      append_row(out, "mag", k, m, p.mag[k].col(m), F, true);
  }
  return out;
}

PhaseParams params_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  require(tag == kParamsTag && version == 1, "params_from_text: not a parameter file");

  std::string word;
  in >> word;
  require(word == "shape", "params_from_text: missing shape line");
  std::size_t K = 0, F = 0, M = 0;
  in >> K >> F >> M;
  require(in && K > 0 && F > 0 && M > 0, "params_from_text: bad shape line");

  PhaseParams p;
  p.ref_phase.assign(K, std::vector<double>(F, 0.0));
  p.delay.assign(K, std::vector<double>(M, 0.0));
  p.onset_phase.assign(K, Mat<double>(F, M));
  p.mag.assign(K, Mat<double>(F, M));

  const auto read_values = [&in](double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) in >> dst[i];
  };
  while (in >> word) {
    std::size_t k = 0;
    in >> k;
    require(in && k < K, "params_from_text: bad source index");
    if (word == "refphase") {
      read_values(p.ref_phase[k].data(), F);
    } else if (word == "delay") {
      read_values(p.delay[k].data(), M);
    } else if (word == "onsetphase" || word == "mag") {
      std::size_t m = 0;
      in >> m;
      require(in && m < M, "params_from_text: bad onset index");
      Mat<double>& dst = word == "mag" ? p.mag[k] : p.onset_phase[k];
      read_values(dst.col(m), F);
    } else {
      require(false, "params_from_text: unknown row label");
    }
    require(!in.fail(), "params_from_text: malformed numeric row");
  }
  p.validate(F, M);
  return p;
}

void write_params(const std::string& path, const PhaseParams& p) {
  write_text_file(path, params_to_text(p));
}

PhaseParams read_params(const std::string& path) {
  return params_from_text(read_text_file(path));
}

std::string cost_trace_csv(const std::vector<double>& trace) {
  std::string out = "iteration,cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out += std::to_string(i) + ',' + format_double(trace[i]) + '\n';
  return out;
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  std::string out = "dataset,method,source,sdr,sir,sar\n";
  for (const ScoreRow& r : rows) {
    out += r.dataset + ',' + r.method + ',' + std::to_string(r.source) + ',' +
           format_double(r.scores.sdr) + ',' + format_double(r.scores.sir) + ',' +
           format_double(r.scores.sar) + '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot create " + path);
  out << text;
  require(out.good(), "write failed for " + path);
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](char c) { return !std::isspace(static_cast<unsigned char>(c)); };
    const auto first = std::find_if(line.begin(), line.end(), notspace);
    if (first == line.end()) continue;
    const std::size_t eq = line.find('=');
    require(eq != std::string::npos, "config line missing '=': " + line);
    const auto trim = [&](std::string s) {
      const auto b = std::find_if(s.begin(), s.end(), notspace);
      const auto e = std::find_if(s.rbegin(), s.rend(), notspace).base();
      return b < e ? std::string(b, e) : std::string();
    };
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), "config line with empty key: " + line);
    cfg[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

}  // namespace phaserep
