#ifndef PHASEREP_WAV_HPP
#define PHASEREP_WAV_HPP

#include <string>
#include <vector>

namespace phaserep {

struct WavData {
  std::vector<double> samples;  // mono
  double sample_rate = 0.0;
};

// Reads 16-bit PCM or 32-bit IEEE float WAV. Multi-channel files are mixed
// down to mono (channel mean) with a warning on stderr.
WavData read_wav(const std::string& path);

enum class WavFormat { pcm16, float32 };

void write_wav(const std::string& path, const std::vector<double>& samples,
               double sample_rate, WavFormat fmt = WavFormat::float32);

}  // namespace phaserep

#endif  // PHASEREP_WAV_HPP
