#include "phaserep/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace phaserep {
namespace {

std::uint32_t rd_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint16_t rd_u16(const unsigned char* p) {
  return std::uint16_t(p[0] | p[1] << 8);
}

void wr_u32(std::string& s, std::uint32_t v) {
  s.push_back(char(v & 0xff));
  s.push_back(char((v >> 8) & 0xff));
  s.push_back(char((v >> 16) & 0xff));
  s.push_back(char((v >> 24) & 0xff));
}

void wr_u16(std::string& s, std::uint16_t v) {
  s.push_back(char(v & 0xff));
  s.push_back(char((v >> 8) & 0xff));
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open WAV file: " + path);
  std::string raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const unsigned char* p = reinterpret_cast<const unsigned char*>(raw.data());
  const std::size_t size = raw.size();
  if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw std::runtime_error("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_len = 0;

  std::size_t off = 12;
  while (off + 8 <= size) {
    const std::uint32_t chunk_len = rd_u32(p + off + 4);
    const unsigned char* body = p + off + 8;
    if (off + 8 + chunk_len > size) throw std::runtime_error("truncated WAV chunk: " + path);
    if (std::memcmp(p + off, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw std::runtime_error("malformed fmt chunk: " + path);
      format = rd_u16(body);
      channels = rd_u16(body + 2);
      rate = rd_u32(body + 4);
      bits = rd_u16(body + 14);
    } else if (std::memcmp(p + off, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
    }
    off += 8 + chunk_len + (chunk_len & 1);  // chunks are word aligned
  }
  if (!data || channels == 0) throw std::runtime_error("WAV file has no usable data: " + path);

  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32)
    throw std::runtime_error("unsupported WAV encoding (want 16-bit PCM or 32-bit float): " + path);

  const std::size_t bytes_per = bits / 8;
  const std::size_t frames = data_len / (bytes_per * channels);
  if (channels > 1)
    std::fprintf(stderr, "warning: %s has %u channels, mixing down to mono\n", path.c_str(),
                 unsigned(channels));

  WavData out;
  out.sample_rate = double(rate);
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* s = data + (i * channels + c) * bytes_per;
      if (pcm16) {
        const std::int16_t v = std::int16_t(rd_u16(s));
        acc += double(v) / 32768.0;
      } else {
        std::uint32_t u = rd_u32(s);
        float fv;
        std::memcpy(&fv, &u, 4);
        acc += double(fv);
      }
    }
    out.samples[i] = acc / double(channels);
  }
  return out;
}

void write_wav(const std::string& path, const std::vector<double>& samples, double sample_rate,
               WavFormat fmt) {
  if (sample_rate <= 0.0) throw std::invalid_argument("sample_rate must be positive");
  const bool f32 = fmt == WavFormat::float32;
  const std::uint16_t bits = f32 ? 32 : 16;
  const std::uint32_t data_len = std::uint32_t(samples.size() * (bits / 8));

  std::string s;
  s.reserve(44 + data_len);
  s += "RIFF";
  wr_u32(s, 36 + data_len);
  s += "WAVEfmt ";
  wr_u32(s, 16);
  wr_u16(s, f32 ? 3 : 1);
  wr_u16(s, 1);  // mono
  wr_u32(s, std::uint32_t(sample_rate + 0.5));
  wr_u32(s, std::uint32_t(sample_rate + 0.5) * (bits / 8));
  wr_u16(s, bits / 8);
  wr_u16(s, bits);
  s += "data";
  wr_u32(s, data_len);
  for (double v : samples) {
    if (f32) {
      const float fv = float(v);
      std::uint32_t u;
      std::memcpy(&u, &fv, 4);
      wr_u32(s, u);
    } else {
      double scaled = std::round(v * 32767.0);
      if (scaled > 32767.0) scaled = 32767.0;
      if (scaled < -32768.0) scaled = -32768.0;
      wr_u16(s, std::uint16_t(std::int16_t(scaled)));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write WAV file: " + path);
  f.write(s.data(), std::streamsize(s.size()));
  if (!f) throw std::runtime_error("short write on WAV file: " + path);
}

}  // namespace phaserep
