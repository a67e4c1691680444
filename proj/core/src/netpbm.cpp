#include "revfilt/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "revfilt/error.hpp"

namespace revfilt {

namespace {

// Skips whitespace and '#' comments, then reads one unsigned decimal token.
int read_header_int(std::istream& in) {
  for (;;) {
    const int ch = in.peek();
    if (ch == std::char_traits<char>::eof()) {
      throw Error(ErrorKind::MalformedFile, "truncated header");
    }
    if (ch == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  if (!std::isdigit(in.peek())) throw Error(ErrorKind::MalformedFile, "expected a number");
  long value = 0;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    if (value > 1 << 24) throw Error(ErrorKind::MalformedFile, "header value too large");
  }
  return static_cast<int>(value);
}

}  // namespace

unsigned char quantize_to_byte(double value) noexcept {
  const double clamped = std::clamp(value, 0.0, 1.0);
  return static_cast<unsigned char>(std::floor(clamped * 255.0 + 0.5));
}

Image read_netpbm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2)) throw Error(ErrorKind::MalformedFile, "missing magic number");
  if (magic[0] != 'P') throw Error(ErrorKind::MalformedFile, "not a netpbm file");
  int channels = 0;
  if (magic[1] == '5') {
    channels = 1;
  } else if (magic[1] == '6') {
    channels = 3;
  } else {
    throw Error(ErrorKind::UnsupportedFormat,
                std::string("only P5/P6 are supported, got P") + magic[1]);
  }
  const int width = read_header_int(in);
  const int height = read_header_int(in);
  const int maxval = read_header_int(in);
  if (width <= 0 || height <= 0) throw Error(ErrorKind::MalformedFile, "zero image size");
  if (maxval != 255) {
    throw Error(ErrorKind::UnsupportedFormat, "maxval must be 255, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) throw Error(ErrorKind::MalformedFile, "bad header terminator");

  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(n);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n))) {
    throw Error(ErrorKind::MalformedFile, "truncated raster");
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = raw[i] / 255.0;
  return Image(height, width, channels, std::move(data));
}

void write_netpbm(std::ostream& out, const Image& image) {
  out << (image.channels() == 1 ? "P5" : "P6") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << 255 << '\n';
  std::vector<unsigned char> raw(image.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize_to_byte(image[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error(ErrorKind::IoFailure, "write failed");
}

Image decode_netpbm(std::string_view bytes) {
  std::istringstream in{std::string(bytes), std::ios::binary};
  return read_netpbm(in);
}

std::string encode_netpbm(const Image& image) {
  std::ostringstream out(std::ios::binary);
  write_netpbm(out, image);
  return std::move(out).str();
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  return read_netpbm(in);
}

void write_image(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot create " + path.string());
  write_netpbm(out, image);
  out.close();
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
}

}  // namespace revfilt
