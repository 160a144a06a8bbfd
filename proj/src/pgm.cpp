#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "handsign/dataset.hpp"
#include "handsign/error.hpp"

namespace handsign {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads an unsigned decimal.
  long number(const char* what) {
    for (;;) {
      if (pos_ >= bytes_.size()) throw Error(ErrorCode::BadHeader, std::string("missing ") + what);
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
    if (!std::isdigit(bytes_[pos_])) throw Error(ErrorCode::BadHeader, std::string("malformed ") + what);
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1'000'000'000) throw Error(ErrorCode::BadHeader, std::string(what) + " out of range");
    }
    return value;
  }

  // The single whitespace byte that ends the header.
  void terminator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::BadHeader, "header must end with one whitespace byte");
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::BadMagic, "not a binary PGM (P5)");
  }
  HeaderReader header(bytes);
  const long width = header.number("width");
  const long height = header.number("height");
  const long maxval = header.number("maxval");
  if (width < 1 || height < 1) throw Error(ErrorCode::BadHeader, "zero image dimension");
  if (maxval < 1 || maxval > 65535) throw Error(ErrorCode::BadHeader, "maxval out of range");
  if (maxval != 255) throw Error(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(maxval));
  header.terminator();

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - header.pos() < count) {
    throw Error(ErrorCode::TruncatedData, "expected " + std::to_string(count) + " pixel bytes, found " +
                                              std::to_string(bytes.size() - header.pos()));
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), bytes.subspan(header.pos(), count));
}

std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

GrayImage read_pgm_file(const std::filesystem::path& path) { return read_pgm(read_file(path)); }

void write_pgm_file(const GrayImage& img, const std::filesystem::path& path) {
  write_file(path, write_pgm(img));
}

}  // namespace handsign
