#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <set>
#include <string>

#include <zlib.h>

#include "handsign/dataset.hpp"
#include "handsign/error.hpp"
#include "handsign/jpeg.hpp"

namespace fs = std::filesystem;

namespace handsign {
namespace {

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

class ByteWriter {
 public:
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  template <typename Derived>
  void array(const Eigen::DenseBase<Derived>& values) {
    u64(static_cast<std::uint64_t>(values.size()));
    // Column-major element order for matrices.
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      for (Eigen::Index r = 0; r < values.rows(); ++r) f64(values(r, c));
  }
  void strings(const std::vector<std::string>& list) {
    u64(list.size());
    for (const auto& s : list) {
      u64(s.size());
      raw(s);
    }
  }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::TruncatedData, "model payload ends early");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }

  Eigen::Index count(std::uint64_t limit) {
    const std::uint64_t n = u64();
    if (n > limit) throw Error(ErrorCode::TruncatedData, "length prefix exceeds payload");
    return static_cast<Eigen::Index>(n);
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
    const Eigen::Index n = count(remaining() / 8);
    if (n != rows * cols) throw Error(ErrorCode::BadHeader, "array length does not match its shape");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = f64();
    return m;
  }
  Eigen::VectorXd vector(Eigen::Index size) { return matrix(size, 1); }

  std::vector<std::string> strings() {
    const Eigen::Index n = count(remaining() / 8);
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto len = static_cast<std::size_t>(count(remaining()));
      auto b = take(len);
      out.emplace_back(b.begin(), b.end());
    }
    return out;
  }

  std::uint64_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kMagic = "HSRM";
// magic + version + backend + width + height
constexpr std::size_t kHeaderSize = 4 + 4 + 1 + 4 + 4;

void write_payload(ByteWriter& w, const PcaModel& m) {
  w.u64(static_cast<std::uint64_t>(m.feature_length()));
  w.u64(static_cast<std::uint64_t>(m.components()));
  w.u64(static_cast<std::uint64_t>(m.projections.cols()));
  w.array(m.mean);
  w.array(m.eigenvalues);
  w.array(m.basis);
  w.array(m.projections);
  w.strings(m.labels);
}

void write_payload(ByteWriter& w, const NnModel& m) {
  w.u64(static_cast<std::uint64_t>(m.token_count));
  w.u64(static_cast<std::uint64_t>(m.input_width()));
  w.u64(static_cast<std::uint64_t>(m.hidden_width()));
  w.u64(static_cast<std::uint64_t>(m.output_width()));
  w.array(m.w1);
  w.array(m.b1);
  w.array(m.w2);
  w.array(m.b2);
  w.strings(m.label_order);
}

PcaModel read_pca(ByteReader& r, ImageDims dims) {
  PcaModel m;
  m.dims = dims;
  const auto limit = r.remaining();
  const auto n_features = r.count(limit);
  const auto k = r.count(limit);
  const auto n = r.count(limit);
  m.mean = r.vector(n_features);
  m.eigenvalues = r.vector(k);
  m.basis = r.matrix(n_features, k);
  m.projections = r.matrix(k, n);
  m.labels = r.strings();
  if (static_cast<Eigen::Index>(m.labels.size()) != n) {
    throw Error(ErrorCode::BadHeader, "PCA label count does not match projections");
  }
  return m;
}

NnModel read_nn(ByteReader& r, ImageDims dims) {
  NnModel m;
  m.dims = dims;
  const auto limit = r.remaining();
  m.token_count = static_cast<int>(r.count(limit));
  const auto in = r.count(limit);
  const auto hidden = r.count(limit);
  const auto out = r.count(limit);
  m.w1 = r.matrix(hidden, in);
  m.b1 = r.vector(hidden);
  m.w2 = r.matrix(out, hidden);
  m.b2 = r.vector(out);
  m.label_order = r.strings();
  if (static_cast<Eigen::Index>(m.label_order.size()) != out || in != 2 * m.token_count) {
    throw Error(ErrorCode::BadHeader, "NN shape is inconsistent");
  }
  return m;
}

}  // namespace

Profile Profile::parse(std::string_view text) {
  if (text == "webcam") return webcam();
  if (text == "android") return android();
  const auto x = text.find('x');
  int w = 0;
  int h = 0;
  if (x != std::string_view::npos) {
    const auto* first = text.data();
    const auto r1 = std::from_chars(first, first + x, w);
    const auto r2 = std::from_chars(first + x + 1, first + text.size(), h);
    if (r1.ec == std::errc{} && r1.ptr == first + x && r2.ec == std::errc{} && r2.ptr == first + text.size() &&
        w >= 1 && h >= 1) {
      return custom(w, h);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "profile must be webcam, android or WxH, got '" + std::string(text) + "'");
}

std::string Profile::to_string() const {
  if (name == "webcam" || name == "android") return name;
  return std::to_string(dims.width) + "x" + std::to_string(dims.height);
}

std::vector<std::string> GestureDB::labels() const {
  std::set<std::string> unique;
  for (const auto& e : entries) unique.insert(e.label);
  return {unique.begin(), unique.end()};
}

bool is_image_file(const fs::path& path) {
  const auto ext = lower_extension(path);
  return ext == ".pgm" || ext == ".jpg" || ext == ".jpeg";
}

bool is_valid_label(std::string_view label) {
  return !label.empty() && label.size() <= 32 && std::all_of(label.begin(), label.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '_' || c == '-';
         });
}

GrayImage read_image_file(const fs::path& path) {
  const auto bytes = read_file(path);
  if (lower_extension(path) == ".pgm") return read_pgm(bytes);
  return decode_jpeg(bytes);
}

GestureDB load_db(const fs::path& root, const Profile& profile) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::EmptyDatabase, "no database directory at " + root.string());

  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& dir : fs::directory_iterator(root)) {
    if (!dir.is_directory()) continue;
    const std::string label = dir.path().filename().string();
    if (!is_valid_label(label)) continue;
    for (const auto& file : fs::directory_iterator(dir.path())) {
      if (file.is_regular_file() && is_image_file(file.path())) files.emplace_back(label, file.path());
    }
  }
  if (files.empty()) throw Error(ErrorCode::EmptyDatabase, "no gesture images under " + root.string());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.filename().string() < b.second.filename().string();
  });

  GestureDB db{root, profile, {}};
  db.entries.reserve(files.size());
  for (auto& [label, path] : files) {
    GrayImage raw(1, 1);
    try {
      raw = read_image_file(path);
    } catch (const Error& e) {
      throw Error(ErrorCode::UnreadableImage, path.string() + " (" + e.what() + ")");
    }
    GrayImage gray = resize(raw, profile.dims.width, profile.dims.height);
    BinaryImage bits = binarize_otsu(gray);
    db.entries.push_back({std::move(label), std::move(path), std::move(gray), std::move(bits)});
  }
  return db;
}

Backend backend_of(const Model& model) {
  return std::holds_alternative<PcaModel>(model) ? Backend::Pca : Backend::Nn;
}

ImageDims dims_of(const Model& model) {
  return std::visit([](const auto& m) { return m.dims; }, model);
}

std::vector<std::uint8_t> serialize_model(const Model& model) {
  ByteWriter w;
  w.raw(kMagic);
  w.u32(kModelVersion);
  w.u8(static_cast<std::uint8_t>(backend_of(model)));
  const ImageDims dims = dims_of(model);
  w.u32(static_cast<std::uint32_t>(dims.width));
  w.u32(static_cast<std::uint32_t>(dims.height));
  std::visit([&](const auto& m) { write_payload(w, m); }, model);

  auto& bytes = w.bytes();
  const auto crc = static_cast<std::uint32_t>(crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
  w.u32(crc);
  return std::move(bytes);
}

Model deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "not a model file");
  }
  if (bytes.size() < kHeaderSize + 4) throw Error(ErrorCode::TruncatedData, "model file too short");

  ByteReader header(bytes.first(kHeaderSize));
  header.take(4);
  const std::uint32_t version = header.u32();
  if (version != kModelVersion) throw Error(ErrorCode::UnknownVersion, "model version " + std::to_string(version));
  const std::uint8_t backend = header.u8();
  if (backend != static_cast<std::uint8_t>(Backend::Pca) && backend != static_cast<std::uint8_t>(Backend::Nn)) {
    throw Error(ErrorCode::UnknownBackend, "backend tag " + std::to_string(backend));
  }
  const ImageDims dims{static_cast<int>(header.u32()), static_cast<int>(header.u32())};

  const auto body = bytes.first(bytes.size() - 4);
  ByteReader trailer(bytes.last(4));
  const std::uint32_t stored = trailer.u32();
  const auto computed = static_cast<std::uint32_t>(crc32(0L, body.data(), static_cast<uInt>(body.size())));
  if (stored != computed) throw Error(ErrorCode::ChecksumMismatch, "model file is corrupted");

  ByteReader payload(body.subspan(kHeaderSize));
  Model model = backend == static_cast<std::uint8_t>(Backend::Pca) ? Model{read_pca(payload, dims)}
                                                                   : Model{read_nn(payload, dims)};
  if (payload.remaining() != 0) throw Error(ErrorCode::BadHeader, "trailing bytes after model payload");
  return model;
}

void save_model(const Model& model, const fs::path& path) { write_file(path, serialize_model(model)); }

Model load_model(const fs::path& path) { return deserialize_model(read_file(path)); }

}  // namespace handsign
