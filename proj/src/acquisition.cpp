#include "handsign/acquisition.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <optional>
#include <thread>

#include <httplib.h>

#include "handsign/dataset.hpp"
#include "handsign/error.hpp"
#include "handsign/jpeg.hpp"
#include "handsign/synthetic.hpp"

namespace fs = std::filesystem;

namespace handsign {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::string_view kMjpegScheme = "mjpeg+";

std::chrono::duration<double> frame_timeout(double cadence) {
  return std::chrono::duration<double>(cadence > 0.0 ? 5.0 * cadence : 5.0);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// ---------------------------------------------------------------------------

struct HttpEndpoint {
  std::string origin;  // http://host:port
  std::string prefix;  // path without trailing '/'
};

HttpEndpoint parse_http(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) {
    throw Error(ErrorCode::BadEndpoint, "only http:// endpoints are supported: " + std::string(url));
  }
  std::string_view rest = url.substr(scheme.size());
  const auto slash = rest.find('/');
  const std::string_view authority = rest.substr(0, slash);
  std::string prefix(slash == std::string_view::npos ? std::string_view{} : rest.substr(slash));
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  std::string_view host = authority;
  int port = 80;
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    const auto digits = authority.substr(colon + 1);
    const auto r = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (digits.empty() || r.ec != std::errc{} || r.ptr != digits.data() + digits.size() || port < 1 || port > 65535) {
      throw Error(ErrorCode::BadEndpoint, "bad port in " + std::string(url));
    }
  }
  const bool host_ok = !host.empty() && std::all_of(host.begin(), host.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '-' || c == '_';
  });
  if (!host_ok) throw Error(ErrorCode::BadEndpoint, "bad host in " + std::string(url));
  return {"http://" + std::string(host) + ":" + std::to_string(port), prefix};
}

void configure(httplib::Client& client, double cadence) {
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(frame_timeout(cadence));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
}

[[noreturn]] void throw_http(httplib::Error err, const std::string& where) {
  const ErrorCode code = (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
                             ? ErrorCode::Timeout
                             : ErrorCode::ConnectFailed;
  throw Error(code, where + ": " + httplib::to_string(err));
}

class SnapshotSource final : public FrameSource {
 public:
  explicit SnapshotSource(FrameSourceSpec spec)
      : FrameSource(spec), endpoint_(parse_http(spec.endpoint)), client_(endpoint_.origin) {
    configure(client_, spec.cadence);
    fetch();  // initial connection attempt
  }

  Frame next_frame() override {
    const double t = pace();
    return make_frame(decode_jpeg(fetch()), t);
  }

  bool live() const noexcept override { return true; }

 private:
  std::vector<std::uint8_t> fetch() {
    const std::string path = endpoint_.prefix + "/shot.jpg";
    auto res = client_.Get(path);
    if (!res) res = client_.Get(path);  // single retry
    if (!res) throw_http(res.error(), endpoint_.origin + path);
    if (res->status != 200) {
      throw Error(ErrorCode::ConnectFailed, endpoint_.origin + path + " returned HTTP " + std::to_string(res->status));
    }
    return {res->body.begin(), res->body.end()};
  }

  HttpEndpoint endpoint_;
  httplib::Client client_;
};

// A worker thread keeps the multipart response open and publishes the newest
// complete part; frames the consumer is too slow for are overwritten.
class MjpegSource final : public FrameSource {
 public:
  explicit MjpegSource(FrameSourceSpec spec)
      : FrameSource(spec), endpoint_(parse_http(spec.endpoint)), client_(endpoint_.origin) {
    configure(client_, spec.cadence);
    worker_ = std::thread([this] { run(); });

    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return connected_ || ended_; });
    if (!connected_) {
      lock.unlock();
      shutdown();
      throw Error(ErrorCode::ConnectFailed, endpoint_.origin + endpoint_.prefix + "/video: " + failure_);
    }
  }

  ~MjpegSource() override { shutdown(); }

  Frame next_frame() override {
    const double t = pace();
    std::vector<std::uint8_t> payload;
    {
      std::unique_lock lock(mu_);
      const bool ready = cv_.wait_for(lock, frame_timeout(spec().cadence),
                                      [&] { return generation_ > consumed_ || ended_; });
      if (!ready) throw Error(ErrorCode::Timeout, "no MJPEG part within 5 cadence intervals");
      if (generation_ > consumed_) {
        consumed_ = generation_;
        payload = latest_;
      } else if (stream_error_) {
        throw *stream_error_;
      } else {
        throw Error(ErrorCode::EndOfStream, "MJPEG stream closed");
      }
    }
    return make_frame(decode_jpeg(payload), t);
  }

  bool live() const noexcept override { return true; }

 private:
  void run() {
    const std::string path = endpoint_.prefix + "/video";
    std::optional<MjpegParser> parser;
    auto on_response = [&](const httplib::Response& res) {
      if (res.status != 200) {
        failure_ = "HTTP " + std::to_string(res.status);
        return false;
      }
      const std::string boundary = boundary_from_content_type(res.get_header_value("Content-Type"));
      if (boundary.empty()) {
        failure_ = "response is not multipart";
        return false;
      }
      parser.emplace(boundary);
      std::lock_guard lock(mu_);
      connected_ = true;
      cv_.notify_all();
      return true;
    };
    auto on_data = [&](const char* data, std::size_t len) {
      if (stop_) return false;
      try {
        for (auto& part : parser->feed({reinterpret_cast<const std::uint8_t*>(data), len})) {
          std::lock_guard lock(mu_);
          latest_ = std::move(part);
          ++generation_;
          cv_.notify_all();
        }
      } catch (const Error& e) {
        std::lock_guard lock(mu_);
        stream_error_ = e;
        return false;
      }
      return true;
    };

    auto res = client_.Get(path, on_response, on_data);
    if (!res && !connected_ && !stop_ && failure_.empty()) res = client_.Get(path, on_response, on_data);

    std::lock_guard lock(mu_);
    if (!res && failure_.empty()) failure_ = httplib::to_string(res.error());
    ended_ = true;
    cv_.notify_all();
  }

  void shutdown() {
    stop_ = true;
    client_.stop();
    if (worker_.joinable()) worker_.join();
  }

  HttpEndpoint endpoint_;
  httplib::Client client_;
  std::thread worker_;
  std::atomic<bool> stop_{false};

  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::uint8_t> latest_;
  std::uint64_t generation_ = 0;
  std::uint64_t consumed_ = 0;
  bool connected_ = false;
  bool ended_ = false;
  std::string failure_;
  std::optional<Error> stream_error_;
};

class DirectorySource final : public FrameSource {
 public:
  explicit DirectorySource(FrameSourceSpec spec) : FrameSource(spec) {
    std::error_code ec;
    if (!fs::is_directory(spec.endpoint, ec)) {
      throw Error(ErrorCode::BadEndpoint, "not a directory: " + spec.endpoint);
    }
    for (const auto& entry : fs::directory_iterator(spec.endpoint)) {
      if (entry.is_regular_file() && is_image_file(entry.path())) files_.push_back(entry.path());
    }
    std::sort(files_.begin(), files_.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  }

  Frame next_frame() override {
    if (next_ >= files_.size()) throw Error(ErrorCode::EndOfStream, "directory exhausted");
    const double t = pace();
    const fs::path& path = files_[next_++];
    std::vector<std::uint8_t> bytes;
    try {
      bytes = read_file(path);
    } catch (const Error& e) {
      throw Error(ErrorCode::DecodeError, e.what());
    }
    if (looks_like_jpeg(bytes)) return make_frame(decode_jpeg(bytes), t);
    try {
      return make_frame(read_pgm(bytes), t);
    } catch (const Error& e) {
      throw Error(ErrorCode::DecodeError, path.string() + ": " + e.what());
    }
  }

  bool live() const noexcept override { return false; }

 private:
  std::vector<fs::path> files_;
  std::size_t next_ = 0;
};

class SyntheticSource final : public FrameSource {
 public:
  explicit SyntheticSource(FrameSourceSpec spec) : FrameSource(spec) {
    const std::string_view text = this->spec().endpoint;
    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
      const auto colon = text.find(':', start);
      fields.push_back(text.substr(start, colon - start));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (fields.empty() || fields.size() > 3 || (fields[0] != "static" && fields[0] != "moving")) {
      throw Error(ErrorCode::BadEndpoint, "synthetic source must be static|moving[:N[:WxH]], got '" +
                                              std::string(text) + "'");
    }
    moving_ = fields[0] == "moving";
    if (fields.size() >= 2) {
      const auto f = fields[1];
      const auto r = std::from_chars(f.data(), f.data() + f.size(), total_);
      if (f.empty() || r.ec != std::errc{} || r.ptr != f.data() + f.size()) {
        throw Error(ErrorCode::BadEndpoint, "bad synthetic frame count '" + std::string(f) + "'");
      }
    }
    if (fields.size() == 3) {
      try {
        dims_ = Profile::parse(fields[2]).dims;
      } catch (const Error&) {
        throw Error(ErrorCode::BadEndpoint, "bad synthetic size '" + std::string(fields[2]) + "'");
      }
    }
  }

  Frame next_frame() override {
    if (produced_ >= total_) throw Error(ErrorCode::EndOfStream, "synthetic source exhausted");
    const double t = pace();
    static constexpr int kShifts[] = {-8, -4, 0, 4, 8};
    const int dx = moving_ ? kShifts[produced_ % 5] : 0;
    const int dy = moving_ ? -kShifts[(produced_ + 2) % 5] : 0;
    ++produced_;
    return make_frame(synthetic::render_gesture(0, dims_, dx, dy), t);
  }

  bool live() const noexcept override { return false; }

 private:
  bool moving_ = false;
  std::uint64_t total_ = 30;
  std::uint64_t produced_ = 0;
  ImageDims dims_{60, 80};
};

std::size_t find_from(const std::string& haystack, std::string_view needle, std::size_t from) {
  return from > haystack.size() ? std::string::npos : haystack.find(needle, from);
}

std::optional<std::size_t> content_length(std::string_view headers) {
  std::size_t start = 0;
  while (start < headers.size()) {
    auto end = headers.find('\n', start);
    if (end == std::string_view::npos) end = headers.size();
    std::string_view line = headers.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos || lowercase(line.substr(0, colon)) != "content-length") continue;
    auto value = line.substr(colon + 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    while (!value.empty() && value.back() == ' ') value.remove_suffix(1);
    std::size_t n = 0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), n);
    if (r.ec == std::errc{} && r.ptr == value.data() + value.size() && !value.empty()) return n;
    throw Error(ErrorCode::MalformedStream, "bad Content-Length '" + std::string(value) + "'");
  }
  return std::nullopt;
}

}  // namespace

FrameSourceSpec FrameSourceSpec::parse(std::string_view text, double cadence) {
  if (!(cadence >= 0.0) || !std::isfinite(cadence)) {
    throw Error(ErrorCode::InvalidArgument, "cadence must be finite and >= 0");
  }
  if (text.empty()) throw Error(ErrorCode::BadEndpoint, "empty source");
  FrameSourceSpec spec;
  spec.cadence = cadence;
  if (text.substr(0, kMjpegScheme.size()) == kMjpegScheme) {
    spec.kind = SourceKind::IpCamera;
    spec.ip_mode = IpMode::Mjpeg;
    spec.endpoint = std::string(text.substr(kMjpegScheme.size()));
  } else if (text.find("://") != std::string_view::npos) {
    spec.kind = SourceKind::IpCamera;
    spec.endpoint = std::string(text);
  } else if (text.substr(0, 10) == "synthetic:") {
    spec.kind = SourceKind::Synthetic;
    spec.endpoint = std::string(text.substr(10));
  } else {
    spec.kind = SourceKind::Directory;
    spec.endpoint = std::string(text);
  }
  return spec;
}

FrameSource::FrameSource(FrameSourceSpec spec) : spec_(std::move(spec)), opened_(Clock::now()) {
  if (!(spec_.cadence >= 0.0) || !std::isfinite(spec_.cadence)) {
    throw Error(ErrorCode::InvalidArgument, "cadence must be finite and >= 0");
  }
}

double FrameSource::pace() {
  if (paced_once_ && spec_.cadence > 0.0) {
    std::this_thread::sleep_until(last_ + std::chrono::duration_cast<Clock::duration>(
                                              std::chrono::duration<double>(spec_.cadence)));
  }
  paced_once_ = true;
  last_ = Clock::now();
  return std::chrono::duration<double>(last_ - opened_).count();
}

Frame FrameSource::make_frame(GrayImage image, double timestamp) {
  return Frame{std::move(image), next_sequence_++, timestamp};
}

std::unique_ptr<FrameSource> open_source(const FrameSourceSpec& spec) {
  switch (spec.kind) {
    case SourceKind::IpCamera:
      if (spec.ip_mode == IpMode::Mjpeg) return std::make_unique<MjpegSource>(spec);
      return std::make_unique<SnapshotSource>(spec);
    case SourceKind::Directory:
      return std::make_unique<DirectorySource>(spec);
    case SourceKind::Synthetic:
      return std::make_unique<SyntheticSource>(spec);
  }
  throw Error(ErrorCode::BadEndpoint, "unknown source kind");
}

// ---------------------------------------------------------------------------

MjpegParser::MjpegParser(std::string boundary) : delimiter_("--" + std::move(boundary)) {
  if (delimiter_.size() <= 2) throw Error(ErrorCode::InvalidArgument, "empty multipart boundary");
}

std::vector<std::vector<std::uint8_t>> MjpegParser::feed(std::span<const std::uint8_t> chunk) {
  std::vector<std::vector<std::uint8_t>> parts;
  if (finished_) return parts;
  buffer_.append(reinterpret_cast<const char*>(chunk.data()), chunk.size());

  if (!started_) {
    const auto first = buffer_.find(delimiter_);
    if (first == std::string::npos) {
      if (buffer_.size() > kMaxPreambleBytes) throw Error(ErrorCode::MalformedStream, "multipart boundary never found");
      return parts;
    }
    buffer_.erase(0, first);
    started_ = true;
  }

  // Invariant: buffer_ starts with the delimiter of the next part.
  for (;;) {
    const std::size_t after = delimiter_.size();
    if (buffer_.size() < after + 2) return parts;
    if (buffer_.compare(after, 2, "--") == 0) {
      finished_ = true;
      buffer_.clear();
      return parts;
    }

    const auto line_end = buffer_.find('\n', after);
    if (line_end == std::string::npos) {
      if (buffer_.size() - after > kMaxHeaderBytes) throw Error(ErrorCode::HeaderTooLarge, "boundary line too long");
      return parts;
    }

    const std::size_t headers_begin = line_end + 1;
    std::size_t body_begin = std::string::npos;
    std::size_t headers_end = headers_begin;
    if (buffer_.compare(headers_begin, 2, "\r\n") == 0) {
      body_begin = headers_begin + 2;
    } else if (buffer_.compare(headers_begin, 1, "\n") == 0) {
      body_begin = headers_begin + 1;
    } else {
      const auto crlf = find_from(buffer_, "\r\n\r\n", headers_begin);
      const auto lf = find_from(buffer_, "\n\n", headers_begin);
      const auto term = std::min(crlf, lf);
      if (term != std::string::npos) {
        headers_end = term;
        body_begin = term + (term == crlf ? 4 : 2);
      }
    }
    const std::size_t header_bytes =
        (body_begin == std::string::npos ? buffer_.size() : headers_end) - headers_begin;
    if (header_bytes > kMaxHeaderBytes) {
      throw Error(ErrorCode::HeaderTooLarge, "part header exceeds " + std::to_string(kMaxHeaderBytes) + " bytes");
    }
    if (body_begin == std::string::npos) return parts;

    const auto length = content_length(std::string_view(buffer_).substr(headers_begin, headers_end - headers_begin));
    std::size_t body_end = 0;
    std::size_t next = 0;
    if (length) {
      body_end = body_begin + *length;
      if (buffer_.size() < body_end) return parts;
      next = find_from(buffer_, delimiter_, body_end);
      if (next == std::string::npos) return parts;
    } else {
      next = find_from(buffer_, delimiter_, body_begin);
      if (next == std::string::npos) return parts;
      body_end = next;
      if (body_end > body_begin && buffer_[body_end - 1] == '\n') --body_end;
      if (body_end > body_begin && buffer_[body_end - 1] == '\r') --body_end;
    }

    parts.emplace_back(buffer_.begin() + static_cast<std::ptrdiff_t>(body_begin),
                       buffer_.begin() + static_cast<std::ptrdiff_t>(body_end));
    buffer_.erase(0, next);
  }
}

std::vector<std::vector<std::uint8_t>> parse_mjpeg(std::span<const std::uint8_t> stream, std::string_view boundary) {
  if (stream.empty()) return {};
  MjpegParser parser{std::string(boundary)};
  auto parts = parser.feed(stream);
  if (!parser.started()) throw Error(ErrorCode::MalformedStream, "multipart boundary never found");
  return parts;
}

std::string boundary_from_content_type(std::string_view content_type) {
  const std::string lower = lowercase(content_type);
  const auto key = lower.find("boundary=");
  if (key == std::string::npos) return {};
  std::string_view value = content_type.substr(key + 9);
  if (const auto semi = value.find(';'); semi != std::string_view::npos) value = value.substr(0, semi);
  while (!value.empty() && value.back() == ' ') value.remove_suffix(1);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  if (value.substr(0, 2) == "--") value.remove_prefix(2);
  return std::string(value);
}

}  // namespace handsign
