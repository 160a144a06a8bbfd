#include "handsign/cli.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>
#include <variant>

#include <CLI11.hpp>

#include "handsign/acquisition.hpp"
#include "handsign/error.hpp"
#include "handsign/motion_gate.hpp"
#include "handsign/pipeline.hpp"

namespace fs = std::filesystem;

namespace handsign {
namespace {

struct GlobalOptions {
  std::string profile = "webcam";
  std::string backend = "pca";
  std::uint64_t seed = 42;
  int tokens = kDefaultTokenCount;
  bool csv = false;
  bool bell = false;
  bool no_timestamps = false;
  std::string source;
  double cadence = kDefaultCadence;
  int pca_k = 0;
  int hidden = 32;
  double rate = 0.3;
  int epochs = 2000;
  double target_mse = 0.01;
};

PipelineConfig make_config(const GlobalOptions& g) {
  PipelineConfig c;
  c.profile = Profile::parse(g.profile);
  c.backend = parse_backend(g.backend);
  c.token_count = g.tokens;
  c.pca_k = g.pca_k;
  c.nn.seed = g.seed;
  c.nn.hidden_width = g.hidden;
  c.nn.learning_rate = g.rate;
  c.nn.max_epochs = g.epochs;
  c.nn.target_mse = g.target_mse;
  c.source = g.source;
  c.cadence = g.cadence;
  return c;
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::NoConvergence ? kExitConvergence : kExitInput;
}

std::string percent(double pct, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, pct);
  return buf;
}

// Next unused numeric file stem in `dir`.
int next_capture_index(const fs::path& dir) {
  int next = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); }))
      continue;
    if (stem.size() < 10) next = std::max(next, std::stoi(stem) + 1);
  }
  return next;
}

int cmd_capture(const GlobalOptions& g, const std::string& label, const fs::path& out_dir, int count,
                long max_frames, std::ostream& out, std::ostream& err) {
  const PipelineConfig config = make_config(g);
  if (!is_valid_label(label)) {
    err << "capture: invalid label '" << label << "'\n";
    return kExitInput;
  }
  std::unique_ptr<FrameSource> source;
  try {
    source = open_source(FrameSourceSpec::parse(config.source, config.cadence));
  } catch (const Error& e) {
    err << "capture: " << e.what() << "\n";
    return kExitInput;
  }

  const fs::path dir = out_dir / label;
  int index = 0;
  try {
    fs::create_directories(dir);
    index = next_capture_index(dir);
  } catch (const std::exception& e) {
    err << "capture: cannot create " << dir.string() << ": " << e.what() << "\n";
    return kExitOutput;
  }

  const ImageDims dims = config.profile.dims;
  MotionGate gate(dims.width, dims.height);
  int captured = 0;
  long frames = 0;
  while (captured < count && (max_frames <= 0 || frames < max_frames)) {
    Frame frame{GrayImage(1, 1)};
    try {
      frame = source->next_frame();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EndOfStream || e.code() == ErrorCode::Timeout) break;
      if (e.code() == ErrorCode::DecodeError) {
        err << "capture: skipping frame: " << e.what() << "\n";
        continue;
      }
      err << "capture: " << e.what() << "\n";
      return kExitInput;
    }
    ++frames;
    const auto still = gate.push_frame(resize(frame.image, dims.width, dims.height));
    if (!still) continue;

    char name[32];
    std::snprintf(name, sizeof name, "%06d.pgm", index++);
    const fs::path path = dir / name;
    try {
      write_pgm_file(to_gray(binarize_otsu(*still)), path);
    } catch (const Error& e) {
      err << "capture: " << e.what() << "\n";
      return kExitOutput;
    }
    out << "captured " << path.string() << "\n";
    ++captured;
  }

  if (captured < count) {
    err << "capture: timed out waiting for static frames after " << frames << " frames (captured " << captured
        << " of " << count << ")\n";
    return kExitInput;
  }
  return kExitOk;
}

int cmd_train(const GlobalOptions& g, const fs::path& db_root, const fs::path& out_model, std::ostream& out,
              std::ostream& err) {
  PipelineConfig config;
  try {
    config = make_config(g);
  } catch (const Error& e) {
    err << "train: " << e.what() << "\n";
    return kExitInput;
  }
  TrainSummary summary;
  try {
    const GestureDB db = load_db(db_root, config.profile);
    summary = train_model(db, config);
  } catch (const Error& e) {
    err << "train: " << e.what() << "\n";
    return exit_code_for(e);
  }

  out << "config: " << config.to_string() << "\n";
  if (config.backend == Backend::Pca) {
    out << "trained pca: n=" << summary.samples << " N=" << summary.features << " k=" << summary.components
        << " labels=" << summary.labels << "\n";
  } else {
    out << "trained nn: n=" << summary.samples << " inputs=" << summary.features << " epochs=" << summary.epochs
        << " mse=" << percent(summary.mse, 6) << " labels=" << summary.labels;
    if (summary.skipped > 0) out << " skipped=" << summary.skipped;
    out << "\n";
    if (!summary.converged) {
      err << "train: NoConvergence: MSE " << summary.mse << " still above " << config.nn.target_mse << " after "
          << summary.epochs << " epochs\n";
      return kExitConvergence;
    }
  }

  try {
    save_model(summary.model, out_model);
  } catch (const Error& e) {
    err << "train: " << e.what() << "\n";
    return kExitOutput;
  }
  out << "model written to " << out_model.string() << "\n";
  return kExitOk;
}

int cmd_recognize(const GlobalOptions& g, const fs::path& model_path, const fs::path& image_path,
                  std::ostream& out, std::ostream& err) {
  RankedMatches matches;
  try {
    const Model model = load_model(model_path);
    matches = classify(model, read_image_file(image_path));
  } catch (const Error& e) {
    err << "recognize: " << e.what() << "\n";
    return kExitInput;
  }
  for (const auto& m : matches.entries) out << m.label << " " << percent(m.percentage, 8) << "%\n";
  out << "match: " << matches.top().label << "\n";
  if (g.bell) out << '\a';
  return kExitOk;
}

// Hand-off between the acquisition thread and the recognizer: at most three
// frames in flight. Live sources overwrite the oldest frame when full,
// finite sources wait for room.
class FrameQueue {
 public:
  using Item = std::variant<Frame, std::string>;

  explicit FrameQueue(bool drop_oldest) : drop_oldest_(drop_oldest) {}

  void push(Item item) {
    std::unique_lock lock(mu_);
    if (drop_oldest_) {
      if (items_.size() == kCapacity) items_.pop_front();
    } else {
      not_full_.wait(lock, [&] { return items_.size() < kCapacity || closed_; });
      if (closed_) return;
    }
    items_.push_back(std::move(item));
    not_empty_.notify_one();
  }

  // nullopt on timeout or once closed and drained.
  std::optional<Item> pop(std::chrono::milliseconds wait) {
    std::unique_lock lock(mu_);
    not_empty_.wait_for(lock, wait, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    Item item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  bool drained() {
    std::lock_guard lock(mu_);
    return closed_ && items_.empty();
  }

 private:
  static constexpr std::size_t kCapacity = 3;
  const bool drop_oldest_;
  std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<Item> items_;
  bool closed_ = false;
};

int cmd_watch(const GlobalOptions& g, const fs::path& model_path, std::ostream& out, std::ostream& err,
              const std::atomic<bool>* interrupt) {
  Model model;
  std::unique_ptr<FrameSource> source;
  try {
    model = load_model(model_path);
    source = open_source(FrameSourceSpec::parse(g.source, g.cadence));
  } catch (const Error& e) {
    err << "watch: " << e.what() << "\n";
    return kExitInput;
  }

  const ImageDims dims = dims_of(model);
  MotionGate gate(dims.width, dims.height);
  FrameQueue queue(source->live());
  std::atomic<bool> stop{false};

  std::thread producer([&] {
    while (!stop) {
      try {
        queue.push(source->next_frame());
      } catch (const Error& e) {
        if (e.code() == ErrorCode::EndOfStream) break;
        queue.push(std::string(e.what()));
      }
    }
    queue.close();
  });

  auto interrupted = [&] { return interrupt != nullptr && interrupt->load(); };
  while (!interrupted() && !queue.drained()) {
    auto item = queue.pop(std::chrono::milliseconds(100));
    if (!item) continue;
    if (const auto* message = std::get_if<std::string>(&*item)) {
      err << "watch: " << *message << "\n";
      continue;
    }
    const Frame& frame = std::get<Frame>(*item);
    const auto still = gate.push_frame(resize(frame.image, dims.width, dims.height));
    if (!still) continue;
    try {
      const RankedMatches matches = classify(model, *still);
      if (!g.no_timestamps) out << "[" << percent(frame.timestamp, 3) << "s] ";
      out << "frame " << frame.sequence_no - 2 << ": " << matches.top().label << " "
          << percent(matches.top().percentage, 2) << "%\n";
      if (g.bell) out << '\a';
      out.flush();
    } catch (const Error& e) {
      err << "watch: frame " << frame.sequence_no - 2 << ": " << e.what() << "\n";
    }
  }

  stop = true;
  queue.close();
  producer.join();
  return kExitOk;
}

int cmd_evaluate(const GlobalOptions& g, bool profile_given, const fs::path& model_path, const fs::path& db_root,
                 std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model(model_path);
    const ImageDims dims = dims_of(model);
    if (profile_given) {
      const Profile requested = Profile::parse(g.profile);
      if (requested.dims != dims) {
        err << "evaluate: profile mismatch: model is " << dims.width << "x" << dims.height << ", requested "
            << requested.to_string() << "\n";
        return kExitInput;
      }
    }
    const GestureDB db = load_db(db_root, Profile::custom(dims.width, dims.height));
    const Evaluation eval = evaluate(model, db);
    out << (g.csv ? format_csv(eval) : format_table(eval));
  } catch (const Error& e) {
    err << "evaluate: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* interrupt) {
  CLI::App app{"Hand-sign recognition: capture, train, recognize, watch, evaluate"};
  app.name("handsign");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  auto* profile_opt = app.add_option("--profile", g.profile, "webcam (60x80), android (100x100) or WxH");
  app.add_option("--backend", g.backend, "pca or nn")->check(CLI::IsMember({"pca", "nn"}));
  app.add_option("--seed", g.seed, "NN weight initialization seed");
  app.add_option("--tokens", g.tokens, "contour tokens per image (NN)")->check(CLI::Range(2, 4096));
  app.add_flag("--csv", g.csv, "evaluate: CSV output");
  app.add_flag("--bell", g.bell, "ring the terminal bell on each recognition");
  app.add_flag("--no-timestamps", g.no_timestamps, "watch: omit timestamps");
  app.add_option("--source", g.source, "http://host:port, mjpeg+http://host:port, synthetic:..., or a directory");
  app.add_option("--cadence", g.cadence, "seconds between acquisitions")->check(CLI::NonNegativeNumber);
  app.add_option("--k", g.pca_k, "PCA components (0 = min(n, 20))")->check(CLI::NonNegativeNumber);
  app.add_option("--hidden", g.hidden, "NN hidden units")->check(CLI::PositiveNumber);
  app.add_option("--rate", g.rate, "NN learning rate")->check(CLI::NonNegativeNumber);
  app.add_option("--epochs", g.epochs, "NN epoch budget")->check(CLI::PositiveNumber);
  app.add_option("--target-mse", g.target_mse, "NN stopping MSE")->check(CLI::NonNegativeNumber);

  std::string label;
  std::string out_dir;
  int count = 10;
  long max_frames = 0;
  auto* capture = app.add_subcommand("capture", "store motion-gated static frames in a gesture DB");
  capture->add_option("--label", label, "gesture label directory")->required();
  capture->add_option("--out", out_dir, "database root")->required();
  capture->add_option("--count", count, "static frames to capture")->check(CLI::PositiveNumber);
  capture->add_option("--max-frames", max_frames, "give up after this many frames (0 = never)");

  std::string db_root;
  std::string model_path;
  auto* train = app.add_subcommand("train", "train a model from a gesture DB");
  train->add_option("--db", db_root, "database root")->required();
  train->add_option("--out", model_path, "model file to write")->required();

  std::string image_path;
  auto* recognize = app.add_subcommand("recognize", "classify one image");
  recognize->add_option("--model", model_path, "model file")->required();
  recognize->add_option("image", image_path, "PGM or JPEG image")->required();

  auto* watch = app.add_subcommand("watch", "recognize static frames from a live source");
  watch->add_option("--model", model_path, "model file")->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "per-label recognition rates on a test DB");
  evaluate_cmd->add_option("--model", model_path, "model file")->required();
  evaluate_cmd->add_option("--db", db_root, "test database root")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*capture) {
      if (g.source.empty()) {
        err << "capture: --source is required\n";
        return kExitInput;
      }
      return cmd_capture(g, label, out_dir, count, max_frames, out, err);
    }
    if (*train) return cmd_train(g, db_root, model_path, out, err);
    if (*recognize) return cmd_recognize(g, model_path, image_path, out, err);
    if (*watch) {
      if (g.source.empty()) {
        err << "watch: --source is required\n";
        return kExitInput;
      }
      return cmd_watch(g, model_path, out, err, interrupt);
    }
    if (*evaluate_cmd) return cmd_evaluate(g, profile_opt->count() > 0, model_path, db_root, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitInput;
}

}  // namespace handsign
