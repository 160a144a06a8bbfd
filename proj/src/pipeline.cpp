#include "handsign/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "handsign/error.hpp"

namespace handsign {
namespace {

std::string format_percent(double pct) {
  char buf[32];
  if (std::abs(pct - std::round(pct)) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%.0f", pct);
  } else {
    std::snprintf(buf, sizeof buf, "%.1f", pct);
  }
  return buf;
}

bool is_contour_failure(ErrorCode code) {
  return code == ErrorCode::NoContour || code == ErrorCode::DegeneratePath || code == ErrorCode::DegenerateSegment;
}

}  // namespace

std::string PipelineConfig::to_string() const {
  std::ostringstream os;
  os << "profile=" << profile.dims.width << "x" << profile.dims.height << " (" << profile.name << ")"
     << " backend=" << backend_name(backend);
  if (backend == Backend::Pca) {
    os << " k=" << (pca_k == 0 ? std::string("auto") : std::to_string(pca_k));
  } else {
    os << " tokens=" << token_count << " hidden=" << nn.hidden_width << " rate=" << nn.learning_rate
       << " max_epochs=" << nn.max_epochs << " target_mse=" << nn.target_mse << " seed=" << nn.seed;
  }
  if (!source.empty()) os << " source=" << source << " cadence=" << cadence;
  return os.str();
}

Backend parse_backend(std::string_view text) {
  if (text == "pca") return Backend::Pca;
  if (text == "nn") return Backend::Nn;
  throw Error(ErrorCode::InvalidArgument, "backend must be pca or nn, got '" + std::string(text) + "'");
}

std::string_view backend_name(Backend backend) { return backend == Backend::Pca ? "pca" : "nn"; }

Eigen::VectorXd pca_features(const GrayImage& img, ImageDims dims) {
  return flatten(binarize_otsu(resize(img, dims.width, dims.height)));
}

TokenSequence nn_tokens(const GrayImage& img, ImageDims dims, int token_count) {
  const GradientImage grad = sobel(resize(img, dims.width, dims.height));
  const BinaryImage edges = edge_map(grad, magnitude_threshold(grad));
  return tokens(resample(trace_contour(edges), token_count));
}

TrainSummary train_model(const GestureDB& db, const PipelineConfig& config) {
  if (db.entries.empty()) throw Error(ErrorCode::EmptyDatabase, "no training images");
  const ImageDims dims = db.profile.dims;
  TrainSummary summary;
  summary.labels = db.labels().size();

  if (config.backend == Backend::Pca) {
    TrainingSet ts;
    ts.vectors.resize(static_cast<Eigen::Index>(dims.width) * dims.height,
                      static_cast<Eigen::Index>(db.entries.size()));
    for (std::size_t i = 0; i < db.entries.size(); ++i) {
      ts.vectors.col(static_cast<Eigen::Index>(i)) = pca_features(db.entries[i].gray, dims);
      ts.labels.push_back(db.entries[i].label);
    }
    const Eigen::Index k = config.pca_k == 0 ? default_component_count(ts) : config.pca_k;
    summary.model = train_pca(ts, k, dims);
    summary.samples = db.entries.size();
    summary.features = ts.vectors.rows();
    summary.components = k;
    return summary;
  }

  std::vector<std::pair<TokenSequence, std::string>> samples;
  for (const auto& entry : db.entries) {
    try {
      samples.emplace_back(nn_tokens(entry.gray, dims, config.token_count), entry.label);
    } catch (const Error& e) {
      if (!is_contour_failure(e.code())) throw;
      ++summary.skipped;
    }
  }
  if (samples.empty()) throw Error(ErrorCode::EmptyDataset, "no image produced a usable contour");
  NnTrainResult result = train_nn(samples, config.nn, dims);
  summary.samples = samples.size();
  summary.features = result.model.input_width();
  summary.epochs = result.epochs;
  summary.mse = result.mse;
  summary.converged = result.converged;
  summary.model = std::move(result.model);
  return summary;
}

RankedMatches classify(const Model& model, const GrayImage& img) {
  if (const auto* pca = std::get_if<PcaModel>(&model)) {
    return classify_pca(*pca, pca_features(img, pca->dims));
  }
  const auto& nn = std::get<NnModel>(model);
  return classify_nn(nn, nn_tokens(img, nn.dims, nn.token_count));
}

Evaluation evaluate(const Model& model, const GestureDB& test_db) {
  std::map<std::string, EvalRow> rows;
  Evaluation eval;
  for (const auto& entry : test_db.entries) {
    auto& row = rows[entry.label];
    row.label = entry.label;
    ++row.trials;
    ++eval.overall.trials;
    bool hit = false;
    try {
      hit = classify(model, entry.gray).top().label == entry.label;
    } catch (const Error& e) {
      if (!is_contour_failure(e.code())) throw;
    }
    if (hit) {
      ++row.hits;
      ++eval.overall.hits;
    }
  }
  for (auto& [label, row] : rows) eval.rows.push_back(row);
  return eval;
}

std::string format_table(const Evaluation& eval) {
  std::ostringstream os;
  auto line = [&](const EvalRow& r) {
    os << r.label << " " << r.hits << "/" << r.trials << " " << format_percent(r.percent()) << "%\n";
  };
  for (const auto& r : eval.rows) line(r);
  line(eval.overall);
  return os.str();
}

std::string format_csv(const Evaluation& eval) {
  std::ostringstream os;
  os << "label,trials,hits,percent\n";
  auto line = [&](const EvalRow& r, const std::string& label) {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.6f", r.percent());
    os << label << "," << r.trials << "," << r.hits << "," << pct << "\n";
  };
  for (const auto& r : eval.rows) line(r, r.label);
  line(eval.overall, "overall");
  return os.str();
}

}  // namespace handsign
