#pragma once

// Emitter classification from decomposition results: banded per-mode
// magnitude spectra as features, and sparse-representation classification
// (orthogonal matching pursuit over a labeled dictionary, decided by the
// smallest class-restricted reconstruction residual).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "jvmd/errors.hpp"
#include "jvmd/types.hpp"

namespace jvmd {

struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const FeatureVector&) const = default;
};

struct LabeledFeature {
  int label = 0;
  FeatureVector features;
};

/// Anything exposing shared mode spectra and their center frequencies
/// (VmdResult, JvmdResult).
template <typename R>
concept Decomposition = requires(const R& r) {
  { r.mode_spectra } -> std::convertible_to<std::vector<AnalyticSpectrum>>;
  { r.omegas } -> std::convertible_to<std::vector<double>>;
};

inline constexpr std::size_t kDefaultBandsPerMode = 32;

/// For each mode: positive-half magnitude spectrum averaged into `bands`
/// equal-width bands, block scaled to unit L2 norm (left as zeros for a silent
/// mode). Then the K center frequencies as fractions of Nyquist (2 * omega).
template <Decomposition R>
FeatureVector extract_features(const R& result, std::size_t bands = kDefaultBandsPerMode) {
  if (bands < 4) throw InvalidConfig("extract_features needs at least 4 bands per mode");
  const std::size_t num_modes = result.mode_spectra.size();
  if (num_modes == 0 || result.omegas.size() != num_modes) {
    throw InvalidInput("extract_features: decomposition has no modes");
  }
  FeatureVector fv;
  fv.values.reserve(num_modes * bands + num_modes);
  for (const auto& spectrum : result.mode_spectra) {
    const auto half = spectrum.positive_half();
    const std::size_t bins = half.size();
    if (bins < bands) throw InvalidConfig("more bands than spectral bins");
    std::vector<double> block(bands);
    for (std::size_t d = 0; d < bands; ++d) {
      const std::size_t lo = d * bins / bands;
      const std::size_t hi = (d + 1) * bins / bands;
      double acc = 0.0;
      for (std::size_t i = lo; i < hi; ++i) acc += std::abs(half[i]);
      block[d] = acc / static_cast<double>(hi - lo);
    }
    double norm = 0.0;
    for (double v : block) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (auto& v : block) v /= norm;
    }
    fv.values.insert(fv.values.end(), block.begin(), block.end());
  }
  for (double w : result.omegas) fv.values.push_back(2.0 * w);
  return fv;
}

/// Unit-norm labeled atoms stored column-wise.
class Dictionary {
public:
  Dictionary(Eigen::MatrixXd atoms, std::vector<int> labels)
      : atoms_(std::move(atoms)), labels_(std::move(labels)) {
    if (atoms_.cols() == 0) throw InvalidInput("dictionary has no atoms");
    if (static_cast<std::size_t>(atoms_.cols()) != labels_.size()) {
      throw InvalidInput("dictionary atoms and labels differ in count");
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(atoms_.rows()); }
  const Eigen::MatrixXd& atoms() const noexcept { return atoms_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  std::vector<int> classes() const {
    std::set<int> s(labels_.begin(), labels_.end());
    return {s.begin(), s.end()};
  }

private:
  Eigen::MatrixXd atoms_;
  std::vector<int> labels_;
};

/// Atoms are the unit-normalized training vectors in input order.
inline Dictionary build_dictionary(std::span<const LabeledFeature> training) {
  if (training.empty()) throw InvalidInput("build_dictionary: no training samples");
  const std::size_t dim = training.front().features.size();
  if (dim == 0) throw InvalidInput("build_dictionary: empty feature vectors");
  Eigen::MatrixXd atoms(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(training.size()));
  std::vector<int> labels;
  labels.reserve(training.size());
  for (std::size_t c = 0; c < training.size(); ++c) {
    const auto& v = training[c].features.values;
    if (v.size() != dim) throw DimensionMismatch("build_dictionary: feature lengths differ");
    Eigen::Map<const Eigen::VectorXd> col(v.data(), static_cast<Eigen::Index>(dim));
    const double norm = col.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidInput("build_dictionary: training vector " + std::to_string(c) +
                         " has zero or non-finite norm");
    }
    atoms.col(static_cast<Eigen::Index>(c)) = col / norm;
    labels.push_back(training[c].label);
  }
  return Dictionary(std::move(atoms), std::move(labels));
}

struct SrcDecision {
  int label = 0;
  /// ||q - D_c x_c|| for every class in the dictionary, q the normalized query.
  std::map<int, double> class_residuals;
  std::vector<Eigen::Index> selected;
  Eigen::VectorXd coefficients;
};

/// Greedy orthogonal matching pursuit: at most `sparsity` atoms, coefficients
/// refit by least squares after each selection.
inline void orthogonal_matching_pursuit(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& query,
                                        std::size_t sparsity, std::vector<Eigen::Index>& selected,
                                        Eigen::VectorXd& coefficients) {
  selected.clear();
  coefficients.resize(0);
  Eigen::VectorXd residual = query;
  std::vector<bool> used(static_cast<std::size_t>(atoms.cols()), false);
  const double stop = 1e-12 * std::max(1.0, query.norm());
  for (std::size_t t = 0; t < sparsity; ++t) {
    const Eigen::VectorXd corr = atoms.transpose() * residual;
    Eigen::Index best = -1;
    double best_abs = 0.0;
    for (Eigen::Index a = 0; a < corr.size(); ++a) {
      if (used[static_cast<std::size_t>(a)]) continue;
      if (std::abs(corr[a]) > best_abs) {
        best_abs = std::abs(corr[a]);
        best = a;
      }
    }
    if (best < 0 || best_abs <= 1e-14) break;
    used[static_cast<std::size_t>(best)] = true;
    selected.push_back(best);

    Eigen::MatrixXd sub(atoms.rows(), static_cast<Eigen::Index>(selected.size()));
    for (std::size_t s = 0; s < selected.size(); ++s) {
      sub.col(static_cast<Eigen::Index>(s)) = atoms.col(selected[s]);
    }
    coefficients = sub.colPivHouseholderQr().solve(query);
    residual = query - sub * coefficients;
    if (residual.norm() <= stop) break;
  }
}

/// Sparse-representation classification of one query. Ties in the class
/// residual go to the smallest label.
inline SrcDecision src_classify(const Dictionary& dict, const FeatureVector& query,
                                std::size_t sparsity) {
  if (sparsity < 1 || sparsity > dict.size()) {
    throw InvalidConfig("sparsity must be in [1, number of atoms]");
  }
  if (query.size() != dict.dimension()) {
    throw DimensionMismatch("query length differs from dictionary atom length");
  }
  Eigen::Map<const Eigen::VectorXd> raw(query.values.data(),
                                        static_cast<Eigen::Index>(query.size()));
  const double norm = raw.norm();
  if (!(norm > 0.0)) throw Undecidable("cannot classify a zero feature vector");
  const Eigen::VectorXd q = raw / norm;

  SrcDecision out;
  orthogonal_matching_pursuit(dict.atoms(), q, sparsity, out.selected, out.coefficients);

  const auto& labels = dict.labels();
  for (int c : dict.classes()) {
    Eigen::VectorXd recon = Eigen::VectorXd::Zero(q.size());
    for (std::size_t s = 0; s < out.selected.size(); ++s) {
      const auto a = out.selected[s];
      if (labels[static_cast<std::size_t>(a)] == c) {
        recon += out.coefficients[static_cast<Eigen::Index>(s)] * dict.atoms().col(a);
      }
    }
    out.class_residuals[c] = (q - recon).norm();
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [c, r] : out.class_residuals) {
    if (r < best) {
      best = r;
      out.label = c;
    }
  }
  return out;
}

struct ClassificationReport {
  std::vector<int> classes;                       // sorted; row/column order of confusion
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

/// Classifies every test vector and accumulates the confusion matrix. Classes
/// absent from the dictionary still get a row; their samples count as errors.
/// A zero query has all class residuals equal, so it takes the smallest label.
inline ClassificationReport evaluate(const Dictionary& dict, std::span<const LabeledFeature> tests,
                                     std::size_t sparsity) {
  if (tests.empty()) throw InvalidInput("evaluate: empty test set");
  std::set<int> all(dict.labels().begin(), dict.labels().end());
  for (const auto& t : tests) all.insert(t.label);

  ClassificationReport report;
  report.classes.assign(all.begin(), all.end());
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < report.classes.size(); ++i) index[report.classes[i]] = i;
  report.confusion.assign(report.classes.size(), std::vector<std::size_t>(report.classes.size()));

  const int fallback = dict.classes().front();
  for (const auto& t : tests) {
    int predicted = fallback;
    try {
      predicted = src_classify(dict, t.features, sparsity).label;
    } catch (const Undecidable&) {
    }
    ++report.confusion[index.at(t.label)][index.at(predicted)];
    ++report.total;
    if (predicted == t.label) ++report.correct;
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

}  // namespace jvmd
