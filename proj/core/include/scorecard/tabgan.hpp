#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scorecard/dataset.hpp"
#include "scorecard/random.hpp"

namespace scorecard {

struct GanConfig {
  int epochs = 500;
  int noise_dim = 16;
  int hidden_units = 32;
  /// 0 selects min(32, number of training rows).
  int batch_size = 0;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fully connected net with one tanh hidden layer and a linear output.
/// Samples are columns: forward() maps (in x n) to (out x n).
struct Mlp {
  Eigen::MatrixXd w1;  // hidden x in
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // out x hidden
  Eigen::VectorXd b2;

  /// Glorot-uniform weights, zero biases.
  static Mlp random(int in, int hidden, int out, Rng& rng);
  static Mlp zeros_like(const Mlp& other);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  std::size_t num_parameters() const;
  /// Flat view order: w1, b1, w2, b2 (column-major within matrices).
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Non-saturating adversarial losses on logits:
//   discriminator: mean softplus(-D(real)) + mean softplus(D(fake))
//   generator:     mean softplus(-D(G(noise)))
double discriminator_loss(const Mlp& disc, const Eigen::MatrixXd& real,
                          const Eigen::MatrixXd& fake);
double generator_loss(const Mlp& gen, const Mlp& disc,
                      const Eigen::MatrixXd& noise);
Mlp discriminator_gradient(const Mlp& disc, const Eigen::MatrixXd& real,
                           const Eigen::MatrixXd& fake);
Mlp generator_gradient(const Mlp& gen, const Mlp& disc,
                       const Eigen::MatrixXd& noise);

/// Plain momentum SGD over an Mlp's parameters.
class MomentumSgd {
 public:
  MomentumSgd(const Mlp& shape, double learning_rate, double momentum);
  void step(Mlp& params, const Mlp& grad);

 private:
  Mlp velocity_;
  double learning_rate_;
  double momentum_;
};

/// Trained generator plus the transforms needed to emit rows in data units.
struct Generator {
  Mlp net;
  int noise_dim = 0;
  std::vector<std::string> feature_names;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // > 0
  Eigen::VectorXd lower;  // training minimum
  Eigen::VectorXd upper;  // training maximum
};

struct GanTrainResult {
  Generator generator;
  std::vector<double> discriminator_losses;  // one per epoch
  std::vector<double> generator_losses;
  std::vector<std::string> warnings;
};

/// Trains on every row of `rows` (callers pass the minority subset).
/// Throws ValidationError for categorical features or fewer than 8 rows and
/// NumericalError when a loss becomes non-finite.
GanTrainResult train_gan(const Dataset& rows, const GanConfig& cfg);

/// count x n_features samples, de-standardized and clipped to the training
/// range.
RowMatrix generate(const Generator& gen, std::size_t count, std::uint64_t seed);

/// Mean over features of (|mean difference| + |SD difference|) / SD of the
/// reference rows.
double moment_error(const RowMatrix& reference, const RowMatrix& sample);
RowMatrix to_matrix(const Dataset& ds);

}  // namespace scorecard
