#include <gtest/gtest.h>

#include <cmath>

#include "scorecard/dataset.hpp"
#include "scorecard/error.hpp"
#include "scorecard/tabgan.hpp"

using namespace scorecard;

namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  return m;
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

template <class Loss>
void check_gradient(Mlp& params, const Mlp& analytic, Loss loss) {
  const double h = 1e-6;
  for (std::size_t i = 0; i < params.num_parameters(); ++i) {
    const double saved = params.parameter(i);
    params.parameter(i) = saved + h;
    const double up = loss();
    params.parameter(i) = saved - h;
    const double down = loss();
    params.parameter(i) = saved;
    const double numeric = (up - down) / (2 * h);
    if (std::abs(numeric) < 1e-7 && std::abs(analytic.parameter(i)) < 1e-7) continue;
    EXPECT_LT(relative_gap(analytic.parameter(i), numeric), 1e-4) << "parameter " << i;
  }
}

Dataset blob(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(5.0 + 2.0 * rng.normal());
    v.push_back(-1.0 + 0.5 * rng.normal());
  }
  return Dataset({FeatureSpec::continuous("x"), FeatureSpec::continuous("y")}, v,
                 std::vector<std::uint8_t>(n, 1));
}

}  // namespace

TEST(Mlp, ShapesAndParameterCount) {
  Rng rng(1);
  auto net = Mlp::random(3, 4, 2, rng);
  EXPECT_EQ(net.num_parameters(), 3u * 4 + 4 + 4 * 2 + 2);
  EXPECT_EQ(net.forward(Eigen::MatrixXd::Zero(3, 7)).rows(), 2);
  EXPECT_EQ(net.forward(Eigen::MatrixXd::Zero(3, 7)).cols(), 7);
  // Zero input and zero biases give zero output.
  EXPECT_DOUBLE_EQ(net.forward(Eigen::MatrixXd::Zero(3, 1)).norm(), 0.0);
}

TEST(Mlp, ForwardMatchesHandComputation) {
  Rng rng(2);
  auto net = Mlp::random(2, 3, 1, rng);
  net.b1 << 0.1, -0.2, 0.3;
  net.b2 << 0.5;
  Eigen::MatrixXd x(2, 1);
  x << 0.7, -1.1;
  double expected = net.b2(0);
  for (int h = 0; h < 3; ++h)
    expected += net.w2(0, h) * std::tanh(net.w1(h, 0) * 0.7 + net.w1(h, 1) * -1.1 + net.b1(h));
  EXPECT_NEAR(net.forward(x)(0, 0), expected, 1e-14);
}

TEST(GanGradients, DiscriminatorMatchesFiniteDifferences) {
  Rng rng(3);
  auto disc = Mlp::random(2, 5, 1, rng);
  disc.b1.setConstant(0.05);
  const auto real = normal_matrix(2, 6, rng);
  const auto fake = normal_matrix(2, 4, rng);
  const auto grad = discriminator_gradient(disc, real, fake);
  check_gradient(disc, grad, [&] { return discriminator_loss(disc, real, fake); });
}

TEST(GanGradients, GeneratorMatchesFiniteDifferences) {
  Rng rng(4);
  auto gen = Mlp::random(3, 4, 2, rng);
  gen.b1.setConstant(-0.1);
  gen.b2.setConstant(0.2);
  auto disc = Mlp::random(2, 5, 1, rng);
  const auto noise = normal_matrix(3, 5, rng);
  const auto grad = generator_gradient(gen, disc, noise);
  check_gradient(gen, grad, [&] { return generator_loss(gen, disc, noise); });
}

TEST(GanConfig, Validation) {
  GanConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.learning_rate = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.momentum = 1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(TrainGan, OneLossPerEpoch) {
  GanConfig cfg;
  cfg.epochs = 1;
  auto r = train_gan(blob(40, 5), cfg);
  EXPECT_EQ(r.discriminator_losses.size(), 1u);
  EXPECT_EQ(r.generator_losses.size(), 1u);
  cfg.epochs = 7;
  r = train_gan(blob(40, 5), cfg);
  EXPECT_EQ(r.generator_losses.size(), 7u);
}

TEST(TrainGan, RejectsSmallOrCategoricalInput) {
  EXPECT_THROW(train_gan(blob(7, 6), {}), ValidationError);
  Dataset cat({FeatureSpec::categorical("c", {"a", "b"})}, std::vector<double>(10, 0.0),
              std::vector<std::uint8_t>(10, 1));
  EXPECT_THROW(train_gan(cat, {}), ValidationError);
}

TEST(TrainGan, DeterministicAndWithinTrainingRange) {
  GanConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 9;
  const auto data = blob(64, 7);
  auto a = train_gan(data, cfg);
  auto b = train_gan(data, cfg);
  EXPECT_EQ(a.generator_losses, b.generator_losses);
  const auto sa = generate(a.generator, 200, 3);
  const auto sb = generate(b.generator, 200, 3);
  EXPECT_EQ(sa, sb);
  for (Eigen::Index j = 0; j < sa.cols(); ++j) {
    EXPECT_GE(sa.col(j).minCoeff(), a.generator.lower(j));
    EXPECT_LE(sa.col(j).maxCoeff(), a.generator.upper(j));
  }
}

TEST(TrainGan, LearnsMarginalMoments) {
  GanConfig cfg;
  cfg.epochs = 300;
  cfg.seed = 1;
  const auto data = blob(200, 8);
  auto r = train_gan(data, cfg);
  const auto sample = generate(r.generator, 2000, 4);
  EXPECT_LT(moment_error(to_matrix(data), sample), 0.5);
}

TEST(MomentError, ZeroForIdenticalSamples) {
  const auto m = to_matrix(blob(50, 9));
  EXPECT_DOUBLE_EQ(moment_error(m, m), 0.0);
  RowMatrix shifted = m;
  shifted.col(0).array() += 2.0;  // SD of column 0 is about 2
  EXPECT_NEAR(moment_error(m, shifted), 0.5 * 2.0 / std::sqrt(
      (m.col(0).array() - m.col(0).mean()).square().mean()), 1e-12);
}
