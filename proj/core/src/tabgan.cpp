#include "scorecard/tabgan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "scorecard/error.hpp"

namespace scorecard {

namespace {

// softplus(x) = log(1 + e^x), stable for large |x|.
double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

struct ForwardCache {
  Eigen::MatrixXd hidden;  // tanh activations
  Eigen::MatrixXd output;
};

ForwardCache forward_cached(const Mlp& net, const Eigen::MatrixXd& x) {
  ForwardCache cache;
  cache.hidden = ((net.w1 * x).colwise() + net.b1).array().tanh().matrix();
  cache.output = (net.w2 * cache.hidden).colwise() + net.b2;
  return cache;
}

// Backpropagates `upstream` (d loss / d output) through `net`, accumulating
// parameter gradients into `grad` when non-null. Returns d loss / d input.
Eigen::MatrixXd backward(const Mlp& net, const Eigen::MatrixXd& x,
                         const ForwardCache& cache,
                         const Eigen::MatrixXd& upstream, Mlp* grad) {
  Eigen::MatrixXd d_hidden = net.w2.transpose() * upstream;
  Eigen::MatrixXd d_pre =
      (d_hidden.array() * (1.0 - cache.hidden.array().square())).matrix();
  if (grad) {
    grad->w2 += upstream * cache.hidden.transpose();
    grad->b2 += upstream.rowwise().sum();
    grad->w1 += d_pre * x.transpose();
    grad->b1 += d_pre.rowwise().sum();
  }
  return net.w1.transpose() * d_pre;
}

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  return m;
}

}  // namespace

void GanConfig::validate() const {
  if (epochs < 1) throw ValidationError("gan: epochs must be >= 1");
  if (noise_dim < 1 || hidden_units < 1)
    throw ValidationError("gan: noise_dim and hidden_units must be >= 1");
  if (batch_size < 0) throw ValidationError("gan: batch_size must be >= 0");
  if (!(learning_rate > 0.0)) throw ValidationError("gan: learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ValidationError("gan: momentum must be in [0, 1)");
}

Mlp Mlp::random(int in, int hidden, int out, Rng& rng) {
  Mlp net;
  auto fill = [&rng](Eigen::MatrixXd& w, int fan_in, int fan_out) {
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        w(r, c) = (2.0 * rng.uniform01() - 1.0) * a;
  };
  net.w1.resize(hidden, in);
  fill(net.w1, in, hidden);
  net.b1 = Eigen::VectorXd::Zero(hidden);
  net.w2.resize(out, hidden);
  fill(net.w2, hidden, out);
  net.b2 = Eigen::VectorXd::Zero(out);
  return net;
}

Mlp Mlp::zeros_like(const Mlp& other) {
  Mlp net;
  net.w1 = Eigen::MatrixXd::Zero(other.w1.rows(), other.w1.cols());
  net.b1 = Eigen::VectorXd::Zero(other.b1.size());
  net.w2 = Eigen::MatrixXd::Zero(other.w2.rows(), other.w2.cols());
  net.b2 = Eigen::VectorXd::Zero(other.b2.size());
  return net;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  return forward_cached(*this, x).output;
}

std::size_t Mlp::num_parameters() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

double& Mlp::parameter(std::size_t i) {
  auto n1 = static_cast<std::size_t>(w1.size());
  if (i < n1) return w1.data()[i];
  i -= n1;
  auto n2 = static_cast<std::size_t>(b1.size());
  if (i < n2) return b1.data()[i];
  i -= n2;
  auto n3 = static_cast<std::size_t>(w2.size());
  if (i < n3) return w2.data()[i];
  i -= n3;
  return b2.data()[i];
}

double Mlp::parameter(std::size_t i) const {
  return const_cast<Mlp*>(this)->parameter(i);
}

double discriminator_loss(const Mlp& disc, const Eigen::MatrixXd& real,
                          const Eigen::MatrixXd& fake) {
  const Eigen::MatrixXd d_real = disc.forward(real);
  const Eigen::MatrixXd d_fake = disc.forward(fake);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < d_real.cols(); ++i) loss += softplus(-d_real(0, i)) / d_real.cols();
  for (Eigen::Index i = 0; i < d_fake.cols(); ++i) loss += softplus(d_fake(0, i)) / d_fake.cols();
  return loss;
}

double generator_loss(const Mlp& gen, const Mlp& disc, const Eigen::MatrixXd& noise) {
  const Eigen::MatrixXd d_fake = disc.forward(gen.forward(noise));
  double loss = 0.0;
  for (Eigen::Index i = 0; i < d_fake.cols(); ++i) loss += softplus(-d_fake(0, i)) / d_fake.cols();
  return loss;
}

Mlp discriminator_gradient(const Mlp& disc, const Eigen::MatrixXd& real,
                           const Eigen::MatrixXd& fake) {
  Mlp grad = Mlp::zeros_like(disc);
  const auto real_cache = forward_cached(disc, real);
  Eigen::MatrixXd up_real(1, real.cols());
  for (Eigen::Index i = 0; i < real.cols(); ++i)
    up_real(0, i) = (sigmoid(real_cache.output(0, i)) - 1.0) / real.cols();
  backward(disc, real, real_cache, up_real, &grad);

  const auto fake_cache = forward_cached(disc, fake);
  Eigen::MatrixXd up_fake(1, fake.cols());
  for (Eigen::Index i = 0; i < fake.cols(); ++i)
    up_fake(0, i) = sigmoid(fake_cache.output(0, i)) / fake.cols();
  backward(disc, fake, fake_cache, up_fake, &grad);
  return grad;
}

Mlp generator_gradient(const Mlp& gen, const Mlp& disc, const Eigen::MatrixXd& noise) {
  Mlp grad = Mlp::zeros_like(gen);
  const auto gen_cache = forward_cached(gen, noise);
  const auto disc_cache = forward_cached(disc, gen_cache.output);
  Eigen::MatrixXd up(1, noise.cols());
  for (Eigen::Index i = 0; i < noise.cols(); ++i)
    up(0, i) = (sigmoid(disc_cache.output(0, i)) - 1.0) / noise.cols();
  Eigen::MatrixXd d_fake = backward(disc, gen_cache.output, disc_cache, up, nullptr);
  backward(gen, noise, gen_cache, d_fake, &grad);
  return grad;
}

MomentumSgd::MomentumSgd(const Mlp& shape, double learning_rate, double momentum)
    : velocity_(Mlp::zeros_like(shape)),
      learning_rate_(learning_rate),
      momentum_(momentum) {}

void MomentumSgd::step(Mlp& params, const Mlp& grad) {
  velocity_.w1 = momentum_ * velocity_.w1 - learning_rate_ * grad.w1;
  velocity_.b1 = momentum_ * velocity_.b1 - learning_rate_ * grad.b1;
  velocity_.w2 = momentum_ * velocity_.w2 - learning_rate_ * grad.w2;
  velocity_.b2 = momentum_ * velocity_.b2 - learning_rate_ * grad.b2;
  params.w1 += velocity_.w1;
  params.b1 += velocity_.b1;
  params.w2 += velocity_.w2;
  params.b2 += velocity_.b2;
}

RowMatrix to_matrix(const Dataset& ds) {
  RowMatrix m(static_cast<Eigen::Index>(ds.num_rows()),
              static_cast<Eigen::Index>(ds.num_features()));
  std::copy(ds.values().begin(), ds.values().end(), m.data());
  return m;
}

GanTrainResult train_gan(const Dataset& rows, const GanConfig& cfg) {
  cfg.validate();
  if (!rows.all_continuous())
    throw ValidationError("gan: categorical features are not supported");
  if (rows.num_rows() < 8)
    throw ValidationError(
        fmt::format("gan: need at least 8 training rows, got {}", rows.num_rows()));
  const auto n = static_cast<Eigen::Index>(rows.num_rows());
  const auto p = static_cast<Eigen::Index>(rows.num_features());

  GanTrainResult result;
  Generator& gen = result.generator;
  gen.noise_dim = cfg.noise_dim;
  gen.feature_names = rows.feature_names();
  const RowMatrix raw = to_matrix(rows);
  gen.mean = raw.colwise().mean().transpose();
  gen.scale.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double var = (raw.col(j).array() - gen.mean(j)).square().mean();
    double sd = std::sqrt(var);
    gen.scale(j) = sd > 0.0 ? sd : 1.0;
  }
  gen.lower = raw.colwise().minCoeff().transpose();
  gen.upper = raw.colwise().maxCoeff().transpose();

  // Standardized data, one sample per column.
  Eigen::MatrixXd data(p, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      data(j, i) = (raw(i, j) - gen.mean(j)) / gen.scale(j);

  Rng rng(cfg.seed);
  gen.net = Mlp::random(cfg.noise_dim, cfg.hidden_units, static_cast<int>(p), rng);
  Mlp disc = Mlp::random(static_cast<int>(p), cfg.hidden_units, 1, rng);
  MomentumSgd gen_opt(gen.net, cfg.learning_rate, cfg.momentum);
  MomentumSgd disc_opt(disc, cfg.learning_rate, cfg.momentum);

  const Eigen::Index batch =
      cfg.batch_size > 0 ? std::min<Eigen::Index>(cfg.batch_size, n)
                         : std::min<Eigen::Index>(32, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double d_sum = 0.0, g_sum = 0.0;
    int steps = 0;
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index b = std::min(batch, n - start);
      Eigen::MatrixXd real(p, b);
      for (Eigen::Index k = 0; k < b; ++k)
        real.col(k) = data.col(order[static_cast<std::size_t>(start + k)]);

      Eigen::MatrixXd fake = gen.net.forward(normal_matrix(cfg.noise_dim, b, rng));
      const double d_loss = discriminator_loss(disc, real, fake);
      disc_opt.step(disc, discriminator_gradient(disc, real, fake));

      Eigen::MatrixXd noise = normal_matrix(cfg.noise_dim, b, rng);
      const double g_loss = generator_loss(gen.net, disc, noise);
      gen_opt.step(gen.net, generator_gradient(gen.net, disc, noise));

      d_sum += d_loss;
      g_sum += g_loss;
      ++steps;
    }
    const double d_mean = d_sum / steps, g_mean = g_sum / steps;
    if (!std::isfinite(d_mean) || !std::isfinite(g_mean) ||
        !gen.net.w1.allFinite() || !gen.net.w2.allFinite())
      throw NumericalError(fmt::format("gan: training diverged at epoch {}", epoch + 1));
    result.discriminator_losses.push_back(d_mean);
    result.generator_losses.push_back(g_mean);
  }

  // Mode-collapse guard, measured in standardized units before clipping.
  Rng probe(derive_seed(cfg.seed, "gan-collapse-probe"));
  const Eigen::MatrixXd sample = gen.net.forward(normal_matrix(cfg.noise_dim, 512, probe));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mu = sample.row(j).mean();
    const double sd = std::sqrt((sample.row(j).array() - mu).square().mean());
    if (sd < 0.01)
      result.warnings.push_back(fmt::format(
          "gan: possible mode collapse on feature '{}' (generated SD {:.4g} of training SD)",
          gen.feature_names[static_cast<std::size_t>(j)], sd));
  }
  return result;
}

RowMatrix generate(const Generator& gen, std::size_t count, std::uint64_t seed) {
  const auto p = gen.mean.size();
  RowMatrix out(static_cast<Eigen::Index>(count), p);
  if (count == 0) return out;
  Rng rng(seed);
  const Eigen::MatrixXd z = normal_matrix(gen.noise_dim, static_cast<Eigen::Index>(count), rng);
  const Eigen::MatrixXd x = gen.net.forward(z);
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      double v = x(j, i) * gen.scale(j) + gen.mean(j);
      out(i, j) = std::clamp(v, gen.lower(j), gen.upper(j));
    }
  return out;
}

double moment_error(const RowMatrix& reference, const RowMatrix& sample) {
  if (reference.cols() != sample.cols() || reference.rows() == 0 || sample.rows() == 0)
    throw ValidationError("moment_error: shape mismatch or empty input");
  double total = 0.0;
  for (Eigen::Index j = 0; j < reference.cols(); ++j) {
    auto stats = [j](const RowMatrix& m) {
      double mu = m.col(j).mean();
      double sd = std::sqrt((m.col(j).array() - mu).square().mean());
      return std::pair{mu, sd};
    };
    auto [mu_r, sd_r] = stats(reference);
    auto [mu_s, sd_s] = stats(sample);
    const double unit = sd_r > 0.0 ? sd_r : 1.0;
    total += (std::abs(mu_s - mu_r) + std::abs(sd_s - sd_r)) / unit;
  }
  return total / static_cast<double>(reference.cols());
}

}  // namespace scorecard
