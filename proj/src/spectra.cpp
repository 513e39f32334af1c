#include "qclbm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qclbm/dense.hpp"
#include "qclbm/error.hpp"

namespace qclbm::spectra {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_cap(Index dim, Index cap) {
  if (dim > cap) {
    throw Error(ErrorCode::DimensionCap,
                fmt::format("dim(A) = {} exceeds the eigensolver cap {}; use spectrum "
                            "substitution from a smaller lattice",
                            dim, cap));
  }
}

}  // namespace

Eigenbasis Eigenbasis::from_symmetric(const Eigen::MatrixXd& a) {
  auto eig = dense::symmetric_eigen(a, true);
  Eigenbasis b;
  b.values_ = std::move(eig.values);
  b.vectors_ = std::move(eig.vectors);
  return b;
}

Eigenbasis Eigenbasis::from_embedding(const linsys::HermitianEmbedding& embedding, Index cap) {
  check_cap(embedding.dim(), cap);
  auto svd = dense::svd(Eigen::MatrixXd(embedding.tilde_a), true);
  const Index n = embedding.unpadded_dim;
  const Index pad = embedding.padded_dim - n;

  Eigenbasis b;
  b.structured_ = true;
  b.n_ = n;
  b.pad_ = pad;
  b.values_.resize(embedding.dim());
  b.values_.segment(0, n) = svd.sigma;
  b.values_.segment(n, n) = -svd.sigma;
  b.values_.segment(2 * n, pad).setOnes();
  b.values_.segment(2 * n + pad, pad).setConstant(-1.0);
  b.u_ = std::move(svd.u);
  b.v_ = std::move(svd.v);
  return b;
}

Eigen::VectorXd Eigenbasis::project(const Eigen::VectorXd& v) const {
  if (v.size() != dim()) throw Error(ErrorCode::InvalidArgument, "project: size mismatch");
  if (!structured_) return vectors_.transpose() * v;

  const Index p = n_ + pad_;
  const Eigen::VectorXd vt = v_.transpose() * v.head(n_);
  const Eigen::VectorXd ub = u_.transpose() * v.segment(p, n_);
  Eigen::VectorXd c(dim());
  c.segment(0, n_) = kInvSqrt2 * (vt + ub);
  c.segment(n_, n_) = kInvSqrt2 * (vt - ub);
  const auto top = v.segment(n_, pad_);
  const auto bot = v.segment(p + n_, pad_);
  c.segment(2 * n_, pad_) = kInvSqrt2 * (top + bot);
  c.segment(2 * n_ + pad_, pad_) = kInvSqrt2 * (top - bot);
  return c;
}

Eigen::VectorXd Eigenbasis::synthesize(const Eigen::VectorXd& c) const {
  if (c.size() != dim()) throw Error(ErrorCode::InvalidArgument, "synthesize: size mismatch");
  if (!structured_) return vectors_ * c;

  const Index p = n_ + pad_;
  Eigen::VectorXd v(dim());
  const auto cp = c.segment(0, n_);
  const auto cm = c.segment(n_, n_);
  v.head(n_) = kInvSqrt2 * (v_ * (cp + cm));
  v.segment(p, n_) = kInvSqrt2 * (u_ * (cp - cm));
  const auto pp = c.segment(2 * n_, pad_);
  const auto pm = c.segment(2 * n_ + pad_, pad_);
  v.segment(n_, pad_) = kInvSqrt2 * (pp + pm);
  v.segment(p + n_, pad_) = kInvSqrt2 * (pp - pm);
  return v;
}

std::string SpectrumDescriptor::key() const {
  std::string k = fmt::format("{}_nx{}_ny{}_om{}_nt{}", to_string(boundary), nx, ny, omega, n_steps);
  if (boundary == BoundaryKind::LidDriven) k += fmt::format("_v{},{}", v_lid[0], v_lid[1]);
  if (substituted) k += fmt::format("_from{}x{}", source_nx, source_ny);
  return k;
}

std::uint64_t SpectrumDescriptor::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (const char ch : key()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

SpectrumDescriptor SpectrumDescriptor::for_grid(const LatticeGrid& grid, double omega, int n_steps) {
  SpectrumDescriptor d;
  d.nx = grid.nx();
  d.ny = grid.ny();
  d.boundary = grid.boundary();
  d.omega = omega;
  d.n_steps = n_steps;
  d.v_lid = grid.lid_velocity();
  return d;
}

Spectrum::Spectrum(std::vector<double> eigenvalues, SpectrumDescriptor descriptor)
    : values_(std::move(eigenvalues)), descriptor_(std::move(descriptor)) {
  std::sort(values_.begin(), values_.end());
  double lo = 0.0;
  for (const double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NumericalFailure, "non-finite eigenvalue");
    const double a = std::abs(v);
    lambda_max_ = std::max(lambda_max_, a);
    if (a > 0.0 && (lo == 0.0 || a < lo)) lo = a;
  }
  if (lambda_max_ <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "spectrum must contain a nonzero eigenvalue");
  }
  lambda_min_ = lo;
}

std::size_t Spectrum::positive_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.0; }));
}

Spectrum eigen_spectrum(const linsys::HermitianEmbedding& embedding,
                        const SpectrumDescriptor& descriptor, Index cap) {
  check_cap(embedding.dim(), cap);
  const auto svd = dense::svd(Eigen::MatrixXd(embedding.tilde_a), false);
  const Index n = embedding.unpadded_dim;
  const Index pad = embedding.padded_dim - n;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(embedding.dim()));
  for (Index i = 0; i < n; ++i) {
    values.push_back(svd.sigma(i));
    values.push_back(-svd.sigma(i));
  }
  for (Index i = 0; i < pad; ++i) {
    values.push_back(1.0);
    values.push_back(-1.0);
  }
  return Spectrum(std::move(values), descriptor);
}

std::size_t SpectrumHistogram::total() const {
  std::size_t t = 0;
  for (const auto c : counts) t += c;
  return t;
}

SpectrumHistogram histogram(std::span<const double> eigenvalues, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bin width must be > 0, got {}", bin_width));
  }
  SpectrumHistogram h;
  h.bin_width = bin_width;
  for (const double v : eigenvalues) {
    if (!(v > 0.0)) continue;
    const auto bin = static_cast<std::size_t>(std::floor(v / bin_width));
    if (bin >= h.counts.size()) h.counts.resize(bin + 1, 0);
    ++h.counts[bin];
  }
  return h;
}

SpectrumHistogram histogram(const Spectrum& spectrum, double bin_width) {
  return histogram(std::span<const double>(spectrum.eigenvalues()), bin_width);
}

double zeta(const SpectrumHistogram& big, const SpectrumHistogram& small) {
  if (big.bin_width != small.bin_width) {
    throw Error(ErrorCode::MismatchedBinning,
                fmt::format("mismatched binning: widths {} and {}", big.bin_width, small.bin_width));
  }
  const std::size_t total = big.total();
  if (total == 0) return 0.0;
  std::size_t missing = 0;
  for (std::size_t k = 0; k < big.counts.size(); ++k) {
    if (small.count(k) == 0) missing += big.counts[k];
  }
  return static_cast<double>(missing) / static_cast<double>(total);
}

Spectrum substituted_spectrum(const Spectrum& small, const SpectrumDescriptor& target) {
  const auto& src = small.descriptor();
  if (target.nx == src.nx && target.ny == src.ny && !src.substituted) {
    return Spectrum(small.eigenvalues(), src);
  }
  SpectrumDescriptor d = target;
  d.substituted = true;
  d.source_nx = src.substituted ? src.source_nx : src.nx;
  d.source_ny = src.substituted ? src.source_ny : src.ny;
  return Spectrum(small.eigenvalues(), d);
}

void write_histogram_csv(std::ostream& os, const SpectrumHistogram& h) {
  fmt::print(os, "bin_lo,bin_hi,count\n");
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    fmt::print(os, "{},{},{}\n", h.bin_lo(k), h.bin_hi(k), h.counts[k]);
  }
}

void write_spectrum(std::ostream& os, const Spectrum& spectrum) {
  fmt::print(os, "# qclbm-spectrum v1\n# key={}\n# count={}\n", spectrum.descriptor().key(),
             spectrum.size());
  for (const double v : spectrum.eigenvalues()) fmt::print(os, "{:.17g}\n", v);
}

Spectrum read_spectrum(std::istream& is, const SpectrumDescriptor& descriptor) {
  std::string line;
  std::getline(is, line);
  if (line != "# qclbm-spectrum v1") throw Error(ErrorCode::Io, "not a qclbm spectrum file");
  std::getline(is, line);
  if (line != "# key=" + descriptor.key()) {
    throw Error(ErrorCode::Io, fmt::format("spectrum file key mismatch: '{}'", line));
  }
  std::getline(is, line);
  if (line.rfind("# count=", 0) != 0) throw Error(ErrorCode::Io, "spectrum file missing count");
  const std::size_t count = std::stoull(line.substr(8));
  std::vector<double> values;
  values.reserve(count);
  double v = 0.0;
  while (values.size() < count && is >> v) values.push_back(v);
  if (values.size() != count) throw Error(ErrorCode::Io, "truncated spectrum file");
  return Spectrum(std::move(values), descriptor);
}

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SpectrumCache::path_for(const SpectrumDescriptor& descriptor) const {
  return dir_ / fmt::format("spectrum_{:016x}.txt", descriptor.hash());
}

std::optional<Spectrum> SpectrumCache::load(const SpectrumDescriptor& descriptor) const {
  std::ifstream in(path_for(descriptor));
  if (!in) return std::nullopt;
  try {
    return read_spectrum(in, descriptor);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void SpectrumCache::store(const Spectrum& spectrum) const {
  const auto path = path_for(spectrum.descriptor());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", tmp.string()));
    write_spectrum(out, spectrum);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qclbm::spectra
