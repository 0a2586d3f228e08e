#include "degen/potentials.hpp"

#include "degen/errors.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

namespace degen {

namespace {

void require_dimension(int dimension) {
  if (dimension != 2 && dimension != 3) {
    throw ConfigError("potential dimension must be 2 or 3, got " + std::to_string(dimension));
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("potential parameter '") + name + "' must be nonnegative and finite");
  }
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("potential parameter '") + name + "' must be positive and finite");
  }
}

double inverse_fourier_prefactor(int dimension) { return std::pow(2.0 * M_PI, -0.5 * dimension); }

// Sum of centred Gaussians amp * exp(-|x|^2 / (2 w^2)).
class GaussianSum final : public Potential::Model {
 public:
  struct Term {
    double amplitude;
    double width;
  };

  GaussianSum(int dimension, PotentialKind kind, std::vector<Term> terms, SignFlag sign,
              nlohmann::json params)
      : dimension_(dimension), kind_(kind), terms_(std::move(terms)), sign_(sign),
        params_(std::move(params)) {}

  double value(const Point& x) const override {
    const double r2 = x.squaredNorm();
    double v = 0.0;
    for (const Term& t : terms_) v += t.amplitude * std::exp(-r2 / (2.0 * t.width * t.width));
    return v;
  }

  std::complex<double> fourier(const Point& k) const override {
    const double k2 = k.squaredNorm();
    double v = 0.0;
    for (const Term& t : terms_) {
      v += t.amplitude * std::pow(t.width, dimension_) * std::exp(-0.5 * t.width * t.width * k2);
    }
    return {v, 0.0};
  }

  double integral() const override {
    double v = 0.0;
    for (const Term& t : terms_) {
      v += t.amplitude * std::pow(2.0 * M_PI, 0.5 * dimension_) * std::pow(t.width, dimension_);
    }
    return v;
  }

  int dimension() const override { return dimension_; }
  PotentialKind kind() const override { return kind_; }
  SignFlag sign() const override { return sign_; }
  bool is_radial() const override { return true; }
  nlohmann::json params() const override { return params_; }

 private:
  int dimension_;
  PotentialKind kind_;
  std::vector<Term> terms_;
  SignFlag sign_;
  nlohmann::json params_;
};

class BallWell final : public Potential::Model {
 public:
  BallWell(int dimension, double depth, double radius)
      : dimension_(dimension), depth_(depth), radius_(radius) {}

  double value(const Point& x) const override { return x.norm() <= radius_ ? -depth_ : 0.0; }

  std::complex<double> fourier(const Point& k) const override {
    const double q = k.norm() * radius_;
    const double a = radius_;
    if (dimension_ == 2) {
      // (2 pi)^-1 \int_{|x|<a} e^{-ikx} dx = a J1(ka) / k
      double shape = 0.0;  // J1(q) / q
      if (q < 1e-3) {
        shape = 0.5 * (1.0 - q * q / 8.0);
      } else {
        shape = std::cyl_bessel_j(1.0, q) / q;
      }
      return {-depth_ * a * a * shape, 0.0};
    }
    // (2 pi)^-3/2 4 pi a^3 (sin q - q cos q) / q^3
    double shape = 0.0;
    if (q < 1e-2) {
      const double q2 = q * q;
      shape = 1.0 / 3.0 - q2 / 30.0 + q2 * q2 / 840.0;
    } else {
      shape = (std::sin(q) - q * std::cos(q)) / (q * q * q);
    }
    return {-depth_ * inverse_fourier_prefactor(3) * 4.0 * M_PI * a * a * a * shape, 0.0};
  }

  double integral() const override {
    if (dimension_ == 2) return -depth_ * M_PI * radius_ * radius_;
    return -depth_ * 4.0 * M_PI * radius_ * radius_ * radius_ / 3.0;
  }

  int dimension() const override { return dimension_; }
  PotentialKind kind() const override { return PotentialKind::BallWell; }
  SignFlag sign() const override { return SignFlag::Nonpositive; }
  bool is_radial() const override { return true; }
  nlohmann::json params() const override { return {{"depth", depth_}, {"radius", radius_}}; }

 private:
  int dimension_;
  double depth_;
  double radius_;
};

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class Tabulated final : public Potential::Model {
 public:
  Tabulated(PotentialGrid grid, const TabulatedOptions& options) : grid_(std::move(grid)) {
    require_dimension(grid_.dimension);
    if (grid_.samples < 4 || !(grid_.box_edge > 0.0)) {
      throw ConfigError("tabulated potential needs at least 4 samples per edge and a positive box edge");
    }
    if (grid_.values.size() != grid_.point_count()) {
      throw ConfigError("tabulated potential: value count does not match samples^dimension");
    }
    for (double v : grid_.values) {
      if (!std::isfinite(v)) throw ConfigError("tabulated potential contains non-finite values");
    }
    const double h = grid_.spacing();
    band_ = M_PI / (2.0 * h);
    if (!(options.band_radius > 0.0)) {
      throw ConfigError("tabulated potential: band_radius must be positive");
    }
    if (options.band_radius > band_) {
      std::ostringstream msg;
      msg << "tabulated potential under-sampled: band radius " << options.band_radius
          << " exceeds the resolved band pi/(2h) = " << band_ << "; refine the grid";
      throw ConfigError(msg.str());
    }
    oversample_ = options.oversample > 0 ? options.oversample : (grid_.dimension == 2 ? 8 : 4);
    padded_ = grid_.samples * oversample_;
    dk_ = 2.0 * M_PI / (padded_ * h);
    build_table();
    classify_sign();
  }

  double value(const Point& x) const override {
    // Multilinear interpolation between grid nodes; zero outside the sampled box.
    const int n = grid_.dimension;
    const int G = grid_.samples;
    const double h = grid_.spacing();
    std::array<int, 3> base{};
    std::array<double, 3> frac{};
    for (int d = 0; d < n; ++d) {
      const double u = (x[d] + 0.5 * grid_.box_edge) / h;
      if (!(u >= 0.0) || u > G - 1) return 0.0;
      base[d] = std::min(static_cast<int>(std::floor(u)), G - 2);
      frac[d] = u - base[d];
    }
    double v = 0.0;
    const int corners = 1 << n;
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      std::size_t index = 0;
      for (int d = 0; d < n; ++d) {
        const int bit = (c >> d) & 1;
        w *= bit ? frac[d] : 1.0 - frac[d];
        index = index * G + static_cast<std::size_t>(base[d] + bit);
      }
      v += w * grid_.values[index];
    }
    return v;
  }

  std::complex<double> fourier(const Point& k) const override {
    if (k.norm() > band_) {
      std::ostringstream msg;
      msg << "tabulated V^ queried at |k| = " << k.norm() << " beyond its resolved band " << band_;
      throw OutOfBand(msg.str());
    }
    const int n = grid_.dimension;
    std::array<std::array<double, 4>, 3> weights{};
    std::array<int, 3> first{};
    for (int d = 0; d < n; ++d) {
      const double u = k[d] / dk_;
      const int i0 = static_cast<int>(std::floor(u));
      const double f = u - i0;
      first[d] = i0 - 1;
      // Cubic Lagrange weights on nodes -1, 0, 1, 2 relative to i0.
      weights[d][0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
      weights[d][1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
      weights[d][2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
      weights[d][3] = (f + 1.0) * f * (f - 1.0) / 6.0;
    }
    std::complex<double> sum = 0.0;
    const int N = padded_;
    const auto wrap = [N](int i) { return static_cast<std::size_t>(((i % N) + N) % N); };
    if (n == 2) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const std::size_t idx = wrap(first[0] + a) * N + wrap(first[1] + b);
          sum += weights[0][a] * weights[1][b] * table_[idx];
        }
      }
    } else {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          for (int c = 0; c < 4; ++c) {
            const std::size_t idx =
                (wrap(first[0] + a) * N + wrap(first[1] + b)) * N + wrap(first[2] + c);
            sum += weights[0][a] * weights[1][b] * weights[2][c] * table_[idx];
          }
        }
      }
    }
    return sum;
  }

  double integral() const override {
    double s = 0.0;
    for (double v : grid_.values) s += v;
    return s * std::pow(grid_.spacing(), grid_.dimension);
  }

  int dimension() const override { return grid_.dimension; }
  PotentialKind kind() const override { return PotentialKind::Tabulated; }
  SignFlag sign() const override { return sign_; }
  bool is_radial() const override { return false; }
  nlohmann::json params() const override {
    return {{"box_edge", grid_.box_edge}, {"samples", grid_.samples}, {"oversample", oversample_},
            {"band", band_}};
  }

 private:
  void build_table() {
    const int n = grid_.dimension;
    const int G = grid_.samples;
    const int N = padded_;
    const std::size_t total = n == 2 ? static_cast<std::size_t>(N) * N
                                     : static_cast<std::size_t>(N) * N * N;
    auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    std::memset(buffer, 0, sizeof(fftw_complex) * total);
    // Node i sits at h (i - G/2); store it at padded index (i - G/2) mod N so
    // the DFT phase is exp(-i k x).
    const auto slot = [N, G](int i) { return static_cast<std::size_t>(((i - G / 2) % N + N) % N); };
    std::size_t src = 0;
    if (n == 2) {
      for (int i = 0; i < G; ++i) {
        for (int j = 0; j < G; ++j) buffer[slot(i) * N + slot(j)][0] = grid_.values[src++];
      }
    } else {
      for (int i = 0; i < G; ++i) {
        for (int j = 0; j < G; ++j) {
          for (int l = 0; l < G; ++l) {
            buffer[(slot(i) * N + slot(j)) * N + slot(l)][0] = grid_.values[src++];
          }
        }
      }
    }
    fftw_plan plan = nullptr;
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      plan = n == 2 ? fftw_plan_dft_2d(N, N, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE)
                    : fftw_plan_dft_3d(N, N, N, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    const double scale = inverse_fourier_prefactor(n) * std::pow(grid_.spacing(), n);
    table_.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      table_[i] = scale * std::complex<double>(buffer[i][0], buffer[i][1]);
    }
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(buffer);
  }

  void classify_sign() {
    // Random probes of the interpolant (10^5, fixed seed) decide the flag.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> coord(-0.5 * grid_.box_edge, 0.5 * grid_.box_edge);
    bool any_positive = false;
    bool any_negative = false;
    for (int i = 0; i < 100000; ++i) {
      Point x = Point::Zero();
      for (int d = 0; d < grid_.dimension; ++d) x[d] = coord(rng);
      const double v = value(x);
      any_positive = any_positive || v > 0.0;
      any_negative = any_negative || v < 0.0;
    }
    if (any_positive && any_negative) {
      sign_ = SignFlag::SignChanging;
    } else if (any_positive) {
      sign_ = SignFlag::Nonnegative;
    } else {
      sign_ = SignFlag::Nonpositive;
    }
  }

  PotentialGrid grid_;
  double band_ = 0.0;
  int oversample_ = 0;
  int padded_ = 0;
  double dk_ = 0.0;
  std::vector<std::complex<double>> table_;
  SignFlag sign_ = SignFlag::Unknown;
};

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Zero:
      return "zero";
    case PotentialKind::GaussianWell:
      return "gaussian-well";
    case PotentialKind::BallWell:
      return "ball-well";
    case PotentialKind::GaussianDimpleMix:
      return "gaussian-dimple-mix";
    case PotentialKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

std::string to_string(SignFlag flag) {
  switch (flag) {
    case SignFlag::Nonpositive:
      return "nonpositive";
    case SignFlag::Nonnegative:
      return "nonnegative";
    case SignFlag::SignChanging:
      return "sign-changing";
    case SignFlag::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::size_t PotentialGrid::point_count() const {
  std::size_t count = 1;
  for (int d = 0; d < dimension; ++d) count *= static_cast<std::size_t>(samples);
  return count;
}

PotentialGrid read_potential_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open potential grid file " + path.string());
  PotentialGrid grid;
  char magic[4] = {};
  in.read(magic, 4);
  if (in && std::memcmp(magic, "DGRD", 4) == 0) {
    std::int32_t dimension = 0;
    std::int32_t samples = 0;
    in.read(reinterpret_cast<char*>(&dimension), sizeof dimension);
    in.read(reinterpret_cast<char*>(&grid.box_edge), sizeof grid.box_edge);
    in.read(reinterpret_cast<char*>(&samples), sizeof samples);
    grid.dimension = dimension;
    grid.samples = samples;
    if (!in || (dimension != 2 && dimension != 3) || samples < 1) {
      throw ConfigError("malformed binary potential grid header in " + path.string());
    }
    grid.values.resize(grid.point_count());
    in.read(reinterpret_cast<char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
    if (!in) throw ConfigError("truncated binary potential grid " + path.string());
    return grid;
  }
  in.clear();
  in.seekg(0);
  if (!(in >> grid.dimension >> grid.box_edge >> grid.samples) ||
      (grid.dimension != 2 && grid.dimension != 3) || grid.samples < 1) {
    throw ConfigError("malformed text potential grid header in " + path.string());
  }
  grid.values.resize(grid.point_count());
  for (double& v : grid.values) {
    if (!(in >> v)) throw ConfigError("truncated text potential grid " + path.string());
  }
  return grid;
}

void write_potential_grid(const std::filesystem::path& path, const PotentialGrid& grid, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write potential grid file " + path.string());
  if (binary) {
    const std::int32_t dimension = grid.dimension;
    const std::int32_t samples = grid.samples;
    out.write("DGRD", 4);
    out.write(reinterpret_cast<const char*>(&dimension), sizeof dimension);
    out.write(reinterpret_cast<const char*>(&grid.box_edge), sizeof grid.box_edge);
    out.write(reinterpret_cast<const char*>(&samples), sizeof samples);
    out.write(reinterpret_cast<const char*>(grid.values.data()),
              static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
    return;
  }
  out.precision(17);
  out << grid.dimension << ' ' << grid.box_edge << ' ' << grid.samples << '\n';
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    out << grid.values[i] << ((i + 1) % static_cast<std::size_t>(grid.samples) == 0 ? '\n' : ' ');
  }
}

Potential::Potential(std::shared_ptr<const Model> model) : model_(std::move(model)) {}

double Potential::operator()(const Point& x) const {
  if (!is_finite(x)) throw InvalidInput("potential evaluated at a non-finite point");
  return model_->value(x);
}

std::complex<double> Potential::fourier(const Point& k) const {
  if (!is_finite(k)) throw InvalidInput("Fourier transform evaluated at a non-finite point");
  return model_->fourier(k);
}

double Potential::integral() const { return model_->integral(); }
int Potential::dimension() const { return model_->dimension(); }
PotentialKind Potential::kind() const { return model_->kind(); }
SignFlag Potential::sign() const { return model_->sign(); }
bool Potential::is_radial() const { return model_->is_radial(); }
bool Potential::is_zero() const { return model_->kind() == PotentialKind::Zero; }

nlohmann::json Potential::describe() const {
  return {{"kind", to_string(kind())},
          {"dimension", dimension()},
          {"sign", to_string(sign())},
          {"params", model_->params()},
          {"integral", integral()}};
}

Potential zero_potential(int dimension) {
  require_dimension(dimension);
  return Potential(std::make_shared<GaussianSum>(dimension, PotentialKind::Zero,
                                                 std::vector<GaussianSum::Term>{},
                                                 SignFlag::Nonpositive, nlohmann::json::object()));
}

Potential gaussian_well(int dimension, double depth, double width) {
  require_dimension(dimension);
  require_nonnegative(depth, "depth");
  require_positive(width, "width");
  return Potential(std::make_shared<GaussianSum>(
      dimension, PotentialKind::GaussianWell, std::vector<GaussianSum::Term>{{-depth, width}},
      SignFlag::Nonpositive, nlohmann::json{{"depth", depth}, {"width", width}}));
}

Potential ball_well(int dimension, double depth, double radius) {
  require_dimension(dimension);
  require_nonnegative(depth, "depth");
  require_positive(radius, "radius");
  return Potential(std::make_shared<BallWell>(dimension, depth, radius));
}

Potential gaussian_dimple_mix(int dimension, double well_depth, double well_width,
                              double dimple_height, double dimple_width) {
  require_dimension(dimension);
  require_nonnegative(well_depth, "well_depth");
  require_positive(well_width, "well_width");
  require_nonnegative(dimple_height, "dimple_height");
  require_positive(dimple_width, "dimple_width");
  // sign(V(r)) follows -a e^{-r^2/2s1^2} + b e^{-r^2/2s2^2}; compare the centre
  // and the tail, where the wider Gaussian dominates.
  const double centre = dimple_height - well_depth;
  int tail = 0;
  if (well_width > dimple_width) {
    tail = well_depth > 0.0 ? -1 : (dimple_height > 0.0 ? 1 : 0);
  } else if (dimple_width > well_width) {
    tail = dimple_height > 0.0 ? 1 : (well_depth > 0.0 ? -1 : 0);
  } else {
    tail = centre > 0.0 ? 1 : (centre < 0.0 ? -1 : 0);
  }
  SignFlag sign = SignFlag::Nonpositive;
  if ((centre > 0.0 && tail < 0) || (centre < 0.0 && tail > 0)) {
    sign = SignFlag::SignChanging;
  } else if (centre > 0.0 || tail > 0) {
    sign = SignFlag::Nonnegative;
  }
  return Potential(std::make_shared<GaussianSum>(
      dimension, PotentialKind::GaussianDimpleMix,
      std::vector<GaussianSum::Term>{{-well_depth, well_width}, {dimple_height, dimple_width}}, sign,
      nlohmann::json{{"well_depth", well_depth},
                     {"well_width", well_width},
                     {"dimple_height", dimple_height},
                     {"dimple_width", dimple_width}}));
}

Potential tabulated_potential(PotentialGrid grid, const TabulatedOptions& options) {
  return Potential(std::make_shared<Tabulated>(std::move(grid), options));
}

PotentialGrid sample_potential(const Potential& potential, double box_edge, int samples) {
  PotentialGrid grid;
  grid.dimension = potential.dimension();
  grid.box_edge = box_edge;
  grid.samples = samples;
  grid.values.reserve(grid.point_count());
  const double h = grid.spacing();
  const double origin = -0.5 * box_edge;
  if (grid.dimension == 2) {
    for (int i = 0; i < samples; ++i) {
      for (int j = 0; j < samples; ++j) {
        grid.values.push_back(potential(planar(origin + i * h, origin + j * h)));
      }
    }
  } else {
    for (int i = 0; i < samples; ++i) {
      for (int j = 0; j < samples; ++j) {
        for (int l = 0; l < samples; ++l) {
          grid.values.push_back(potential(Point(origin + i * h, origin + j * h, origin + l * h)));
        }
      }
    }
  }
  return grid;
}

}  // namespace degen
