#include "degen/direct_oracle.hpp"

#include "degen/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numeric>
#include <sstream>

namespace degen {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int frequency(int index, int samples) { return index < samples / 2 ? index : index - samples; }

template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* data;
};

}  // namespace

struct GridHamiltonian::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t real_size = 0;
  std::size_t half_size = 0;

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (fftw_plan p : {r2c, c2r, forward, backward}) {
      if (p != nullptr) fftw_destroy_plan(p);
    }
  }
};

GridHamiltonian::GridHamiltonian(const DispersionSymbol& symbol, const Potential& potential,
                                 const OracleOptions& options)
    : dimension_(symbol.dimension()), box_edge_(options.box_edge), samples_(options.samples) {
  if (potential.dimension() != dimension_) {
    throw PreconditionError("oracle: symbol and potential dimensions differ");
  }
  if (!(box_edge_ > 0.0) || samples_ < 4 || samples_ % 2 != 0) {
    throw ConfigError("oracle.box_edge must be positive and oracle.grid an even integer >= 4");
  }
  if (!(options.delta_levels > 0.0)) throw ConfigError("oracle.delta_levels must be positive");

  const SymbolMinimum minimum = find_minimum(symbol);
  bottom_ = minimum.value;
  surface_radius_ = minimum.radius;
  const double cutoff = M_PI * samples_ / box_edge_;
  if (cutoff < 4.0 * surface_radius_) {
    std::ostringstream msg;
    msg << "oracle momentum cutoff pi G / L = " << cutoff << " is below 4 R = " << 4.0 * surface_radius_;
    throw ConfigError(msg.str());
  }
  surface_resolved_ = 2.0 * M_PI / box_edge_ <= surface_radius_ / 8.0;
  level_spacing_ = 0.5 * radial_curvature(symbol, surface_radius_) * std::pow(M_PI / box_edge_, 2);
  delta_ = options.delta_levels * level_spacing_;

  const int G = samples_;
  const int n = dimension_;
  const std::size_t total = n == 2 ? static_cast<std::size_t>(G) * G
                                   : static_cast<std::size_t>(G) * G * G;
  symbol_table_.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) symbol_table_[idx] = symbol(momentum(idx));

  const int half = G / 2 + 1;
  const std::size_t half_total = n == 2 ? static_cast<std::size_t>(G) * half
                                        : static_cast<std::size_t>(G) * G * half;
  half_symbol_.resize(half_total);
  const double inv_n = 1.0 / static_cast<double>(total);
  for (std::size_t idx = 0; idx < half_total; ++idx) {
    // Map the half-spectrum index onto the full table; the last axis only
    // runs over nonnegative frequencies.
    const std::size_t last = idx % static_cast<std::size_t>(half);
    const std::size_t rest = idx / static_cast<std::size_t>(half);
    const std::size_t full = rest * static_cast<std::size_t>(G) + last % static_cast<std::size_t>(G);
    half_symbol_[idx] = symbol_table_[full] * inv_n;
  }

  potential_table_.resize(total);
  double v_max = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    potential_table_[idx] = potential(position(idx));
    v_max = std::max(v_max, std::abs(potential_table_[idx]));
  }
  potential_is_zero_ = v_max == 0.0;
  spectral_scale_ = std::max(1.0, *std::max_element(symbol_table_.begin(), symbol_table_.end()) + v_max);

  plans_ = std::make_unique<Plans>();
  plans_->real_size = total;
  plans_->half_size = half_total;
  FftwBuffer<double> real(total);
  FftwBuffer<fftw_complex> spectrum(total);
  FftwBuffer<fftw_complex> other(total);
  std::lock_guard<std::mutex> lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE;
  if (n == 2) {
    plans_->r2c = fftw_plan_dft_r2c_2d(G, G, real.data, spectrum.data, flags);
    plans_->c2r = fftw_plan_dft_c2r_2d(G, G, spectrum.data, real.data, flags);
    plans_->forward = fftw_plan_dft_2d(G, G, spectrum.data, other.data, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft_2d(G, G, spectrum.data, other.data, FFTW_BACKWARD, flags);
  } else {
    plans_->r2c = fftw_plan_dft_r2c_3d(G, G, G, real.data, spectrum.data, flags);
    plans_->c2r = fftw_plan_dft_c2r_3d(G, G, G, spectrum.data, real.data, flags);
    plans_->forward = fftw_plan_dft_3d(G, G, G, spectrum.data, other.data, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft_3d(G, G, G, spectrum.data, other.data, FFTW_BACKWARD, flags);
  }
}

GridHamiltonian::~GridHamiltonian() = default;

Point GridHamiltonian::momentum(std::size_t index) const {
  const int G = samples_;
  const double dk = 2.0 * M_PI / box_edge_;
  Point p = Point::Zero();
  for (int d = dimension_ - 1; d >= 0; --d) {
    p[d] = dk * frequency(static_cast<int>(index % static_cast<std::size_t>(G)), G);
    index /= static_cast<std::size_t>(G);
  }
  return p;
}

Point GridHamiltonian::position(std::size_t index) const {
  const int G = samples_;
  const double h = box_edge_ / G;
  Point x = Point::Zero();
  for (int d = dimension_ - 1; d >= 0; --d) {
    x[d] = -0.5 * box_edge_ + h * static_cast<double>(index % static_cast<std::size_t>(G));
    index /= static_cast<std::size_t>(G);
  }
  return x;
}

void GridHamiltonian::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != size() || out.size() != size()) {
    throw PreconditionError("oracle apply: vector length does not match the grid");
  }
  FftwBuffer<double> real(plans_->real_size);
  FftwBuffer<fftw_complex> spectrum(plans_->half_size);
  std::memcpy(real.data, in.data(), sizeof(double) * in.size());
  fftw_execute_dft_r2c(plans_->r2c, real.data, spectrum.data);
  for (std::size_t i = 0; i < plans_->half_size; ++i) {
    spectrum.data[i][0] *= half_symbol_[i];
    spectrum.data[i][1] *= half_symbol_[i];
  }
  fftw_execute_dft_c2r(plans_->c2r, spectrum.data, real.data);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = real.data[i] + potential_table_[i] * in[i];
}

void GridHamiltonian::apply(std::span<const std::complex<double>> in,
                            std::span<std::complex<double>> out) const {
  if (in.size() != size() || out.size() != size()) {
    throw PreconditionError("oracle apply: vector length does not match the grid");
  }
  const std::size_t total = size();
  FftwBuffer<fftw_complex> a(total);
  FftwBuffer<fftw_complex> b(total);
  for (std::size_t i = 0; i < total; ++i) {
    a.data[i][0] = in[i].real();
    a.data[i][1] = in[i].imag();
  }
  fftw_execute_dft(plans_->forward, a.data, b.data);
  const double inv_n = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) {
    b.data[i][0] *= symbol_table_[i] * inv_n;
    b.data[i][1] *= symbol_table_[i] * inv_n;
  }
  fftw_execute_dft(plans_->backward, b.data, a.data);
  for (std::size_t i = 0; i < total; ++i) {
    out[i] = std::complex<double>(a.data[i][0], a.data[i][1]) + potential_table_[i] * in[i];
  }
}

void GridHamiltonian::apply_block(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  out.resize(in.rows(), in.cols());
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    apply(std::span<const double>(in.col(c).data(), static_cast<std::size_t>(in.rows())),
          std::span<double>(out.col(c).data(), static_cast<std::size_t>(out.rows())));
  }
}

namespace {

OracleSpectrum free_spectrum(const GridHamiltonian& hamiltonian, int k) {
  std::vector<double> table = hamiltonian.symbol_table();
  const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), table.size());
  std::partial_sort(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(kk), table.end());
  OracleSpectrum spectrum;
  spectrum.eigenvalues.assign(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(kk));
  spectrum.residuals.assign(kk, 0.0);
  spectrum.exact = true;
  return spectrum;
}

OracleSpectrum from_lanczos(const LanczosResult& run) {
  OracleSpectrum spectrum;
  spectrum.eigenvalues = run.values;
  spectrum.residuals = run.residuals;
  spectrum.tolerance = run.tolerance;
  spectrum.matvecs = run.matvecs;
  spectrum.restarts = run.restarts;
  return spectrum;
}

// Lattice symmetry makes eigenvalues up to doubly (square) or triply (cubic)
// degenerate; the block must be at least that wide to see every copy.
LanczosOptions with_block_floor(LanczosOptions options, int dimension) {
  options.block_size = std::max(options.block_size, dimension);
  return options;
}

BlockOperator block_operator(const GridHamiltonian& hamiltonian) {
  return [&hamiltonian](const Eigen::MatrixXd& in, Eigen::MatrixXd& out) {
    hamiltonian.apply_block(in, out);
  };
}

}  // namespace

OracleSpectrum lowest_eigenvalues(const GridHamiltonian& hamiltonian, int k, LanczosOptions options) {
  if (k < 1 || k > 64) throw PreconditionError("lowest_eigenvalues: k must lie in [1, 64]");
  if (hamiltonian.potential_is_zero()) return free_spectrum(hamiltonian, k);

  options = with_block_floor(options, hamiltonian.dimension());
  options.spectral_scale = hamiltonian.spectral_scale();
  const LanczosResult run = block_lanczos(block_operator(hamiltonian),
                                          static_cast<Eigen::Index>(hamiltonian.size()), k,
                                          lowest_converged(k), options);
  if (!run.converged) {
    std::ostringstream msg;
    msg << "oracle Lanczos did not converge after " << run.restarts << " restarts (" << run.matvecs
        << " matvecs); tolerance " << run.tolerance << ", residuals:";
    for (int i = 0; i < k && i < static_cast<int>(run.residuals.size()); ++i) msg << ' ' << run.residuals[i];
    throw ConvergenceError(msg.str());
  }
  OracleSpectrum spectrum = from_lanczos(run);
  spectrum.eigenvalues.resize(static_cast<std::size_t>(k));
  spectrum.residuals.resize(static_cast<std::size_t>(k));
  return spectrum;
}

BoundStateCount count_below(const GridHamiltonian& hamiltonian, std::optional<double> energy, int k_max,
                            LanczosOptions options) {
  if (k_max < 1 || k_max > 64) throw PreconditionError("count_below: k_max must lie in [1, 64]");
  BoundStateCount result;
  result.energy = energy.value_or(hamiltonian.bottom() - hamiltonian.delta());
  const auto& table = hamiltonian.symbol_table();
  const auto& potential = hamiltonian.potential_table();
  double v_max = 0.0;
  for (double v : potential) v_max = std::max(v_max, std::abs(v));
  const double sanity = *std::min_element(table.begin(), table.end()) + v_max;
  if (!(result.energy < sanity) && !hamiltonian.potential_is_zero()) {
    throw PreconditionError("count_below: energy must lie below min H0 + ||V||_inf");
  }

  if (hamiltonian.potential_is_zero()) {
    result.spectrum = free_spectrum(hamiltonian, k_max);
    for (double e : result.spectrum.eigenvalues) {
      if (e < result.energy) ++result.count;
    }
    result.lower_bound = result.count >= k_max;
    return result;
  }

  options = with_block_floor(options, hamiltonian.dimension());
  options.spectral_scale = hamiltonian.spectral_scale();
  const Eigen::Index b = options.block_size;
  int window = std::min(k_max, 8);
  for (;;) {
    const double target = result.energy;
    // Ritz values bound the eigenvalues from above, so a Ritz value whose
    // residual interval lies below the target certifies one eigenvalue there.
    // Accept once every Ritz value below the target is certified that way and
    // the next block sits above it by more than its residual, with the picture
    // unchanged over several restart cycles.
    struct Watch {
      Eigen::VectorXd previous;
      int stable = 0;
      int last_count = -1;
    };
    auto watch = std::make_shared<Watch>();
    const int w = window;
    const StopRule rule = [watch, target, b, w](const RitzSnapshot& s) {
      const Eigen::Index tracked = s.values.size();
      Eigen::Index below = 0;
      while (below < tracked && s.values[below] < target) ++below;
      bool ok = true;
      for (Eigen::Index i = 0; i < below; ++i) {
        ok = ok && (s.residuals[i] <= s.tolerance || s.values[i] + s.residuals[i] < target);
      }
      if (below >= w) {
        watch->previous = s.values;
        return ok;
      }
      for (Eigen::Index i = below; i < std::min(tracked, below + b); ++i) {
        const double gap = s.values[i] - target;
        ok = ok && gap > s.residuals[i];
        if (watch->previous.size() == tracked) {
          const double drift = watch->previous[i] - s.values[i];
          ok = ok && drift * 10.0 < gap;
        } else {
          ok = false;
        }
      }
      watch->previous = s.values;
      if (ok && static_cast<int>(below) == watch->last_count) {
        ++watch->stable;
      } else {
        watch->stable = ok ? 1 : 0;
      }
      watch->last_count = static_cast<int>(below);
      return ok && watch->stable >= 3;
    };
    const LanczosResult run = block_lanczos(block_operator(hamiltonian),
                                            static_cast<Eigen::Index>(hamiltonian.size()), window, rule, options);
    if (!run.converged) {
      std::ostringstream msg;
      msg << "oracle count did not converge after " << run.restarts << " restarts (" << run.matvecs
          << " matvecs); tolerance " << run.tolerance;
      throw ConvergenceError(msg.str());
    }
    result.spectrum = from_lanczos(run);
    result.count = 0;
    for (double e : run.values) {
      if (e < target) ++result.count;
    }
    if (result.count < window) break;
    if (window >= k_max) {
      result.count = k_max;
      result.lower_bound = true;
      break;
    }
    window = std::min(2 * window, k_max);
  }
  return result;
}

nlohmann::json to_json(const GridHamiltonian& hamiltonian, const BoundStateCount& count) {
  return {{"dimension", hamiltonian.dimension()},
          {"box_edge", hamiltonian.box_edge()},
          {"grid", hamiltonian.samples()},
          {"bottom", hamiltonian.bottom()},
          {"level_spacing", hamiltonian.level_spacing()},
          {"delta", hamiltonian.delta()},
          {"energy", count.energy},
          {"count", count.count},
          {"eigenvalues", count.spectrum.eigenvalues},
          {"residuals", count.spectrum.residuals},
          {"tolerance", count.spectrum.tolerance},
          {"matvecs", count.spectrum.matvecs},
          {"flags",
           {{"count_is_lower_bound", count.lower_bound},
            {"exact_free_spectrum", count.spectrum.exact},
            {"surface_resolved", hamiltonian.surface_resolved()}}}};
}

}  // namespace degen
