#include "morreylab/lattice.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

namespace morreylab {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

Plans plans_for(int dim, int len) {
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find({dim, len});
  if (it != cache.end()) return it->second;
  const std::size_t real = dim == 1 ? len : static_cast<std::size_t>(len) * len;
  const std::size_t cplx = dim == 1 ? len / 2 + 1 : static_cast<std::size_t>(len) * (len / 2 + 1);
  double* in = fftw_alloc_real(real);
  fftw_complex* out = fftw_alloc_complex(cplx);
  Plans p;
  if (dim == 1) {
    p.r2c = fftw_plan_dft_r2c_1d(len, in, out, FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_1d(len, out, in, FFTW_ESTIMATE);
  } else {
    p.r2c = fftw_plan_dft_r2c_2d(len, len, in, out, FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_2d(len, len, out, in, FFTW_ESTIMATE);
  }
  fftw_free(in);
  fftw_free(out);
  cache[{dim, len}] = p;
  return p;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : p(fftw_alloc_real(n)) { std::memset(p, 0, n * sizeof(double)); }
  ~RealBuffer() { fftw_free(p); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* p;
};

std::shared_ptr<std::complex<double>> complex_buffer(std::size_t n) {
  auto* raw = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n));
  return {raw, [](std::complex<double>* q) { fftw_free(q); }};
}

}  // namespace

LatticeConvolver::LatticeConvolver(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
  len_ = 2 * grid_->extent();
  const bool one = grid_->dim() == 1;
  real_ = one ? len_ : static_cast<std::size_t>(len_) * len_;
  complex_ = one ? len_ / 2 + 1 : static_cast<std::size_t>(len_) * (len_ / 2 + 1);
}

LatticeConvolver::Spectrum LatticeConvolver::forward(std::vector<double>& box) const {
  const Plans p = plans_for(grid_->dim(), len_);
  RealBuffer in(real_);
  std::memcpy(in.p, box.data(), real_ * sizeof(double));
  Spectrum s{complex_buffer(complex_), complex_};
  fftw_execute_dft_r2c(p.r2c, in.p, reinterpret_cast<fftw_complex*>(s.data.get()));
  return s;
}

LatticeConvolver::Spectrum LatticeConvolver::transform_kernel(const OffsetKernel& k) const {
  const int E = grid_->extent();
  std::vector<double> box(real_, 0.0);
  auto wrap = [&](int o) { return o < 0 ? o + len_ : o; };
  if (grid_->dim() == 1) {
    for (int di = -E + 1; di < E; ++di) box[wrap(di)] = k(di, 0);
  } else {
    for (int dj = -E + 1; dj < E; ++dj)
      for (int di = -E + 1; di < E; ++di)
        box[static_cast<std::size_t>(wrap(dj)) * len_ + wrap(di)] = k(di, dj);
  }
  return forward(box);
}

LatticeConvolver::Spectrum LatticeConvolver::transform_field(std::span<const double> values) const {
  if (values.size() != grid_->size()) throw Error("field size does not match grid");
  std::vector<double> box(real_, 0.0);
  const bool one = grid_->dim() == 1;
  for (std::size_t c = 0; c < values.size(); ++c) {
    const Cell& cell = grid_->cell(c);
    box[one ? cell.i : static_cast<std::size_t>(cell.j) * len_ + cell.i] = values[c];
  }
  return forward(box);
}

std::vector<double> LatticeConvolver::apply(const Spectrum& field, const Spectrum& kernel) const {
  const Plans p = plans_for(grid_->dim(), len_);
  auto prod = complex_buffer(complex_);
  const std::complex<double>* a = field.data.get();
  const std::complex<double>* b = kernel.data.get();
  std::complex<double>* q = prod.get();
  for (std::size_t k = 0; k < complex_; ++k) q[k] = a[k] * b[k];
  RealBuffer out(real_);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(q), out.p);
  const double scale = 1.0 / static_cast<double>(real_);
  const bool one = grid_->dim() == 1;
  std::vector<double> v(grid_->size());
  for (std::size_t c = 0; c < v.size(); ++c) {
    const Cell& cell = grid_->cell(c);
    v[c] = scale * out.p[one ? cell.i : static_cast<std::size_t>(cell.j) * len_ + cell.i];
  }
  return v;
}

std::vector<double> LatticeConvolver::convolve(std::span<const double> values, const OffsetKernel& k) const {
  return apply(transform_field(values), transform_kernel(k));
}

namespace {

// x^2 atan(y/x), continuous through x = 0
double sq_atan(double x, double y) { return x == 0.0 ? 0.0 : x * x * std::atan(y / x); }
double lin_atan(double x, double y) { return x == 0.0 ? 0.0 : x * std::atan(y / x); }
double xlog(double x, double r2) { return r2 == 0.0 ? 0.0 : x * std::log(r2); }

// ∫∫ ln(x^2 + y^2) dx dy
double log_antiderivative(double x, double y) {
  return x * xlog(y, x * x + y * y) - 3.0 * x * y + sq_atan(x, y) + sq_atan(y, x);
}

// ∫∫ x / (x^2 + y^2) dx dy
double grad_antiderivative(double x, double y) {
  return 0.5 * (xlog(y, x * x + y * y) - 2.0 * y + 2.0 * lin_atan(x, y));
}

template <class F>
double rectangle(F&& F2, double x0, double x1, double y0, double y1) {
  return F2(x1, y1) - F2(x0, y1) - F2(x1, y0) + F2(x0, y0);
}

constexpr double kFarCells = 32.0;

}  // namespace

double cell_log_integral(double ox, double oy) {
  // ln is harmonic, so beyond a few cells the midpoint rule is accurate to
  // fourth order and avoids cancellation in the antiderivative differences
  if (std::max(std::abs(ox), std::abs(oy)) > kFarCells) return 0.5 * std::log(ox * ox + oy * oy);
  return 0.5 * rectangle(log_antiderivative, ox - 0.5, ox + 0.5, oy - 0.5, oy + 0.5);
}

double cell_grad_log_integral(double ox, double oy, int axis) {
  if (axis == 1) std::swap(ox, oy);
  if (std::max(std::abs(ox), std::abs(oy)) > kFarCells) return ox / (ox * ox + oy * oy);
  return rectangle(grad_antiderivative, ox - 0.5, ox + 0.5, oy - 0.5, oy + 0.5);
}

namespace {

template <int P>
GaussRule gauss_rule() {
  using Q = boost::math::quadrature::gauss<double, P>;
  GaussRule r;
  const auto& a = Q::abscissa();
  const auto& w = Q::weights();
  for (std::size_t k = 0; k < a.size(); ++k) {
    r.x.push_back(0.5 + 0.5 * a[k]);
    r.w.push_back(0.5 * w[k]);
    if (a[k] != 0.0) {
      r.x.push_back(0.5 - 0.5 * a[k]);
      r.w.push_back(0.5 * w[k]);
    }
  }
  return r;
}

}  // namespace

GaussRule gauss_legendre01(int points) {
  switch (points) {
    case 3: return gauss_rule<3>();
    case 6: return gauss_rule<6>();
    case 8: return gauss_rule<8>();
    default: throw Error("unsupported Gauss rule size");
  }
}

void singular_cell_quadrature(const Point& c, double h, const Point& x, int points,
                              const std::function<void(const Point&, double)>& visit) {
  const GaussRule g = gauss_legendre01(points);
  const double x0 = c[0] - 0.5 * h, x1 = c[0] + 0.5 * h;
  const double y0 = c[1] - 0.5 * h, y1 = c[1] + 0.5 * h;
  const bool inside = x[0] > x0 && x[0] < x1 && x[1] > y0 && x[1] < y1;
  if (!inside) {
    for (std::size_t a = 0; a < g.x.size(); ++a)
      for (std::size_t b = 0; b < g.x.size(); ++b)
        visit({x0 + h * g.x[a], y0 + h * g.x[b]}, h * h * g.w[a] * g.w[b]);
    return;
  }
  // four rectangles with a corner at x, each as two triangles with apex x
  for (double ex : {x0 - x[0], x1 - x[0]})
    for (double ey : {y0 - x[1], y1 - x[1]}) {
      if (ex == 0.0 || ey == 0.0) continue;
      const std::array<Point, 2> far{Point{ex, 0.0}, Point{0.0, ey}};
      for (const Point& p1 : far) {
        const Point p2{ex, ey};
        const double jac = std::abs(p1[0] * (p2[1] - p1[1]) - p1[1] * (p2[0] - p1[0]));
        for (std::size_t a = 0; a < g.x.size(); ++a)
          for (std::size_t b = 0; b < g.x.size(); ++b) {
            const double s = g.x[a], t = g.x[b];
            const Point y{x[0] + s * (p1[0] + t * (p2[0] - p1[0])), x[1] + s * (p1[1] + t * (p2[1] - p1[1]))};
            visit(y, jac * s * g.w[a] * g.w[b]);
          }
      }
    }
}

}  // namespace morreylab
