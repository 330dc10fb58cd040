#include "morreylab/corpus.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace morreylab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bump(double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); }

// uniform in [0,1) from the raw engine output; the standard distributions
// are not specified bit-for-bit across library implementations
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Frame {
  Point c{};
  double R = 1.0;
  Point lower{};
  double width = 1.0;
  int dim = 1;

  Point local(const Point& x) const { return {(x[0] - c[0]) / R, dim == 2 ? (x[1] - c[1]) / R : 0.0}; }
};

Frame frame_of(const Domain& d) {
  Frame f;
  f.c = d.middle();
  f.R = 0.5 * d.diameter();
  f.lower = d.box_lower();
  f.width = d.box_width();
  f.dim = d.dim();
  return f;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

double smooth_step(double t) {
  const double a = bump(0.5 - t), b = bump(t + 0.5);
  return a / (a + b);
}

std::vector<CorpusFunction> default_corpus(const Domain& domain, std::uint64_t seed, std::size_t size) {
  const Frame F = frame_of(domain);
  std::vector<CorpusFunction> out;
  auto add = [&](std::string id, std::string family, std::function<double(const Point&)> fn) {
    out.push_back({std::move(id), std::move(family), std::move(fn)});
  };

  add("const_1", "constant", [](const Point&) { return 1.0; });
  add("const_-2", "constant", [](const Point&) { return -2.0; });
  add("mono_x", "monomial", [F](const Point& x) { return F.local(x)[0]; });
  add("mono_x2", "monomial", [F](const Point& x) { return std::pow(F.local(x)[0], 2); });
  if (F.dim == 2) {
    add("mono_y", "monomial", [F](const Point& x) { return F.local(x)[1]; });
    add("mono_xy", "monomial", [F](const Point& x) {
      const Point t = F.local(x);
      return t[0] * t[1];
    });
  }

  // mollified indicators: radius 0.3R, transition width 0.1R
  const std::vector<std::pair<std::string, Point>> spots{
      {"center", {0.0, 0.0}}, {"offset", {0.4, 0.0}}, {"edge", {-0.6, F.dim == 2 ? 0.2 : 0.0}}};
  for (const auto& [name, p] : spots)
    add("bump_" + name, "mollified_indicator", [F, p](const Point& x) {
      const Point t = F.local(x);
      return smooth_step((std::hypot(t[0] - p[0], t[1] - p[1]) - 0.3) / 0.1);
    });

  for (int k : {1, 3, 7})
    add("sin_" + std::to_string(k), "sine_product", [F, k](const Point& x) {
      double v = std::sin(k * kPi * (x[0] - F.lower[0]) / F.width);
      if (F.dim == 2) v *= std::sin(k * kPi * (x[1] - F.lower[1]) / F.width);
      return v;
    });

  add("ind_halfspace", "indicator", [F](const Point& x) { return F.local(x)[0] > 0.2 ? 1.0 : 0.0; });
  add("ind_ball", "indicator", [F](const Point& x) {
    const Point t = F.local(x);
    return std::hypot(t[0] - 0.3, t[1]) < 0.25 ? 1.0 : 0.0;
  });

  for (std::size_t s = 0; out.size() < size; ++s) {
    std::mt19937_64 rng(seed * 1000003ULL + s);
    struct Term {
      double a, phase;
      int kx, ky;
    };
    std::vector<Term> terms(5);
    for (Term& t : terms) {
      t.a = 2.0 * unit(rng) - 1.0;
      t.phase = 2.0 * kPi * unit(rng);
      t.kx = 1 + static_cast<int>(rng() % 6);
      t.ky = F.dim == 2 ? static_cast<int>(rng() % 6) : 0;
    }
    add("trig_" + std::to_string(s), "random_trig", [F, terms](const Point& x) {
      const Point t = F.local(x);
      double v = 0.0;
      for (const Term& q : terms) v += q.a * std::cos(kPi * (q.kx * t[0] + q.ky * t[1]) + q.phase);
      return v;
    });
  }
  return out;
}

std::vector<CorpusFunction> concentration_corpus(const Domain& domain, const Point& x0, double gamma, double p) {
  const double R = 0.5 * domain.diameter();
  std::vector<CorpusFunction> out;
  if (p > 1.0) {
    // σ = w^{-1/(p-1)} restricted to B(x0, R/2); not in L_{p,w} once γ >= n(p-1),
    // so its sampled norms grow with N
    const double e = -gamma / (p - 1.0);
    out.push_back({"dual_" + fmt(e), "concentration", [x0, e, R](const Point& x) {
                     const double r = distance(x, x0);
                     return r < 0.5 * R ? std::pow(r, e) : 0.0;
                   }});
  }
  for (double frac : {0.02, 0.08})
    out.push_back({"spike_" + fmt(frac), "concentration",
                   [x0, rr = frac * R](const Point& x) { return distance(x, x0) < rr ? 1.0 : 0.0; }});
  return out;
}

}  // namespace morreylab
