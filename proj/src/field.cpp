#include "quatflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <unsupported/Eigen/FFT>

#include "quatflow/errors.hpp"
#include "quatflow/parallel.hpp"

namespace quatflow {

using cplx = std::complex<double>;

const char* to_string(Representation r) {
  return r == Representation::physical ? "physical" : "spectral";
}

QField::QField(const GridSpec& grid, Representation repr) : grid_(grid), repr_(repr) {
  const Index n = grid_.points();
  for (int c = 0; c < kComponents; ++c) {
    if (is_physical()) {
      real_[c] = Eigen::ArrayXd::Zero(n);
    } else {
      coeff_[c] = Eigen::ArrayXcd::Zero(n);
    }
  }
}

void QField::require(Representation expected, const char* op) const {
  if (repr_ != expected) {
    throw RepresentationError(std::string(op) + ": expected " + to_string(expected) + " field, got " +
                              to_string(repr_));
  }
}

Eigen::ArrayXd& QField::real(int c) {
  require(Representation::physical, "real");
  return real_[c];
}
const Eigen::ArrayXd& QField::real(int c) const {
  require(Representation::physical, "real");
  return real_[c];
}
Eigen::ArrayXcd& QField::coeff(int c) {
  require(Representation::spectral, "coeff");
  return coeff_[c];
}
const Eigen::ArrayXcd& QField::coeff(int c) const {
  require(Representation::spectral, "coeff");
  return coeff_[c];
}

Quat QField::at(Index slot) const {
  require(Representation::physical, "at");
  return {real_[0][slot], real_[1][slot], real_[2][slot], real_[3][slot]};
}

void QField::set(Index slot, const Quat& q) {
  require(Representation::physical, "set");
  for (int c = 0; c < kComponents; ++c) real_[c][slot] = q[c];
}

void QField::require_compatible(const QField& o) const {
  if (!(grid_ == o.grid_)) {
    throw ParameterError("field grids differ: " + grid_.shape_string() + " vs " + o.grid_.shape_string());
  }
  if (repr_ != o.repr_) throw RepresentationError("fields differ in representation");
}

QField& QField::operator+=(const QField& o) {
  require_compatible(o);
  for (int c = 0; c < kComponents; ++c) {
    if (is_physical()) real_[c] += o.real_[c];
    else coeff_[c] += o.coeff_[c];
  }
  return *this;
}

QField& QField::operator-=(const QField& o) {
  require_compatible(o);
  for (int c = 0; c < kComponents; ++c) {
    if (is_physical()) real_[c] -= o.real_[c];
    else coeff_[c] -= o.coeff_[c];
  }
  return *this;
}

QField& QField::operator*=(double s) {
  for (int c = 0; c < kComponents; ++c) {
    if (is_physical()) real_[c] *= s;
    else coeff_[c] *= s;
  }
  return *this;
}

bool QField::all_finite() const {
  for (int c = 0; c < kComponents; ++c) {
    if (is_physical() ? !real_[c].isFinite().all() : !coeff_[c].isFinite().all()) return false;
  }
  return true;
}

namespace {

// In-place unscaled DFT of every line along every axis; sign < 0 is the forward
// (exp(-i...)) direction. Lines are independent, so the split across workers
// does not affect the result.
void transform_all_axes(const GridSpec& grid, Eigen::ArrayXcd& data, bool forward) {
  const Index total = grid.points();
  Index stride = total;
  for (int axis = 0; axis < grid.dim; ++axis) {
    const Index n = grid.sizes[axis];
    stride /= n;
    const Index lines = total / n;
    const Index inner = stride;
    parallel_for(lines, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
      thread_local Eigen::FFT<double> fft;
      fft.SetFlag(Eigen::FFT<double>::Unscaled);
      std::vector<cplx> in(static_cast<std::size_t>(n)), out;
      for (std::ptrdiff_t line = begin; line < end; ++line) {
        const Index outer = line / inner;
        const Index base = outer * n * inner + line % inner;
        for (Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = data[base + i * inner];
        if (forward) fft.fwd(out, in);
        else fft.inv(out, in);
        for (Index i = 0; i < n; ++i) data[base + i * inner] = out[static_cast<std::size_t>(i)];
      }
    });
  }
}

// Storage slot of -k for every slot.
Eigen::ArrayXi mirror_slots(const GridSpec& grid) {
  Eigen::ArrayXi out(grid.points());
  for_each_mode(grid, [&](Index s, const IntVec& k) {
    out[s] = static_cast<int>(grid.slot({-k[0], -k[1], -k[2]}));
  });
  return out;
}

}  // namespace

QField forward_transform(const QField& f) {
  f.require(Representation::physical, "forward_transform");
  QField out(f.grid(), Representation::spectral);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (int c = 0; c < QField::kComponents; ++c) {
    Eigen::ArrayXcd& d = out.coeff(c);
    d = f.real(c).cast<cplx>();
    transform_all_axes(f.grid(), d, true);
    d *= scale;
  }
  return out;
}

double hermitian_defect(const QField& f) {
  f.require(Representation::spectral, "hermitian_defect");
  const Eigen::ArrayXi mirror = mirror_slots(f.grid());
  double defect = 0.0;
  for (int c = 0; c < QField::kComponents; ++c) {
    const Eigen::ArrayXcd& d = f.coeff(c);
    for (Index s = 0; s < d.size(); ++s) {
      defect = std::max(defect, std::abs(d[mirror[s]] - std::conj(d[s])));
    }
  }
  return defect;
}

QField inverse_transform(const QField& f) {
  f.require(Representation::spectral, "inverse_transform");
  double scale = 1.0;
  for (int c = 0; c < QField::kComponents; ++c) {
    if (f.coeff(c).size() > 0) scale = std::max(scale, f.coeff(c).abs().maxCoeff());
  }
  const double defect = hermitian_defect(f);
  if (!(defect <= 1e-10 * scale)) {
    throw SymmetryError("inverse_transform: Hermitian symmetry violated by " + std::to_string(defect));
  }
  QField out(f.grid(), Representation::physical);
  for (int c = 0; c < QField::kComponents; ++c) {
    Eigen::ArrayXcd d = f.coeff(c);
    transform_all_axes(f.grid(), d, false);
    out.real(c) = d.real();
  }
  return out;
}

QField to_representation(const QField& f, Representation repr) {
  if (f.repr() == repr) return f;
  return repr == Representation::spectral ? forward_transform(f) : inverse_transform(f);
}

std::vector<QField> gradient(const QField& f) {
  f.require(Representation::spectral, "gradient");
  const GridSpec& grid = f.grid();
  std::vector<QField> out;
  out.reserve(static_cast<std::size_t>(grid.dim));
  for (int m = 0; m < grid.dim; ++m) {
    const Eigen::ArrayXd kappa = derivative_wavenumber(grid, m);
    QField d(grid, Representation::spectral);
    for (int c = 0; c < QField::kComponents; ++c) {
      d.coeff(c) = f.coeff(c) * (kappa * cplx(0.0, 1.0));
    }
    out.push_back(std::move(d));
  }
  return out;
}

QField leray_project(const QField& f) {
  f.require(Representation::spectral, "leray_project");
  const GridSpec& grid = f.grid();
  std::array<Eigen::ArrayXd, 3> kappa;
  for (int m = 0; m < grid.dim; ++m) kappa[m] = derivative_wavenumber(grid, m);
  QField out = f;
  for (Index s = 0; s < f.size(); ++s) {
    double k2 = 0.0;
    cplx k_dot_u = 0.0;
    for (int m = 0; m < grid.dim; ++m) {
      k2 += kappa[m][s] * kappa[m][s];
      k_dot_u += kappa[m][s] * f.coeff(velocity_component(m))[s];
    }
    if (k2 == 0.0) continue;
    const cplx factor = k_dot_u / k2;
    for (int m = 0; m < grid.dim; ++m) {
      out.coeff(velocity_component(m))[s] -= kappa[m][s] * factor;
    }
  }
  return out;
}

double max_divergence(const QField& f) {
  f.require(Representation::spectral, "max_divergence");
  const GridSpec& grid = f.grid();
  Eigen::ArrayXcd div = Eigen::ArrayXcd::Zero(f.size());
  for (int m = 0; m < grid.dim; ++m) {
    div += derivative_wavenumber(grid, m) * f.coeff(velocity_component(m));
  }
  return f.size() > 0 ? div.abs().maxCoeff() : 0.0;
}

QField dealias(const QField& f) {
  f.require(Representation::spectral, "dealias");
  const GridSpec& grid = f.grid();
  Eigen::ArrayXd keep(f.size());
  for_each_mode(grid, [&](Index s, const IntVec& k) {
    bool inside = true;
    for (int a = 0; a < grid.dim; ++a) inside = inside && std::abs(k[a]) <= grid.dealias_cutoff(a);
    keep[s] = inside ? 1.0 : 0.0;
  });
  return apply_multiplier(f, keep);
}

QField apply_multiplier(const QField& f, const Eigen::ArrayXd& multiplier) {
  f.require(Representation::spectral, "apply_multiplier");
  QField out(f.grid(), Representation::spectral);
  for (int c = 0; c < QField::kComponents; ++c) out.coeff(c) = f.coeff(c) * multiplier;
  return out;
}

double component_l2_norm_sq(const QField& f, int c) {
  if (f.is_physical()) return f.real(c).square().sum() * f.grid().cell_volume();
  return f.coeff(c).abs2().sum() * f.grid().volume();
}

double l2_norm_sq(const QField& f) {
  double sum = 0.0;
  for (int c = 0; c < QField::kComponents; ++c) sum += component_l2_norm_sq(f, c);
  return sum;
}

double inner_product(const QField& a, const QField& b) {
  if (a.repr() != b.repr()) throw RepresentationError("inner_product: representations differ");
  double sum = 0.0;
  for (int c = 0; c < QField::kComponents; ++c) {
    if (a.is_physical()) {
      sum += (a.real(c) * b.real(c)).sum() * a.grid().cell_volume();
    } else {
      sum += (a.coeff(c).conjugate() * b.coeff(c)).real().sum() * a.grid().volume();
    }
  }
  return sum;
}

double component_gradient_norm_sq(const QField& f, int c) {
  f.require(Representation::spectral, "gradient_norm_sq");
  return (f.coeff(c).abs2() * xi_squared(f.grid())).sum() * f.grid().volume();
}

double gradient_norm_sq(const QField& f) {
  f.require(Representation::spectral, "gradient_norm_sq");
  const Eigen::ArrayXd r2 = xi_squared(f.grid());
  double sum = 0.0;
  for (int c = 0; c < QField::kComponents; ++c) sum += (f.coeff(c).abs2() * r2).sum();
  return sum * f.grid().volume();
}

QField hamilton_product(const QField& a, const QField& b) {
  a.require(Representation::physical, "hamilton_product");
  b.require(Representation::physical, "hamilton_product");
  if (!(a.grid() == b.grid())) throw ParameterError("hamilton_product: grids differ");
  QField out(a.grid(), Representation::physical);
  for (Index s = 0; s < a.size(); ++s) out.set(s, hamilton_mul(a.at(s), b.at(s)));
  return out;
}

QField constant_field(const GridSpec& grid, const Quat& q) {
  QField out(grid, Representation::physical);
  for (int c = 0; c < QField::kComponents; ++c) out.real(c).setConstant(q[c]);
  return out;
}

}  // namespace quatflow
