#include "adpt/value_function.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "adpt/errors.hpp"

namespace adpt {

QuadraticBasis::QuadraticBasis(int dim, Vector scale)
    : dim_(dim), scale_(std::move(scale)) {
  if (dim_ < 1) throw DimensionError("basis dimension must be positive");
  if (scale_.size() == 0) scale_ = Vector::Ones(dim_);
  if (scale_.size() != dim_) {
    throw DimensionError("basis scale length differs from dimension");
  }
  for (int sum = 1; sum <= 2 * dim_ - 3; ++sum) {
    for (int i = 0; i < dim_; ++i) {
      const int j = sum - i;
      if (j > i && j < dim_) terms_.emplace_back(i, j);
    }
  }
  for (int i = 0; i < dim_; ++i) terms_.emplace_back(i, i);
}

bool QuadraticBasis::unit_scale() const {
  return (scale_.array() == 1.0).all();
}

std::string QuadraticBasis::label(int term) const {
  const auto [i, j] = terms_.at(static_cast<std::size_t>(term));
  if (i == j) return "x" + std::to_string(i + 1) + "^2";
  return "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1);
}

void QuadraticBasis::check(const Vector& E) const {
  if (E.size() != dim_) {
    throw DimensionError("error vector has length " +
                         std::to_string(E.size()) + ", basis expects " +
                         std::to_string(dim_));
  }
}

Vector QuadraticBasis::eval(const Vector& E) const {
  check(E);
  const Vector x = scale_.cwiseProduct(E);
  Vector phi(size());
  for (int k = 0; k < size(); ++k) {
    const auto [i, j] = terms_[static_cast<std::size_t>(k)];
    phi(k) = x(i) * x(j);
  }
  return phi;
}

Matrix QuadraticBasis::gradient(const Vector& E) const {
  check(E);
  const Vector x = scale_.cwiseProduct(E);
  Matrix d = Matrix::Zero(size(), dim_);
  for (int k = 0; k < size(); ++k) {
    const auto [i, j] = terms_[static_cast<std::size_t>(k)];
    d(k, i) += x(j) * scale_(i);
    d(k, j) += x(i) * scale_(j);
  }
  return d;
}

bool QuadraticBasis::operator==(const QuadraticBasis& other) const {
  return dim_ == other.dim_ && scale_ == other.scale_;
}

ValueFunction::ValueFunction(QuadraticBasis basis, Vector weights)
    : basis_(std::move(basis)), weights_(std::move(weights)) {
  if (weights_.size() != basis_.size()) {
    throw DimensionError("weight vector has length " +
                         std::to_string(weights_.size()) + ", basis has " +
                         std::to_string(basis_.size()) + " terms");
  }
}

ValueFunction ValueFunction::zero(const QuadraticBasis& basis) {
  return ValueFunction(basis, Vector::Zero(basis.size()));
}

double ValueFunction::value(const Vector& E) const {
  return weights_.dot(basis_.eval(E));
}

Vector ValueFunction::gradient(const Vector& E) const {
  if (E.size() != basis_.dim()) {
    throw DimensionError("error vector length differs from basis dimension");
  }
  // Same as gradient(E)^T W without forming the term-by-state matrix.
  const Vector& s = basis_.scale();
  const Vector x = s.cwiseProduct(E);
  Vector g = Vector::Zero(basis_.dim());
  const auto& terms = basis_.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto [i, j] = terms[k];
    const double w = weights_(static_cast<Eigen::Index>(k));
    g(i) += w * x(j) * s(i);
    g(j) += w * x(i) * s(j);
  }
  return g;
}

Matrix ValueFunction::quadratic_form() const {
  const int n = basis_.dim();
  const Vector& s = basis_.scale();
  Matrix P = Matrix::Zero(n, n);
  const auto& terms = basis_.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto [i, j] = terms[k];
    const double w = weights_(static_cast<Eigen::Index>(k)) * s(i) * s(j);
    if (i == j) {
      P(i, i) += w;
    } else {
      P(i, j) += 0.5 * w;
      P(j, i) += 0.5 * w;
    }
  }
  return P;
}

ValueFunction ValueFunction::from_quadratic_form(const QuadraticBasis& basis,
                                                 const Matrix& P) {
  if (P.rows() != basis.dim() || P.cols() != basis.dim()) {
    throw DimensionError("quadratic form size differs from basis dimension");
  }
  const Vector& s = basis.scale();
  Vector w(basis.size());
  const auto& terms = basis.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto [i, j] = terms[k];
    const double sym = i == j ? P(i, i) : P(i, j) + P(j, i);
    w(static_cast<Eigen::Index>(k)) = sym / (s(i) * s(j));
  }
  return ValueFunction(basis, std::move(w));
}

double min_value_on_samples(const ValueFunction& vf,
                            const std::vector<Vector>& samples) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& e : samples) {
    if (e.isZero(0.0)) continue;
    lowest = std::min(lowest, vf.value(e));
  }
  return lowest;
}

namespace {

constexpr const char* kMagic = "# adpt-weights v1";

std::string next_data_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    return line;
  }
  throw ConfigError("weight file ended early");
}

template <typename T>
T expect_field(std::istream& is, const std::string& key) {
  std::istringstream line(next_data_line(is));
  std::string got;
  T value{};
  if (!(line >> got) || got != key || !(line >> value)) {
    throw ConfigError("weight file: expected '" + key + "'");
  }
  return value;
}

}  // namespace

void write_weights(std::ostream& os, const ValueFunction& vf,
                   const std::map<std::string, std::string>& metadata) {
  const auto& basis = vf.basis();
  os << kMagic << '\n';
  for (const auto& [key, value] : metadata) {
    os << "# " << key << ' ' << value << '\n';
  }
  os << std::setprecision(17);
  os << "dim " << basis.dim() << '\n';
  os << "ordering " << QuadraticBasis::kOrdering << '\n';
  os << "scale";
  for (int i = 0; i < basis.dim(); ++i) os << ' ' << basis.scale()(i);
  os << '\n';
  os << "count " << basis.size() << '\n';
  for (int k = 0; k < basis.size(); ++k) {
    os << basis.label(k) << ' ' << vf.weights()(k) << '\n';
  }
}

ValueFunction read_weights(std::istream& is) {
  std::string first;
  if (!std::getline(is, first) || first != kMagic) {
    throw ConfigError("not a weight file (missing header)");
  }
  const int dim = expect_field<int>(is, "dim");
  if (dim < 1) throw ConfigError("weight file: bad dim");
  if (expect_field<std::string>(is, "ordering") != QuadraticBasis::kOrdering) {
    throw ConfigError("weight file: unsupported term ordering");
  }
  std::istringstream scale_line(next_data_line(is));
  std::string key;
  scale_line >> key;
  if (key != "scale") throw ConfigError("weight file: expected 'scale'");
  Vector scale(dim);
  for (int i = 0; i < dim; ++i) {
    if (!(scale_line >> scale(i))) throw ConfigError("weight file: bad scale");
  }
  QuadraticBasis basis(dim, scale);
  const int count = expect_field<int>(is, "count");
  if (count != basis.size()) {
    throw ConfigError("weight file: count does not match dim");
  }
  Vector w(count);
  for (int k = 0; k < count; ++k) {
    std::istringstream line(next_data_line(is));
    std::string label;
    if (!(line >> label >> w(k)) || label != basis.label(k)) {
      throw ConfigError("weight file: bad entry for term " + basis.label(k));
    }
  }
  return ValueFunction(std::move(basis), std::move(w));
}

void save_weights(const std::string& path, const ValueFunction& vf,
                  const std::map<std::string, std::string>& metadata) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_weights(os, vf, metadata);
}

ValueFunction load_weights(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read weight file " + path);
  return read_weights(is);
}

}  // namespace adpt
