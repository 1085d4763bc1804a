#include "core/hamiltonian.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "core/expm.hpp"
#include "core/metaplectic.hpp"

namespace mpk {

QuadraticHamiltonian::QuadraticHamiltonian(int dim, Matrix mcal)
    : dim_(dim), mcal_(std::move(mcal)) {
  if (dim_ < 1 || mcal_.rows() != 2 * dim_ || mcal_.cols() != 2 * dim_)
    fail(ErrorCode::InvalidArgument, "Mcal must be 2d x 2d");
  if (!is_symmetric(mcal_, 1e-12))
    fail(ErrorCode::NonSymmetricInput, "Mcal must be symmetric");
  x_ = standard_j(dim_) * mcal_;
  const Matrix j = standard_j(dim_);
  double res = (x_ * j + j * x_.transpose()).cwiseAbs().maxCoeff();
  if (res > 1e-12 * std::max(1.0, mcal_.cwiseAbs().maxCoeff()))
    fail(ErrorCode::InvalidArgument, "J Mcal fails the algebra identity");
}

std::string QuadraticHamiltonian::to_json() const {
  nlohmann::json j;
  j["d"] = dim_;
  auto rows = nlohmann::json::array();
  for (int i = 0; i < mcal_.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < mcal_.cols(); ++k) row.push_back(mcal_(i, k));
    rows.push_back(row);
  }
  j["Mcal"] = rows;
  return j.dump();
}

namespace {

QuadraticHamiltonian from_json(const nlohmann::json& j) {
  if (j.contains("preset")) {
    std::string preset = j["preset"].get<std::string>();
    if (preset == "anisotropic_oscillator_2d") return anisotropic_oscillator_2d();
    if (preset == "harmonic_oscillator") {
      auto om = j.at("omega");
      Vector omega(om.size());
      for (size_t i = 0; i < om.size(); ++i)
        omega(static_cast<int>(i)) = om[i].get<double>();
      double mass = j.value("m", 1.0);
      double hbar = j.value("hbar", kDefaultHbar);
      return harmonic_oscillator(omega, mass, hbar);
    }
    fail(ErrorCode::Io, "unknown Hamiltonian preset: " + preset);
  }
  int d = j.at("d").get<int>();
  auto rows = j.at("Mcal");
  Matrix m(2 * d, 2 * d);
  if (static_cast<int>(rows.size()) != 2 * d)
    fail(ErrorCode::Io, "Mcal row count mismatch");
  for (int i = 0; i < 2 * d; ++i)
    for (int k = 0; k < 2 * d; ++k)
      m(i, k) = rows[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>();
  return QuadraticHamiltonian(d, m);
}

}  // namespace

QuadraticHamiltonian QuadraticHamiltonian::from_json_file(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("JSON parse error: ") + e.what());
  }
  return from_json(j);
}

QuadraticHamiltonian QuadraticHamiltonian::from_json_text(
    const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("JSON parse error: ") + e.what());
  }
  return from_json(j);
}

QuadraticHamiltonian anisotropic_oscillator_2d() {
  Matrix m = Matrix::Zero(4, 4);
  m(1, 1) = 1.0;
  m(3, 3) = 1.0;
  return QuadraticHamiltonian(2, m);
}

QuadraticHamiltonian harmonic_oscillator(const Vector& omega, double mass,
                                         double hbar) {
  const int d = static_cast<int>(omega.size());
  if (d < 1) fail(ErrorCode::InvalidArgument, "omega must be non-empty");
  if (!(mass > 0) || !(hbar > 0))
    fail(ErrorCode::InvalidArgument, "mass and hbar must be positive");
  for (int i = 0; i < d; ++i)
    if (!(omega(i) > 0))
      fail(ErrorCode::InvalidArgument, "frequencies must be positive");
  const double two_pi_hbar = 2.0 * M_PI * hbar;
  Matrix m = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = mass * omega(i) * omega(i) / two_pi_hbar;
    m(d + i, d + i) = two_pi_hbar / mass;
  }
  return QuadraticHamiltonian(d, m);
}

FlowSample flow(const QuadraticHamiltonian& h, double t) {
  double scale = std::abs(t) * h.generator().cwiseAbs().maxCoeff();
  if (scale >= 1e4)
    fail(ErrorCode::ConditioningGuard,
         "|t| * ||J Mcal|| = " + std::to_string(scale) + " exceeds 1e4");
  Matrix st = expm(t * h.generator());
  // Exponentials of sp(d) elements drift from the group by roundoff only;
  // widen tau with the matrix scale.
  double tau = std::max(kDefaultTauSymp,
                        1e-12 * st.cwiseAbs().maxCoeff() * st.cwiseAbs().maxCoeff());
  return FlowSample{t, SymplecticMatrix(st, tau)};
}

void oscillator_blocks(const Vector& omega, double mass, double t, Matrix* a,
                       Matrix* b, Matrix* c, Matrix* d) {
  const int n = static_cast<int>(omega.size());
  *a = Matrix::Zero(n, n);
  *b = Matrix::Zero(n, n);
  *c = Matrix::Zero(n, n);
  *d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double w = omega(i);
    (*a)(i, i) = std::cos(w * t);
    (*b)(i, i) = std::sin(w * t) / (mass * w);
    (*c)(i, i) = -mass * w * std::sin(w * t);
    (*d)(i, i) = std::cos(w * t);
  }
}

GridFunction propagate(const GridFunction& u0, const QuadraticHamiltonian& h,
                       double t, WarningSink* warnings) {
  FlowSample fs = flow(h, t);
  return apply_metaplectic(fs.s, u0, warnings);
}

namespace {

bool b_vanishes(const SymplecticMatrix& s) {
  return sigma_max(s.b()) <=
         1e-10 * std::max(1.0, s.entries().cwiseAbs().maxCoeff());
}

}  // namespace

HardyVerdict dynamical_hardy_check(const DecayCertificate& cert,
                                   const QuadraticHamiltonian& h, double t1,
                                   double tau_eig) {
  FlowSample fs = flow(h, t1);
  if (b_vanishes(fs.s)) {
    HardyVerdict v;
    v.status = HardyStatus::DegenerateTime;
    v.note = "B(t1) = 0: compact supports propagate to compact supports; "
             "no Gaussian-decay obstruction at this time";
    return v;
  }
  return classify(cert, fs.s, tau_eig);
}

KnutsenReport knutsen_comparison(const DecayCertificate& cert,
                                 const QuadraticHamiltonian& h, double t1,
                                 double tau_eig) {
  FlowSample fs = flow(h, t1);
  if (b_vanishes(fs.s))
    fail(ErrorCode::DegenerateTime, "B(t1) = 0: comparison undefined");
  SymplecticGeometry geo = analyze_b(fs.s, -1.0);
  const Matrix v = geo.b_spaces.ker_perp.basis;
  const Matrix w1 = geo.b_spaces.range.basis;

  KnutsenReport rep;
  // Extract isotropic constants and verify M = a P, N = b Q.
  Matrix mp = v.transpose() * cert.m * v;
  Matrix nq = w1.transpose() * cert.n * w1;
  rep.a = mp.trace() / geo.rank;
  rep.b = nq.trace() / geo.rank;
  double m_res = (cert.m - rep.a * v * v.transpose()).cwiseAbs().maxCoeff();
  double n_res = (cert.n - rep.b * w1 * w1.transpose()).cwiseAbs().maxCoeff();
  if (m_res > 1e-8 * std::max(1.0, std::abs(rep.a)) ||
      n_res > 1e-8 * std::max(1.0, std::abs(rep.b)))
    fail(ErrorCode::NonIsotropic,
         "certificate is not isotropic on ker(B)^perp / R(B)");

  rep.sigma_max_b = sigma_max(fs.s.b());
  rep.operator_norm_value = rep.a * rep.b * rep.sigma_max_b * rep.sigma_max_b;
  rep.operator_norm_fires = rep.operator_norm_value > 1.0 + tau_eig;

  rep.eigenvalues = hardy_eigenvalues(cert.m, cert.n, fs.s);
  rep.max_lambda = rep.eigenvalues.size() ? rep.eigenvalues(0) : 0.0;
  rep.spectrum_fires = rep.max_lambda > 1.0 + tau_eig;
  rep.agree = rep.operator_norm_fires == rep.spectrum_fires;

  // Per-axis attribution when B is diagonal (the oscillator cases).
  const Matrix& b = fs.s.b();
  Matrix off = b;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rep.sigma_max_b)) {
    int arg = 0;
    for (int i = 1; i < b.rows(); ++i)
      if (std::abs(b(i, i)) > std::abs(b(arg, arg))) arg = i;
    rep.binding_axis = arg;
  }
  return rep;
}

}  // namespace mpk
