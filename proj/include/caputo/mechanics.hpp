#ifndef CAPUTO_MECHANICS_HPP
#define CAPUTO_MECHANICS_HPP

#include <array>
#include <string>
#include <vector>

#include "caputo/core.hpp"
#include "caputo/prony.hpp"

namespace caputo {

using Vec3 = std::array<double, 3>;

struct Mat3 {
  // Row-major 3x3.
  std::array<double, 9> a{};
  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }
  static Mat3 identity();
  Mat3 transposed() const;
  double det() const;
};

Mat3 operator*(const Mat3& x, const Mat3& y);

// Symmetric tensor in 6-channel storage: (11, 22, 33, 12, 13, 23).
struct Sym3 {
  std::array<double, 6> v{};
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  static Sym3 identity();
  Mat3 full() const;
  static Sym3 from_full_symmetric(const Mat3& m);
  double trace() const { return v[0] + v[1] + v[2]; }
};

// Double contraction A : B = sum_ij A_ij B_ij.
double ddot(const Sym3& x, const Sym3& y);
Sym3 sym_inverse(const Sym3& c);

// Rheometer benchmark: cylindrical sample compressed 10% over the first
// second, then sheared about its axis at f_hz with rim shear-strain
// amplitude gamma_s.
struct LiverModel {
  double delta = 126.4;   // Pa
  double b = 1.5;
  double alpha = 0.2;
  double radius = 0.010;  // m
  double height = 0.0027; // m
  double compression = 0.10;
  double gamma_s = 0.25;
  double f_hz = 1.0;

  double lambda(double t) const;      // 1 - compression * min(t, 1)
  double shear_time(double t) const;  // max(0, t - 1)
  // Twist rate per unit reference height.  The lambda^(3/2) factor keeps the
  // physical rim shear amplitude at gamma_s under the compressed geometry.
  double psi(double t) const;
};

struct KinematicState {
  Vec3 u{};
  Mat3 F{};
  Sym3 C{};
  double J = 1.0;
};

// Analytic compression + torsion deformation; rejects reference points
// outside the cylinder.
KinematicState deformation(const Vec3& X, double t, const LiverModel& model);
Vec3 deformed_position(const Vec3& X, double t, const LiverModel& model);

// Viscous-branch PK2 stress S_v = exp[b (C:C - 3)] C.
Sym3 viscous_branch(const Sym3& C, const LiverModel& model);

// Deviatoric projection Dev[A] = A - (A : C / 3) C^-1.
Sym3 deviatoric(const Sym3& a, const Sym3& c);

enum class StressEngine { prony, gl, mp, hyperelastic };

StressEngine parse_engine(const std::string& name);

// Deviatoric stress history at one material point:
//   S = delta Dev[ D^alpha S_v ] (the hydrostatic p J C^-1 term is closed
//   separately where tractions need it), sigma = F S F^T with J = 1.
// The hyperelastic engine replaces D^alpha by the identity operator.
// Results are recorded every output_every steps (plus t = 0); the cumulative
// engines evaluate their history sums only at the recorded times.
struct StressHistory {
  std::vector<double> times;
  std::vector<Sym3> S;
  std::vector<Sym3> sigma;
  std::uint64_t ops = 0;
  double seconds = 0.0;
};

StressHistory stress_history(const Vec3& X, const LiverModel& model,
                             StressEngine engine, const UniformGrid& grid,
                             const PronySeries* series = nullptr,
                             int output_every = 1);

// Torque and normal traction over the deformed top disc by axisymmetric
// reduction: radial Gauss-Legendre x 2 pi.  The pressure entering the normal
// traction comes from integrating radial equilibrium inward from a free
// lateral surface; the torque is pressure-independent.
struct TractionHistory {
  std::vector<double> times;
  std::vector<double> torque;
  std::vector<double> normal_force;
};

TractionHistory torque_and_normal(const LiverModel& model, StressEngine engine,
                                  const UniformGrid& grid, int n_quad,
                                  const PronySeries* series = nullptr,
                                  int output_every = 1);

// Wall time and multiply-add counts per engine and step size at the outer
// edge point (R, 0, H).
struct TimingRow {
  std::string engine;
  int terms = 0;
  double dt = 0.0;
  double seconds = 0.0;
  std::uint64_t ops = 0;
};

std::vector<TimingRow> timing_matrix(
    const LiverModel& model, const std::vector<double>& dts,
    const std::vector<int>& terms,
    const std::function<PronySeries(int)>& series_for_terms, double horizon);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace caputo

#endif
