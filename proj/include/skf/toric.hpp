#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skf/expr.hpp"
#include "skf/forms.hpp"
#include "skf/interval.hpp"

// Extraction of the transverse holomorphic-volume coefficient form from a
// toric foliated coordinate system. The cone carries complex coordinates
// z^i = x^i(r, f) + i phi^i; the holomorphic volume form
// Omega = e^{z^1} dz^1 ^ ... ^ dz^n decomposes as
// Omega = r^{n-1} dr ^ omega + (r^n / n) d omega, and omega is recovered
// from the dr-part by a combinatorial sum over Jacobian minors. The
// brute-force expansion of Omega doubles as an independent oracle.

namespace skf {

struct FoliationMap {
  int n = 0;                             // complex dimension of the cone
  std::vector<expr::ExprPtr> x;          // x^1..x^n over r and the leafwise names
  std::vector<std::string> f_names;      // n-1 leafwise coordinate names f^2..f^n
  std::vector<std::string> angle_names;  // n angle names phi^1..phi^n
  std::map<std::string, double> params;
  // Sampling domain for the 2n foliated cone coordinates (r, f..., angles).
  std::vector<Interval> domain;

  // Coordinate order of the foliated cone chart: r, f^2..f^n, phi^1..phi^n.
  std::vector<std::string> coord_names() const;
  void validate() const;
};

FoliationMap make_foliation(int n, const std::vector<std::string>& x_sources,
                            std::vector<std::string> f_names,
                            std::vector<std::string> angle_names,
                            std::map<std::string, double> params,
                            std::vector<Interval> domain);

// One term of the extraction sum: dr sits in wedge slot i, the angle
// factors left and right of it carry the labels J < i < K, and the leafwise
// columns L feed the complementary Jacobian minor. Labels are 1-based as in
// the combinatorial formula.
struct IndexTriple {
  int i = 1;
  std::vector<int> J, K, L;
};

// All admissible triples for slot i: J ranges over subsets of {1..i-1}, K
// over subsets of {i+1..n}, and |L| = n-1-|J|-|K| over subsets of {2..n}.
std::vector<IndexTriple> index_triples(int n);

// Parity exponent S of a term and the accompanying power of the imaginary
// unit, as functions of the angle labels alone.
std::pair<long, int> term_sign(int n, int p, int q, std::span<const int> J,
                               std::span<const int> K);

// Jacobian A[i][c] = d x^{i+1} / d c over columns (r, f^2..f^n), evaluated
// as first-order jets of the foliated cone point.
Matrix<Jet2> jacobian_at(const FoliationMap& m, std::span<const Jet2> jets);

// Minor of A over the rows not suppressed by J, i, K and the columns L.
// The empty minor is 1.
Jet2 minor_det(const Matrix<Jet2>& A, const IndexTriple& t);

// The coefficient form omega recovered from the dr-part of Omega. Indices
// live in the foliated cone chart (slot 0 = r, never used); coefficients
// carry first-order jets.
FormValue extract_special_form(const FoliationMap& m, std::span<const Jet2> jets);
FormValue extract_special_form_at(const FoliationMap& m,
                                  std::span<const double> cone_pt);

struct OmegaPair {
  FormValue omega_full;  // Omega itself, degree n
  FormValue omega_base;  // (1/r^{n-1}) dr-part with dr removed, degree n-1
};

// Expands Omega = e^{z^1} dz^1 ^ ... ^ dz^n by direct wedge multiplication
// in the (dr, df, dphi) coframe; independent of the combinatorial sum.
OmegaPair direct_expansion_oracle(const FoliationMap& m,
                                  std::span<const Jet2> jets);

// extract_special_form as a field on the foliated cone chart.
FormField extracted_form_field(const FoliationMap& m);

// || Omega - r^{n-1} dr ^ omega - (r^n / n) d omega || / || Omega || with d
// taken along the base directions only.
double omega_identity_residual(const FoliationMap& m,
                               std::span<const double> cone_pt);

std::vector<std::vector<double>> sample_foliated_points(const FoliationMap& m,
                                                        int count,
                                                        std::uint64_t seed);

}  // namespace skf
