#ifndef DRIFTSPEC_STURM_HPP
#define DRIFTSPEC_STURM_HPP

#include <string>
#include <vector>

#include "driftspec/density.hpp"
#include "driftspec/profile_curve.hpp"

namespace driftspec {

// Periodic Sturm-Liouville operator on the profile curve,
//   (A y)_i = -[p_{i+1/2}(y_{i+1}-y_i) - p_{i-1/2}(y_i-y_{i-1})] / (p_i h^2) + q_i y_i,
// with midpoint weights p_{i+1/2} = (p_i + p_{i+1})/2. A is self-adjoint in
// the weighted inner product sum(u v p h) and positive semidefinite; built
// from a curve it carries p = rho e^psi and q = k^2/rho^2 for angular mode k.
struct SturmOperator {
    std::vector<double> p;
    std::vector<double> q;
    double h = 0.0;
    double length = 0.0;
    int k = 0;

    int size() const { return static_cast<int>(p.size()); }
    void validate() const;

    std::vector<double> apply(const std::vector<double>& y) const;
    double weighted_inner(const std::vector<double>& u, const std::vector<double>& v) const;
};

SturmOperator build_operator(const ProfileCurve& curve, const RadialDensity& density, int k);
SturmOperator make_operator(std::vector<double> p, std::vector<double> q, double length, int k = 0);

// Eigenpairs of one angular mode: mu ascending, eigenfunctions orthonormal in
// the weighted inner product, sign fixed so the first above-threshold entry
// is positive, nodal-domain count per eigenfunction.
struct ModeSpectrum {
    int k = 0;
    std::vector<double> mu;
    std::vector<std::vector<double>> phi;
    std::vector<int> nodal;
};

ModeSpectrum solve_modes(const SturmOperator& op, int j_max);

// Lowest modes for k = 0..k_max, solved in parallel.
std::vector<ModeSpectrum> solve_all_modes(const ProfileCurve& curve, const RadialDensity& density,
                                          int k_max, int j_max);

// Nodal domains of a sampled function on the periodic grid: entries with
// |phi| below threshold * max|phi| are treated as zeros, and the count is the
// number of maximal sign-constant arcs around the circle.
int nodal_domains(const std::vector<double>& phi, double threshold = 1e-7);

struct SpectrumEntry {
    double mu = 0.0;
    int k = 0;
    int j = 0;
    int multiplicity = 1;   // 1 for k = 0, else 2
    int nodal_curve = 1;    // nodal domains of the curve factor
    int nodal_product = 1;  // times the circle-factor count (1 for k = 0, 2k otherwise)
};

struct SpectrumReport {
    std::vector<SpectrumEntry> entries; // ascending
    double lambda1 = 0.0;               // first eigenvalue above zero_tol
    int lambda1_k = 0;
    int lambda1_j = 0;
    double zero_tol = 0.0;
    bool truncation_warning = false;
    std::string warning;
};

// Merges the per-mode ladders into the full revolution-surface spectrum.
// Requires contiguous modes k = 0..k_max with k_max >= 2; checks that the
// k = 0 ground eigenvalue vanishes to roundoff and flags lambda1 landing on
// the truncation boundary.
SpectrumReport assemble_spectrum(const std::vector<ModeSpectrum>& modes, double zero_tol);

// Residuals of the coordinate eigenfunction identities for a Gaussian
// density with constant C: the rho factor against the k = 1 operator and the
// centered z factor against the k = 0 operator, both as
// ||A y + C y||_inf / ||y||_inf.
struct CoordinateResiduals {
    double rho_residual = 0.0;
    double z_residual = 0.0;
};

CoordinateResiduals verify_coordinate_eigenfunctions(const ProfileCurve& curve,
                                                     const RadialDensity& density);

// Second linearly independent solution through a zero of a k = 0
// eigenfunction: integrates (p zeta')' + mu p zeta = 0 with zeta = 1,
// zeta' = 0 at the zero, alongside the normalized eigen-solution
// z(0) = 0, z'(0) = 1/p(0), and reports the periodicity defects of zeta and
// the drift of the Wronskian p (zeta z' - zeta' z) from 1.
struct SecondSolutionReport {
    double defect_value = 0.0;  // |zeta(L) - 1|
    double defect_deriv = 0.0;  // |zeta'(L)|
    double wronskian_drift = 0.0;
    double mu = 0.0;
    double zero_location = 0.0; // arc length of the chosen zero
};

SecondSolutionReport second_solution_check(const SturmOperator& op, double mu,
                                           const std::vector<double>& z_like);

} // namespace driftspec

#endif
