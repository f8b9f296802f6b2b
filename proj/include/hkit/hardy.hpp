#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hkit/grid.hpp"
#include "hkit/kernels.hpp"
#include "hkit/matrix.hpp"
#include "hkit/report.hpp"

namespace hkit {

// Euclidean ball volume pi^{n/2} r^n / Gamma(n/2 + 1)
double ball_volume(int n, double radius);

// An atom: supported in B(center, radius), bounded by 1/|B|, zero mean.
struct Atom {
    int dim = 1;
    std::vector<double> center;
    double radius = 1.0;
    AtomShape profile = AtomShape::SignSplit;
};

// Sampled atom with the discrete weights balanced so the Riemann mean is
// zero to roundoff and the sup bound holds exactly.
GridFunction make_atom(const Atom& spec, const Box& box, std::vector<int> resolution);

// Three checks: support leakage (l1-mass outside the ball), sup bound
// max|g| <= (1 + tol)/|B|, and |Riemann mean| <= tol. lhs is the worst
// violation, rhs the tolerance.
VerificationReport check_atom(const GridFunction& g, std::span<const double> center, double radius,
                              double tol);

// Interface constant K_p of a profile: jump size times interface area, in
// units of the sup bound; the sampling tolerance for a transformed atom is
// 2 * K_p * (effective spacing) / radius.
double atom_profile_constant(AtomShape profile, int n);
double atom_check_tolerance(AtomShape profile, int n, double radius, double effective_spacing);

// g(x) = l1^{n/2} a(xM), l1 the least eigenvalue of M^T M. The caller
// guarantees the image support fits in out_box.
GridFunction transform_atom(const GridFunction& a, const SquareMatrix& m, const Box& out_box,
                            std::vector<int> out_resolution);

std::vector<double> transformed_center(std::span<const double> center, const SquareMatrix& m);
double transformed_radius(double radius, const SquareMatrix& m);

struct TransformedAtom {
    GridFunction value;
    std::vector<double> center; // x0 M^{-1}
    double radius;              // r / sqrt(l1)
    double l1;
};

// Output grid derived from the transformed ball (30% margin), resolution
// copied from the input.
TransformedAtom transform_atom(const GridFunction& a, const Atom& spec, const SquareMatrix& m);
// Explicit output grid; throws BallOutsideBox when the transformed ball
// does not fit.
TransformedAtom transform_atom(const GridFunction& a, const Atom& spec, const SquareMatrix& m,
                               const Box& out_box, std::vector<int> out_resolution);

// Samples |p| <= r, maps through M^{-1} and checks |p M^{-1}| <= r/sqrt(l1);
// also checks the bound is attained within 10/sqrt(num_samples).
VerificationReport verify_ellipsoid_containment(const SquareMatrix& m, double r, int num_samples,
                                                std::uint64_t seed = 0);

// Frequency lattice of a grid with the Riesz multipliers m_p = -i xi_p/|xi|,
// m_p(0) = 0. At a Nyquist index along axis p the multiplier is made real
// (-xi_p/|xi|) so that real input stays real; magnitudes are unchanged.
class SpectralGrid {
public:
    SpectralGrid(Box box, std::vector<int> resolution);

    int dim() const { return box_.dim(); }
    const std::vector<int>& resolution() const { return res_; }
    // signed integer index (k <= N/2 ? k : k - N) over the axis length
    double frequency(int axis, int k) const;
    bool nyquist_or_zero(int axis, int k) const;
    std::complex<double> multiplier(int p, std::span<const int> k) const; // p in 1..n

private:
    Box box_;
    std::vector<int> res_;
};

// R_p f via the DFT; output is real (imaginary residue below 1e-10 of the
// output norm, then discarded). p in 1..n.
GridFunction riesz_transform(const GridFunction& f, int p);

struct H1Report {
    double total = 0.0;
    std::vector<double> terms; // ||R_p f||_1 for p = 0..n, R_0 = identity
    double mean = 0.0;         // mean of f, reported (the surrogate wants near-zero)
};

H1Report h1_surrogate(const GridFunction& f);
double h1_surrogate_norm(const GridFunction& f);

// f zero-embedded in the 2x-enlarged box at the same spacing
GridFunction embed_zero_padded(const GridFunction& f);
// relative change of the surrogate under 2x box enlargement (periodization error)
double wraparound_estimate(const GridFunction& f);

// ratio of h1(f(. M)) to l1^{-n/2} h1(f); pass iff ratio <= c_dil, and for
// M = c I additionally |ratio - 1| <= 0.02.
VerificationReport verify_dilation_h1(const GridFunction& f, const SquareMatrix& m, double c_dil = 10.0);

// h1(Hf) <= c_h1 * ||Phi||_{L2_{A^-1}} * h1(f)
VerificationReport verify_h1_bound(const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f,
                                   const QuadratureSpec& q, double c_h1 = 10.0, const NormOptions& opts = {});

} // namespace hkit
