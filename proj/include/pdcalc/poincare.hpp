#pragma once

// Filtered exactness checks for the augmented complex
//
//     O  ->  L(Omega^0)  ->  L(Omega^1)  ->  L(Omega^2)
//
// over affine n-space at truncation D: the linearized levels resolve the
// constants in every filtration degree inside the truncation-safe band, and
// the plain coordinate-ring complex serves as the negative control (it fails
// exactness, which is what makes the linearization essential).

#include <string>
#include <vector>

#include "pdcalc/bl_complex.hpp"
#include "pdcalc/linalg.hpp"

namespace pdcalc {

struct PoincareComplex {
  PrimeLevel pl;
  int n = 1;
  int D = 0;
  bool linearized = true;
  std::vector<LinearizedLevel> levels;  // degrees 0..2
  UMat d0, d1;                          // degree 0 -> 1 and 1 -> 2
};

// Degrees 0..2 of the linearized complex; requires D >= 2*p^m so the
// degree-two level (and its relation set) is complete and the safe band is
// nonempty.  Throws TruncationTooSmall otherwise.
PoincareComplex build_linearized(const PrimeLevel& pl, int n, int D);

// The non-linearized control: the coordinate-ring levels with the same
// truncation and the finite-difference differential.
PoincareComplex build_derham(const PrimeLevel& pl, int n, int D);

// Largest filtration index the truncation supports: D - 2*p^m.
int safe_band(const PoincareComplex& c);

struct ExactnessCheck {
  int k = 0;
  int position = 0;  // 0 = L(Omega^0), 1 = L(Omega^1)
  bool exact = false;
  // Sizes as log_p of the module order over Z/p^N, dimensions over a field.
  int kernel_length = 0;
  int image_length = 0;
  int homology_length = 0;
  std::string witness;  // a cycle that is no boundary, when not exact
};

// Exactness of Fil^k at one position: cycles are the Fil^k vectors whose
// differential lands in the codomain relation span; boundaries come from
// Fil^k one step down (position 0 compares against the augmentation, whose
// filtration is trivial: constants at k <= 0, nothing above).
// Throws BandViolation outside 0 <= k <= safe_band(c).
ExactnessCheck check_exactness(const Ring& R, const PoincareComplex& c,
                               int k, int position);

struct ExactnessReport {
  int band = 0;
  bool all_exact = true;
  std::vector<ExactnessCheck> checks;  // (k, position), k ascending
};

// Runs both positions for every k in [0, safe_band].
ExactnessReport check_band(const Ring& R, const PoincareComplex& c);

// Hodge-filtration generator rows of the degree-one level for k = 0 up to
// D - p^m, the input shape expected by transversality_check.
std::vector<Mat> hodge_filtration(const Ring& R, const PoincareComplex& c);

}  // namespace pdcalc
