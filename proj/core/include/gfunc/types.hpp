#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gf {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Radii this close to a regime breakpoint are rejected; callers perturb r.
inline constexpr double kBreakpointGuard = 1e-9;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// r coincides with a tangency/breakpoint radius within tolerance.
struct TangencyDegenerate : Error { using Error::Error; };
// >=2 components intersected without the polycircular-ring structure.
struct RegimeUnsupported : Error { using Error::Error; };
// discretization requested for a regime that needs no boundary solve.
struct InvalidRegime : Error { using Error::Error; };
// coincident boundary nodes (overlapping or self-intersecting input).
struct SingularGeometry : Error { using Error::Error; };
struct SolveFailure : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct DomainViolation : Error { using Error::Error; };
struct BranchViolation : Error { using Error::Error; };
struct AnchorDegenerate : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct InversionFailure : Error { using Error::Error; };
struct WalkStall : Error { using Error::Error; };
struct DegenerateConfiguration : Error { using Error::Error; };
struct CornerOrderViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace gf
