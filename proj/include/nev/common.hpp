#ifndef NEV_COMMON_HPP
#define NEV_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace nev {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {x * c, y * c}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};
inline Vec2 operator*(double c, Vec2 v) { return v * c; }

/// Complex-valued planar vector (gradients of complex kernels).
struct CVec2 {
    Complex x{0.0, 0.0}, y{0.0, 0.0};
    Complex dot(Vec2 v) const { return x * v.x + y * v.y; }
};

enum class ErrorCode {
    NonSimpleCurve,
    DegenerateParametrization,
    ResolutionTooLow,
    DomainError,
    CoincidentPoints,
    SolveSingular,
    ResidualTooLarge,
    TooCloseToBoundary,
    NearEigenvalue,
    MultipleEigenvalue,
    NotAnEigenvalue,
    NotStarShaped,
    LostBracket,
    PlanFailure,
    SplitFailure,
    IterationBudgetExceeded,
    DeformationTooLarge,
    ParseError,
    NumericFailure,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

namespace exec {
/// Global worker count for the OpenMP kernels. 1 forces the serial path.
void set_threads(int n);
int threads();
/// Thread budget for loops that may already be inside a parallel region.
int inner_threads();
}  // namespace exec

}  // namespace nev

#endif
