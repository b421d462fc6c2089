#ifndef FUNNEL_ROUNDING_HPP
#define FUNNEL_ROUNDING_HPP

// Directed-rounding scalar kernel. All endpoint arithmetic in the library goes
// through these functions, which return correctly rounded results toward
// -inf/+inf on a configurable binary precision grid (default: full 53-bit
// doubles). Directed rounding is implemented with error-free transformations
// (two_sum / fma residuals), so no fesetround calls are needed and results do
// not depend on the ambient rounding mode or on compiler contraction settings
// within this translation unit.

namespace funnel {

// Working significand precision in bits, 16..53. Process-wide, set once at
// startup (CLI --precision). Every directed operation lands on the p-bit grid.
void set_precision_bits(int p);
int precision_bits();

// Round an exact double onto the current precision grid.
double grid_down(double x);
double grid_up(double x);

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
// b != 0.
double div_down(double a, double b);
double div_up(double a, double b);

// sign(x)*|x|^(1/3), exact when the cube root is representable, otherwise
// widened by one ulp in the requested direction.
double scbrt_down(double x);
double scbrt_up(double x);

// Truncate the significand of x toward zero to `bits` bits. Used to keep grid
// steps short enough that node positions stay exactly representable.
double trunc_significand(double x, int bits);

double prev_double(double x);
double next_double(double x);

} // namespace funnel

#endif
