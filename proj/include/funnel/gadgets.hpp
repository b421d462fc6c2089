#ifndef FUNNEL_GADGETS_HPP
#define FUNNEL_GADGETS_HPP

#include <cstdint>
#include <vector>

#include "funnel/errors.hpp"
#include "funnel/interval.hpp"

namespace funnel {

// Finite prefix of a sequence over {0,1,2}; positions past the prefix are 2.
// Domain condition: 0 and 1 never both occur.
struct BitStream {
    std::vector<std::uint8_t> entries;

    bool has(int bit) const;
    bool valid_domain() const { return !(has(0) && has(1)); }
    // Throws DomainViolation on a bad stream.
    void validate() const;
};

// 2^-j for the first position j holding `bit`, 0 if it never occurs.
double t_value(const BitStream& p, int bit);

// Triangle pulse max(0, 1-|2x-1|) scaled by t_value(p,1)-t_value(p,0).
Interval eval_h(const BitStream& p, const Interval& x);

// Non-Lipschitz amplifier 9x(1-x)*sign(y)|y|^(1/3) for x in [0,1].
Interval eval_s(const Interval& x, const Interval& y);

// Piecewise gadget: h_p on [0,1], s(x-1,y) on [1,2], -s(x-2,y) on [2,3],
// -h_p(x-3) on [3,4], 0 elsewhere. Intervals straddling seams take hulls;
// every piece vanishes at the seams.
Interval eval_g(const BitStream& p, const Interval& x, const Interval& y);

// Parallel sum: cell m = <k,i> occupies |x| in [2^-(m+1), 2^-m] and holds a
// copy of gadget i scaled by 2^-(m+3) in value, 2^(m+3) in x and 2^(2(m+3))
// in y; even in x. Cells beyond cell_budget are replaced by a sound tail
// bound near x = 0.
Interval eval_parallel_f(const std::vector<BitStream>& streams, int cell_budget,
                         const Interval& x, const Interval& y);

// Tail magnitude bound for cells m > cell_budget given |y| <= sup_abs_y.
double parallel_tail_bound(int cell_budget, double sup_abs_y);

// Cantor pairing <k,i> and its inverse; the cell index of the parallel sum.
std::uint64_t cell_index(std::uint64_t k, std::uint64_t i);
void cell_unpair(std::uint64_t m, std::uint64_t& k, std::uint64_t& i);

// Decoder geometry for cell m: sample point -2^-m + 2^-(m+2) and
// threshold 2^-(m+3).
double cell_sample_x(int m);
double cell_threshold(int m);

// Closed-form solutions of y' = s(x,y) on [0,1]:
//   y0 != 0: sign(y0)*(x^2(3-2x) + |y0|^(2/3))^(3/2)
//   y0 == 0: 0 up to c, then sgn*(x^2(3-2x) - c^2(3-2c))^(3/2), c in [0,1].
// Plain double oracle for tests and verification; sgn is +1/-1 and c must be
// 0 unless y0 == 0. Throws ParameterError on inconsistent input.
double closed_solution_s(double y0, int sgn, double c, double x);

} // namespace funnel

#endif
