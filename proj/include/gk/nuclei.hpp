#ifndef GK_NUCLEI_HPP
#define GK_NUCLEI_HPP

#include "gk/semifield.hpp"

namespace gk {

enum class Side { Middle, Right };

struct NucleusReport {
    Side side = Side::Middle;
    int dimension = 0;        // F_p-dimension of the linear solution space
    u64 unit_count = 0;       // invertible solutions
    int s = 0;                // identified subfield degree: unit_count = p^s - 1
    u64 field_size = 0;       // p^s
    bool is_field = false;    // solution space closed under + and *, nonzeros invertible
    bool matches_predicted = false;  // exact matrix-set equality with the predicted family
    MatFp generator;          // unit of maximal multiplicative order
    std::vector<MatFp> space; // every solution (including 0), deterministic order
};

/// The predicted nucleus family as matrices: right side is the plain scalar
/// family {(x,y) -> (ax, ay) : a in F_{p^d}}; the middle side is the
/// Frobenius-twisted family {(x,y) -> (ax, a^{p^d} y) : a in F_{p^2d}} (the
/// plain form only closes over F_{p^d}; the twisted form is what the spread
/// set actually admits, with matching field size). Includes the zero matrix.
std::vector<MatFp> nucleus_predicted(const GkParams& P, Side side);

/// Independent computation by exact linear algebra: solves c_j Y in C (middle)
/// or X c_j in C (right) over all basis members, then filters units.
NucleusReport middle_nucleus(const SpreadSet& C);
NucleusReport right_nucleus(const SpreadSet& C);

} // namespace gk

#endif
