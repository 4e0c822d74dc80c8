#pragma once

#include "idinf/matlin.hpp"

namespace idinf {

/// Two real anti-involutions J1, J2 of the same even dimension.
struct ComplexStructurePair {
    Index dim = 0;
    RealMatrix J1;
    RealMatrix J2;
    double residual_J1 = 0.0;  // ||J1^2 + I||_F / sqrt(dim)
    double residual_J2 = 0.0;
};

/// The algebra generators a = J1 J2 and b = J2, with a^{-1} cached.
struct GeneratorPair {
    RealMatrix a;
    RealMatrix b;
    RealMatrix a_inv;

    Index dim() const { return a.rows(); }
};

struct RelationResiduals {
    double rel = 0.0;  // ||b a b^{-1} - a^{-1}||_F / ||a^{-1}||_F
    double b2 = 0.0;   // ||b^2 + I||_F / sqrt(dim)
};

/// RMS-normalised defect ||J^2 + I||_F / sqrt(dim).
double complex_structure_residual(const RealMatrix& J);

/// Accepts the pair iff ||Ji^2 + I||_F <= residual_rel * (1 + ||Ji||_F^2) for both.
ComplexStructurePair validate_pair(const RealMatrix& J1, const RealMatrix& J2,
                                   const TolerancePolicy& tol);

GeneratorPair generators(const ComplexStructurePair& pair, const TolerancePolicy& tol = {});

RelationResiduals relation_residuals(const GeneratorPair& g);

}  // namespace idinf
