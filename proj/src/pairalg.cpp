#include "idinf/pairalg.hpp"

#include <cmath>
#include <sstream>

#include "idinf/error.hpp"

namespace idinf {

double complex_structure_residual(const RealMatrix& J) {
    const Index n = J.rows();
    if (n == 0) return 0.0;
    RealMatrix defect = J * J;
    defect.diagonal().array() += 1.0;
    return defect.norm() / std::sqrt(static_cast<double>(n));
}

ComplexStructurePair validate_pair(const RealMatrix& J1, const RealMatrix& J2,
                                   const TolerancePolicy& tol) {
    tol.validate();
    if (J1.rows() != J1.cols() || J2.rows() != J2.cols() || J1.rows() != J2.rows()) {
        std::ostringstream msg;
        msg << "J1 is " << J1.rows() << "x" << J1.cols() << ", J2 is " << J2.rows() << "x"
            << J2.cols() << "; both must be square of the same size";
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    require_finite(J1, "J1");
    require_finite(J2, "J2");
    const Index n = J1.rows();
    if (n == 0 || n % 2 != 0) {
        throw Error(ErrorCode::OddDimension,
                    "dimension " + std::to_string(n) + " admits no complex structure");
    }

    ComplexStructurePair pair;
    pair.dim = n;
    pair.J1 = J1;
    pair.J2 = J2;
    const RealMatrix* js[2] = {&J1, &J2};
    double* residuals[2] = {&pair.residual_J1, &pair.residual_J2};
    for (int i = 0; i < 2; ++i) {
        const RealMatrix& J = *js[i];
        RealMatrix defect = J * J;
        defect.diagonal().array() += 1.0;
        const double res = defect.norm();
        const double bound = tol.residual_rel * (1.0 + J.squaredNorm());
        *residuals[i] = res / std::sqrt(static_cast<double>(n));
        if (!(res <= bound)) {
            std::ostringstream msg;
            msg.precision(3);
            msg << "J" << (i + 1) << " is not a complex structure: ||J" << (i + 1)
                << "^2 + I|| = " << res << " exceeds " << bound;
            throw Error(ErrorCode::NotAComplexStructure, msg.str());
        }
    }
    return pair;
}

GeneratorPair generators(const ComplexStructurePair& pair, const TolerancePolicy& tol) {
    GeneratorPair g;
    g.a = pair.J1 * pair.J2;
    g.b = pair.J2;
    // a is a product of two invertible matrices; a singular result means the
    // pair slipped through validation with a huge residual.
    try {
        g.a_inv = inverse(g.a, tol);
    } catch (const Error& e) {
        throw Error(ErrorCode::NumericalFailure, std::string("a = J1 J2 is not invertible: ") + e.what());
    }
    return g;
}

RelationResiduals relation_residuals(const GeneratorPair& g) {
    RelationResiduals out;
    const Index n = g.dim();
    if (n == 0) return out;
    const RealMatrix b_inv = g.b.partialPivLu().inverse();
    out.rel = (g.b * g.a * b_inv - g.a_inv).norm() / g.a_inv.norm();
    RealMatrix b2 = g.b * g.b;
    b2.diagonal().array() += 1.0;
    out.b2 = b2.norm() / std::sqrt(static_cast<double>(n));
    return out;
}

}  // namespace idinf
