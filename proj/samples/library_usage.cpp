// Classifies C_{z e^{1/z}, z/2} on C* and checks the eigenfunction of C_{e^z, z/2}.

#include <cstdio>

#include "holodyn/holodyn.hpp"

int main() {
    using namespace holodyn;
    const Multiplier omega = SymbolicMultiplier{1, LaurentSeries::monomial(1.0, -1)};
    const WeightedCompositionOp T(omega, Symbol::linear(0.5), DomainSpec::punctured_plane());
    const ClassificationReport r = classify(T);
    for (Property p : kProperties)
        std::printf("%-24s %s\n", std::string(to_string(p)).c_str(), std::string(to_string(r[p])).c_str());

    const Multiplier e = SymbolicMultiplier{0, LaurentSeries::monomial(1.0, 1)};
    const EigenResult h = eigenfunction(e, 0.5, 40);
    std::printf("eigen residual %.3e\n", h.residual);
    return r[Property::SatisfiesFHC] == Verdict::Yes && h.residual < 1e-8 ? 0 : 1;
}
