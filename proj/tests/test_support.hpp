#pragma once

#include <complex>

#include "ccm/model.hpp"
#include "ccm/verify.hpp"

namespace ccmtest {

inline double cdist(ccm::cplx a, ccm::cplx b) { return std::abs(a - b); }

inline double rel(ccm::cplx got, ccm::cplx want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline ccm::Coupling coupling_of(std::initializer_list<ccm::cplx> g) {
    std::vector<ccm::cplx> v(g);
    return ccm::derived_constants(static_cast<int>(v.size()), v);
}

inline ccm::SpectralPoint make_point(int m, std::vector<ccm::cplx> lambda,
                                     std::vector<ccm::cplx> phi) {
    ccm::SpectralPoint p;
    p.m = m;
    p.n = static_cast<int>(lambda.size());
    p.lambda = std::move(lambda);
    p.phi = std::move(phi);
    return p;
}

} // namespace ccmtest
