#ifndef STQ_ERRORS_HPP
#define STQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stq {

struct NonHermitianInput : std::invalid_argument {
    explicit NonHermitianInput(const std::string& what) : std::invalid_argument(what) {}
};

struct NonUnitAxis : std::invalid_argument {
    explicit NonUnitAxis(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroZeemanField : std::invalid_argument {
    explicit ZeroZeemanField(const std::string& what) : std::invalid_argument(what) {}
};

struct UnalignedZeeman : std::invalid_argument {
    explicit UnalignedZeeman(const std::string& what) : std::invalid_argument(what) {}
};

struct OccupationWindowViolated : std::domain_error {
    explicit OccupationWindowViolated(const std::string& what) : std::domain_error(what) {}
};

struct DegenerateCrossing : std::domain_error {
    explicit DegenerateCrossing(const std::string& what) : std::domain_error(what) {}
};

struct ResonantDenominator : std::domain_error {
    explicit ResonantDenominator(const std::string& what) : std::domain_error(what) {}
};

struct ZeroCoupling : std::domain_error {
    explicit ZeroCoupling(const std::string& what) : std::domain_error(what) {}
};

} // namespace stq

#endif
