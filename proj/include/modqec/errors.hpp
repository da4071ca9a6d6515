#ifndef MODQEC_ERRORS_HPP
#define MODQEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modqec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define MODQEC_DEFINE_ERROR(Name)                                              \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}   \
    }

MODQEC_DEFINE_ERROR(NotHermitian);
MODQEC_DEFINE_ERROR(NotPositive);
MODQEC_DEFINE_ERROR(DimensionMismatch);
MODQEC_DEFINE_ERROR(AlgebraMismatch);
MODQEC_DEFINE_ERROR(NotAState);
MODQEC_DEFINE_ERROR(NotSeparating);
MODQEC_DEFINE_ERROR(NotFaithful);
MODQEC_DEFINE_ERROR(NotInAlgebra);
MODQEC_DEFINE_ERROR(NotIsometry);
MODQEC_DEFINE_ERROR(RecoveryInconsistent);
MODQEC_DEFINE_ERROR(InvalidDims);
MODQEC_DEFINE_ERROR(HypothesisLost);
MODQEC_DEFINE_ERROR(SequenceTooShort);
MODQEC_DEFINE_ERROR(ParseError);
MODQEC_DEFINE_ERROR(SchemaVersionMismatch);

#undef MODQEC_DEFINE_ERROR

} // namespace modqec

#endif
