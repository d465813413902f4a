#pragma once

#include <stdexcept>
#include <string>

namespace sej {

// Error taxonomy mapped to process exit codes:
//   validation -> 2, io -> 3, numerical -> 4
enum class ErrorKind { validation, io, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& what)
        : std::runtime_error(what), kind_(kind), name_(std::move(name)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    int exit_code() const noexcept {
        switch (kind_) {
        case ErrorKind::validation: return 2;
        case ErrorKind::io: return 3;
        case ErrorKind::numerical: return 4;
        }
        return 1;
    }

private:
    ErrorKind kind_;
    std::string name_;
};

#define SEJ_DEFINE_ERROR(NAME, KIND)                                          \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& what)                                \
            : Error(ErrorKind::KIND, #NAME, what) {}                          \
    }

SEJ_DEFINE_ERROR(ValidationError, validation);
SEJ_DEFINE_ERROR(ParseError, validation);
SEJ_DEFINE_ERROR(QuantileOrderError, validation);
SEJ_DEFINE_ERROR(RangeError, validation);
SEJ_DEFINE_ERROR(DomainError, validation);
SEJ_DEFINE_ERROR(MissingJudgementError, validation);
SEJ_DEFINE_ERROR(WeightError, validation);
SEJ_DEFINE_ERROR(CategoryMismatchError, validation);
SEJ_DEFINE_ERROR(UnknownCategoryError, validation);
SEJ_DEFINE_ERROR(InsufficientHistoryError, validation);
SEJ_DEFINE_ERROR(IoError, io);
SEJ_DEFINE_ERROR(AllExcludedError, numerical);
SEJ_DEFINE_ERROR(NoFeasibleCutoffError, numerical);

#undef SEJ_DEFINE_ERROR

} // namespace sej
