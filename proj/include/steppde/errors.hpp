#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace steppde {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite or otherwise malformed in-memory values.
struct InvalidInputError : Error {
    using Error::Error;
};

// An exponent would exceed the double range (threshold 700 < ln DBL_MAX).
// `k` is the Fourier mode involved, `n` the coefficient index when the
// failure comes from a power (kπ/l)^n, -1 otherwise.
struct OverflowError : Error {
    double exponent;
    int k;
    int n;
    OverflowError(const std::string& msg, double exponent_, int k_, int n_ = -1)
        : Error(msg), exponent(exponent_), k(k_), n(n_) {}
};

// Evaluation point outside the domain or too close to a partition line.
struct DomainError : Error {
    using Error::Error;
};

// A structurally invalid problem; carries every violation found.
struct ValidationError : Error {
    std::vector<std::string> issues;
    explicit ValidationError(std::vector<std::string> issues_);
};

}  // namespace steppde
