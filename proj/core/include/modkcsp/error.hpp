#pragma once

#include <stdexcept>
#include <string>

namespace modkcsp {

// Error categories map one-to-one onto process exit codes (see cli.hpp):
//   InputError    -> 2   malformed or out-of-contract user input
//   ResourceError -> 3   an enumeration/size cap was exceeded
//   ContractError -> 4   an internal invariant or precondition was violated
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error {
    using Error::Error;
};

struct ResourceError : Error {
    using Error::Error;
};

struct ContractError : Error {
    using Error::Error;
};

}  // namespace modkcsp
