#pragma once

#include <stdexcept>
#include <string>

namespace lvs {

// Error for bad input data or violated operation contracts. The CLI maps
// these to exit code 1; usage mistakes (bad flags) are exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lvs
