#pragma once

#include <stdexcept>
#include <string>

namespace dtflow {

struct ZeroVectorError : std::runtime_error {
    ZeroVectorError() : std::runtime_error("divisibility of the zero vector is undefined") {}
};

struct ZeroLatticeError : std::runtime_error {
    ZeroLatticeError() : std::runtime_error("saturation index of the zero lattice is undefined") {}
};

struct ZeroContractionError : std::runtime_error {
    explicit ZeroContractionError(const std::string& what) : std::runtime_error(what) {}
};

struct RankViolationError : std::runtime_error {
    explicit RankViolationError(const std::string& what) : std::runtime_error(what) {}
};

struct InfiniteCokernelError : std::runtime_error {
    explicit InfiniteCokernelError(const std::string& what) : std::runtime_error(what) {}
};

struct NonIntegerResultError : std::runtime_error {
    explicit NonIntegerResultError(const std::string& what) : std::runtime_error(what) {}
};

struct RetriesExhaustedError : std::runtime_error {
    explicit RetriesExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

struct BruteForceOverflowError : std::runtime_error {
    explicit BruteForceOverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dtflow
