#ifndef SLEPIAN_LAB_ERRORS_HPP
#define SLEPIAN_LAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slepian_lab {

/// Requested parameter is valid mathematically but outside what this build
/// computes (state-space or dimension caps).
class unsupported_error : public std::runtime_error {
  public:
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slepian_lab

#endif
