#pragma once

#include <stdexcept>
#include <string>

namespace otmr {

// Every failure carries a stable machine-readable kind such as
// "bound-overflow" or "malformed-code"; the message adds detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace otmr
