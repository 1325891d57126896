// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cfpn {

/// File/stream failure carrying the offending path in the message.
/// Validation problems use std::invalid_argument instead; the CLI maps
/// the two onto distinct exit codes.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cfpn
