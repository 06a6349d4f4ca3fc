#pragma once

#include <functional>
#include <string>

namespace vexp {

using WarningHandler = std::function<void(const std::string&)>;

/// Routes library warnings; an empty handler restores the default, which
/// writes "warning: <text>" to stderr.
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace vexp
