// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace losmimo {

/// git-describe style identifier of the build.
std::string_view version();

}  // namespace losmimo
