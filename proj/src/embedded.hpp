#pragma once

#include <map>
#include <string>
#include <string_view>

namespace mines::detail {

// Gadget fixture texts keyed by catalog name; generated at configure time.
const std::map<std::string, std::string_view>& embedded_gadgets();

}  // namespace mines::detail
