#ifndef COOWNET_VERSION_HPP
#define COOWNET_VERSION_HPP

#include <string_view>

namespace coownet {

inline constexpr std::string_view kVersion = "0.1.0";

}

#endif
