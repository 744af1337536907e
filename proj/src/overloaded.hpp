#pragma once

namespace urmflow::detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace urmflow::detail
