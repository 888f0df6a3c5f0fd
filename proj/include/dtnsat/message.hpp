#pragma once

#include "dtnsat/types.hpp"

namespace dtnsat {

constexpr Bytes kDefaultMessageSize = 2064;
constexpr double kDefaultTtl = 3600.0;

struct Message {
  MessageIndex id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  Bytes size = kDefaultMessageSize;
  double created_at = 0.0;
  double ttl = kDefaultTtl;

  double deadline() const { return created_at + ttl; }
};

}  // namespace dtnsat
