#pragma once
// HTTP routes over Service. Bodies are JSON unless noted (SKOS is text).

#include <httplib.h>

#include "classweave/service.hpp"

namespace classweave {

void install_routes(httplib::Server& server, Service& service);

}  // namespace classweave
