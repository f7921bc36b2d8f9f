#include "doctest.h"
#include "gem3/twistor.hpp"

TEST_CASE("placeholder twistor") { CHECK(true); }
