#pragma once

#include <stdexcept>
#include <string>

namespace bcp {

using invalid_argument = std::invalid_argument;
using domain_error = std::domain_error;

struct degenerate_configuration : std::domain_error {
    using std::domain_error::domain_error;
};

}
