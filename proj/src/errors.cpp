#include "heis/errors.hpp"

#include <sstream>

namespace heis {

namespace {
std::string describe(const char* what, double value, const char* extra = nullptr, double other = 0) {
  std::ostringstream os;
  os.precision(17);
  os << what << value;
  if (extra) os << extra << other;
  return os.str();
}
}  // namespace

NotHorizontal::NotHorizontal(double residual, double tolerance)
    : Error(describe("vector is not horizontal: residual ", residual, " exceeds tolerance ", tolerance)),
      residual_(residual) {}

EndpointMismatch::EndpointMismatch(double gap)
    : Error(describe("curves do not meet: endpoint gap ", gap)), gap_(gap) {}

}  // namespace heis
