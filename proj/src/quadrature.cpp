#include "mollifem/quadrature.hpp"

namespace mollifem {

void validate(const GridSpec& spec)
{
    if (spec.m < 2)
        throw ValidationError("simpson: need at least 2 subintervals");
    if (spec.m % 2 != 0)
        throw ValidationError("simpson: subinterval count must be even");
    if (!(spec.a < spec.b))
        throw ValidationError("simpson: interval endpoints must satisfy a < b");
}

} // namespace mollifem
