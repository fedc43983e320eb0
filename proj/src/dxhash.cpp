#include "dxhash/dxhash.hpp"

namespace dxhash {

template class BasicDxHash<BitStateArray>;
template class BasicDxHash<ByteStateArray>;

} // namespace dxhash
