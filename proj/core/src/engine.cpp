#include "polyharm/engine.hpp"

namespace polyharm {

template class Engine<Jet>;
template class Engine<GridField>;

}  // namespace polyharm
