#pragma once

#include "immunet/world.hpp"

#include <initializer_list>

namespace immunet::testing {

inline Node
makeNode( NodeId id, Role role, Position at, double energy = 100.0 )
{
    Node node;
    node.id = id;
    node.role = role;
    node.position = at;
    node.energy = energy;
    node.credential = makeCredential( id );
    return node;
}

inline WorldState
makeWorld( std::initializer_list<Node> nodes )
{
    WorldState state;
    for ( const auto& node : nodes ) {
        state.nodes.emplace( node.id, node );
    }
    return state;
}

}  // namespace immunet::testing
