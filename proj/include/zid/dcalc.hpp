#pragma once

#include "zid/admg.hpp"

namespace zid {

// m-separation of a and b given 'given'. Implemented by replacing each
// bidirected arc with a fresh hidden common parent and running d-separation
// on the augmented DAG. The three query sets must be pairwise disjoint
// subsets of the vertex set; hidden nodes are never addressable.
bool m_separated(const Admg& g, const VariableSet& a, const VariableSet& b,
                 const VariableSet& given);

// Do-calculus rule predicates. Each one mutilates g according to its rule
// and delegates to m_separated; x_hat is the set currently under
// intervention in the expression being rewritten, w the plain conditioning
// context.
//
// Rule 1 (insert/delete observations):   P(y | do(x), z, w) = P(y | do(x), w)
bool rule1_applicable(const Admg& g, const VariableSet& y,
                      const VariableSet& x_hat, const VariableSet& z_obs,
                      const VariableSet& w);

// Rule 2 (exchange action and observation): do(z) vs conditioning on z
bool rule2_applicable(const Admg& g, const VariableSet& y,
                      const VariableSet& x_hat, const VariableSet& z_exchange,
                      const VariableSet& w);

// Rule 3 (insert/delete actions): drop do(z) entirely; the tested graph
// additionally shields the part of z that is ancestral for w.
bool rule3_applicable(const Admg& g, const VariableSet& y,
                      const VariableSet& x_hat, const VariableSet& z_del,
                      const VariableSet& w);

}  // namespace zid
