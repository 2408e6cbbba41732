#pragma once

#include <string>

#include "thingc/document.hpp"

namespace thingc {

/// Canonical textual form. parse(print_model(d)) is structurally equal to d.
/// Declaration order is preserved: it is semantically meaningful for flow
/// fan-out and trigger firing order.
std::string print_model(const ModelDocument& doc);

std::string print_expr(const Expr& expr);
std::string print_annotation(const Annotation& ann);

/// Order-preserving structural equality of two documents (ids ignored,
/// everything compared by path and value). This is the round-trip relation.
bool structurally_equal(const ModelDocument& a, const ModelDocument& b);

/// Order-insensitive signature: elements canonically sorted, so two models
/// built from the same element set in any legal order compare equal.
std::string canonical_signature(const ModelDocument& doc);

}  // namespace thingc
