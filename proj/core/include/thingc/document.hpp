#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thingc/dynamics.hpp"
#include "thingc/model.hpp"

namespace thingc {

/// An input binding with its default value list. `name` is the machine path
/// of the bound stage (without the stage keyword), e.g. `tape` for
/// `tape.create`. Binding to a Transfer streams the elements one by one;
/// binding to a Create delivers the whole list as a single List thing.
struct InputBinding {
  std::string name;
  std::string path;  // full dotted path as written
  StageId stage;
  std::vector<Thing> things;
};

/// Everything a `.tm` file denotes: the static model plus declared events,
/// an optional behavior graph, and input bindings.
struct ModelDocument {
  StaticModel model;
  std::vector<EventDef> events;
  std::optional<BehaviorGraph> behavior;
  std::vector<InputBinding> inputs;

  const EventDef* find_event(const std::string& name) const {
    for (const EventDef& e : events)
      if (e.name == name) return &e;
    return nullptr;
  }
  const InputBinding* find_input(const std::string& key) const {
    for (const InputBinding& b : inputs)
      if (b.name == key || b.path == key) return &b;
    return nullptr;
  }
};

}  // namespace thingc
