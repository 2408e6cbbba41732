#include "thingc/model.hpp"

#include <algorithm>

namespace thingc {

const char* stage_kind_name(StageKind k) {
  switch (k) {
    case StageKind::Create: return "create";
    case StageKind::Process: return "process";
    case StageKind::Release: return "release";
    case StageKind::Transfer: return "transfer";
    case StageKind::Receive: return "receive";
  }
  return "?";
}

std::optional<StageKind> stage_kind_from(const std::string& word) {
  for (StageKind k : kAllStageKinds)
    if (word == stage_kind_name(k)) return k;
  return std::nullopt;
}

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptyName: return "EmptyName";
    case ErrorCode::UnknownMachine: return "UnknownMachine";
    case ErrorCode::UnknownStage: return "UnknownStage";
    case ErrorCode::UnknownStorage: return "UnknownStorage";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DuplicateStageKind: return "DuplicateStageKind";
    case ErrorCode::DuplicateStorageName: return "DuplicateStorageName";
    case ErrorCode::DuplicateInputName: return "DuplicateInputName";
    case ErrorCode::EmitOnNonCreate: return "EmitOnNonCreate";
    case ErrorCode::IllegalFlow: return "IllegalFlow";
    case ErrorCode::IllegalTriggerTarget: return "IllegalTriggerTarget";
    case ErrorCode::IllegalInputTarget: return "IllegalInputTarget";
    case ErrorCode::FrozenModel: return "FrozenModel";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
  }
  return "?";
}

bool Annotation::equals(const Annotation& other) const {
  auto expr_eq = [](const ExprPtr& a, const ExprPtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return a->equals(*b);
  };
  if (!expr_eq(guard, other.guard) || !expr_eq(delay, other.delay)) return false;
  if (actions.size() != other.actions.size()) return false;
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (!actions[i].equals(other.actions[i])) return false;
  return emit == other.emit;
}

StaticModel::StaticModel(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw ModelError(ErrorCode::EmptyName, "model name must not be empty");
}

void StaticModel::require_mutable() const {
  if (frozen_) throw ModelError(ErrorCode::FrozenModel, "model is frozen");
}

MachineId StaticModel::add_machine(std::optional<MachineId> parent, std::string name) {
  require_mutable();
  if (name.empty()) throw ModelError(ErrorCode::EmptyName, "machine name must not be empty");
  if (parent && parent->index >= machines_.size())
    throw ModelError(ErrorCode::UnknownMachine, "unknown parent machine");
  // Sibling names must be unique so dotted paths resolve.
  auto sibling_clash = [&](MachineId sid) { return machines_[sid.index].name == name; };
  if (parent) {
    const auto& kids = machines_[parent->index].children;
    if (std::any_of(kids.begin(), kids.end(), sibling_clash))
      throw ModelError(ErrorCode::DuplicateName,
                       "machine `" + name + "` already exists under `" +
                           machine_path(*parent) + "`");
  } else {
    for (const Machine& m : machines_)
      if (!m.parent && m.name == name)
        throw ModelError(ErrorCode::DuplicateName,
                         "top-level machine `" + name + "` already exists");
  }
  MachineId id{static_cast<std::uint32_t>(machines_.size())};
  Machine m;
  m.id = id;
  m.name = std::move(name);
  m.parent = parent;
  machines_.push_back(std::move(m));
  if (parent) machines_[parent->index].children.push_back(id);
  return id;
}

StageId StaticModel::add_stage(MachineId machine, StageKind kind, Annotation annotation) {
  require_mutable();
  if (machine.index >= machines_.size())
    throw ModelError(ErrorCode::UnknownMachine, "unknown machine");
  Machine& m = machines_[machine.index];
  if (m.stage_by_kind[static_cast<std::size_t>(kind)].valid())
    throw ModelError(ErrorCode::DuplicateStageKind,
                     "machine `" + machine_path(machine) + "` already has a " +
                         stage_kind_name(kind) + " stage");
  if (!annotation.emit.empty() && kind != StageKind::Create)
    throw ModelError(ErrorCode::EmitOnNonCreate,
                     "emit is permitted only on create stages");
  StageId id{static_cast<std::uint32_t>(stages_.size())};
  stages_.push_back(Stage{id, machine, kind, std::move(annotation)});
  m.stage_by_kind[static_cast<std::size_t>(kind)] = id;
  return id;
}

namespace {

struct EndpointCheck {
  bool is_stage;
  StageId stage;
  StorageId storage;
};

}  // namespace

FlowId StaticModel::add_flow(Endpoint from, Endpoint to) {
  require_mutable();
  auto check = [&](const Endpoint& e) {
    if (const StageId* s = std::get_if<StageId>(&e)) {
      if (s->index >= stages_.size())
        throw ModelError(ErrorCode::UnknownStage, "unknown stage endpoint");
    } else {
      const StorageId d = std::get<StorageId>(e);
      if (d.index >= storages_.size())
        throw ModelError(ErrorCode::UnknownStorage, "unknown storage endpoint");
    }
  };
  check(from);
  check(to);

  const StageId* fs = std::get_if<StageId>(&from);
  const StageId* ts = std::get_if<StageId>(&to);
  if (fs && ts) {
    bool same = same_machine(*fs, *ts);
    StageKind fk = stage(*fs).kind;
    StageKind tk = stage(*ts).kind;
    if (!flow_legal_stage_pair(fk, tk, same))
      throw ModelError(ErrorCode::IllegalFlow,
                       flow_rule_name(fk, tk, same) + " violated by " +
                           endpoint_path(from) + " -> " + endpoint_path(to));
  } else if (fs && !ts) {
    if (!flow_legal_into_storage(stage(*fs).kind))
      throw ModelError(ErrorCode::IllegalFlow,
                       std::string("only create and process may flow into storage; got ") +
                           stage_kind_name(stage(*fs).kind) + " at " + endpoint_path(from));
  } else if (!fs && ts) {
    if (!flow_legal_from_storage(stage(*ts).kind))
      throw ModelError(ErrorCode::IllegalFlow,
                       std::string("storage may flow only into process or release; got ") +
                           stage_kind_name(stage(*ts).kind) + " at " + endpoint_path(to));
  } else {
    throw ModelError(ErrorCode::IllegalFlow, "storage-to-storage flows are not permitted");
  }
  return insert_flow_unchecked(from, to);
}

FlowId StaticModel::insert_flow_unchecked(Endpoint from, Endpoint to) {
  require_mutable();
  FlowId id{static_cast<std::uint32_t>(flows_.size())};
  flows_.push_back(Flow{id, from, to});
  return id;
}

TriggerId StaticModel::add_trigger(StageId from, StageId to, ExprPtr condition) {
  require_mutable();
  if (from.index >= stages_.size() || to.index >= stages_.size())
    throw ModelError(ErrorCode::UnknownStage, "unknown trigger endpoint");
  if (!trigger_target_legal(stage(to).kind))
    throw ModelError(ErrorCode::IllegalTriggerTarget,
                     "trigger target must be create or process; got " +
                         std::string(stage_kind_name(stage(to).kind)) + " at " +
                         stage_path(to));
  return insert_trigger_unchecked(from, to, std::move(condition));
}

TriggerId StaticModel::insert_trigger_unchecked(StageId from, StageId to, ExprPtr condition) {
  require_mutable();
  if (from.index >= stages_.size() || to.index >= stages_.size())
    throw ModelError(ErrorCode::UnknownStage, "unknown trigger endpoint");
  TriggerId id{static_cast<std::uint32_t>(triggers_.size())};
  triggers_.push_back(Trigger{id, from, to, std::move(condition)});
  return id;
}

StorageId StaticModel::add_storage(std::optional<MachineId> owner, std::string name,
                                   std::optional<Thing> initial) {
  require_mutable();
  if (name.empty()) throw ModelError(ErrorCode::EmptyName, "storage name must not be empty");
  if (owner && owner->index >= machines_.size())
    throw ModelError(ErrorCode::UnknownMachine, "unknown owner machine");
  if (owner) {
    for (StorageId sid : machines_[owner->index].storages)
      if (storages_[sid.index].name == name)
        throw ModelError(ErrorCode::DuplicateStorageName,
                         "storage `" + name + "` already exists in `" +
                             machine_path(*owner) + "`");
  } else {
    for (const Storage& s : storages_)
      if (!s.owner && s.name == name)
        throw ModelError(ErrorCode::DuplicateStorageName,
                         "model-level storage `" + name + "` already exists");
  }
  StorageId id{static_cast<std::uint32_t>(storages_.size())};
  storages_.push_back(Storage{id, owner, std::move(name), std::move(initial)});
  if (owner) machines_[owner->index].storages.push_back(id);
  return id;
}

void StaticModel::bind_input(std::string name, StageId stage_id) {
  require_mutable();
  if (stage_id.index >= stages_.size())
    throw ModelError(ErrorCode::UnknownStage, "unknown input stage");
  StageKind k = stage(stage_id).kind;
  if (k != StageKind::Transfer && k != StageKind::Create)
    throw ModelError(ErrorCode::IllegalInputTarget,
                     "inputs may bind only to transfer or create stages; got " +
                         std::string(stage_kind_name(k)) + " at " + stage_path(stage_id));
  for (const InputPoint& p : inputs_)
    if (p.name == name)
      throw ModelError(ErrorCode::DuplicateInputName, "input `" + name + "` already bound");
  inputs_.push_back(InputPoint{std::move(name), stage_id});
}

std::vector<MachineId> StaticModel::roots() const {
  std::vector<MachineId> out;
  for (const Machine& m : machines_)
    if (!m.parent) out.push_back(m.id);
  return out;
}

std::string StaticModel::machine_path(MachineId id) const {
  std::vector<const Machine*> chain;
  std::optional<MachineId> cur = id;
  while (cur) {
    chain.push_back(&machine(*cur));
    cur = chain.back()->parent;
  }
  std::string out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (!out.empty()) out += '.';
    out += (*it)->name;
  }
  return out;
}

std::string StaticModel::stage_path(StageId id) const {
  const Stage& s = stage(id);
  return machine_path(s.owner) + "." + stage_kind_name(s.kind);
}

std::string StaticModel::storage_path(StorageId id) const {
  const Storage& s = storage(id);
  if (!s.owner) return s.name;
  return machine_path(*s.owner) + "." + s.name;
}

std::string StaticModel::endpoint_path(const Endpoint& e) const {
  if (const StageId* s = std::get_if<StageId>(&e)) return stage_path(*s);
  return storage_path(std::get<StorageId>(e));
}

std::optional<MachineId> StaticModel::find_machine(const std::vector<std::string>& path) const {
  if (path.empty()) return std::nullopt;
  std::optional<MachineId> cur;
  for (const Machine& m : machines_)
    if (!m.parent && m.name == path.front()) cur = m.id;
  if (!cur) return std::nullopt;
  for (std::size_t i = 1; i < path.size(); ++i) {
    std::optional<MachineId> next;
    for (MachineId c : machine(*cur).children)
      if (machine(c).name == path[i]) next = c;
    if (!next) return std::nullopt;
    cur = next;
  }
  return cur;
}

std::optional<StageId> StaticModel::find_stage(MachineId m, StageKind kind) const {
  StageId id = machine(m).stage_by_kind[static_cast<std::size_t>(kind)];
  if (!id.valid()) return std::nullopt;
  return id;
}

std::optional<StorageId> StaticModel::find_storage_in(MachineId m, const std::string& name) const {
  for (StorageId sid : machine(m).storages)
    if (storage(sid).name == name) return sid;
  return std::nullopt;
}

std::optional<StorageId> StaticModel::find_model_storage(const std::string& name) const {
  for (const Storage& s : storages_)
    if (!s.owner && s.name == name) return s.id;
  return std::nullopt;
}

std::optional<StorageId> StaticModel::resolve_storage(std::optional<MachineId> scope,
                                                      const std::string& name) const {
  std::optional<MachineId> cur = scope;
  while (cur) {
    if (auto sid = find_storage_in(*cur, name)) return sid;
    cur = machine(*cur).parent;
  }
  return find_model_storage(name);
}

bool flow_legal_stage_pair(StageKind from, StageKind to, bool same_machine) {
  if (!same_machine) return from == StageKind::Transfer && to == StageKind::Transfer;
  switch (from) {
    case StageKind::Transfer: return to == StageKind::Receive;
    case StageKind::Receive: return to == StageKind::Process || to == StageKind::Release;
    case StageKind::Process: return to == StageKind::Release;
    case StageKind::Create: return to == StageKind::Process || to == StageKind::Release;
    case StageKind::Release: return to == StageKind::Transfer;
  }
  return false;
}

bool flow_legal_into_storage(StageKind from) {
  return from == StageKind::Create || from == StageKind::Process;
}

bool flow_legal_from_storage(StageKind to) {
  return to == StageKind::Process || to == StageKind::Release;
}

std::string flow_rule_name(StageKind from, StageKind to, bool same_machine) {
  std::string rule = "IllegalFlow(";
  rule += stage_kind_name(from);
  rule += " -> ";
  rule += stage_kind_name(to);
  rule += same_machine ? ", within machine)" : ", across machines)";
  return rule;
}

bool trigger_target_legal(StageKind target) {
  return target == StageKind::Create || target == StageKind::Process;
}

}  // namespace thingc
