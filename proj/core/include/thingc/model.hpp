#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "thingc/expr.hpp"
#include "thingc/thing.hpp"

namespace thingc {

/// The five generic actions. There are no others anywhere in the system.
enum class StageKind : std::uint8_t { Create, Process, Release, Transfer, Receive };

inline constexpr std::array<StageKind, 5> kAllStageKinds = {
    StageKind::Create, StageKind::Process, StageKind::Release,
    StageKind::Transfer, StageKind::Receive};

const char* stage_kind_name(StageKind k);
std::optional<StageKind> stage_kind_from(const std::string& word);

struct MachineId {
  std::uint32_t index = UINT32_MAX;
  bool valid() const { return index != UINT32_MAX; }
  auto operator<=>(const MachineId&) const = default;
};
struct StageId {
  std::uint32_t index = UINT32_MAX;
  bool valid() const { return index != UINT32_MAX; }
  auto operator<=>(const StageId&) const = default;
};
struct FlowId {
  std::uint32_t index = UINT32_MAX;
  auto operator<=>(const FlowId&) const = default;
};
struct TriggerId {
  std::uint32_t index = UINT32_MAX;
  auto operator<=>(const TriggerId&) const = default;
};
struct StorageId {
  std::uint32_t index = UINT32_MAX;
  bool valid() const { return index != UINT32_MAX; }
  auto operator<=>(const StorageId&) const = default;
};

/// A flow endpoint: a stage or a storage cell.
using Endpoint = std::variant<StageId, StorageId>;

/// Optional executable decoration of a stage: guard, delay, actions and the
/// literal things a Create stage emits.
struct Annotation {
  ExprPtr guard;                 // `when`, boolean
  ExprPtr delay;                 // `after`, non-negative time units
  std::vector<Action> actions;   // `do`, applied in order
  std::vector<Thing> emit;       // Create stages only
  bool empty() const { return !guard && !delay && actions.empty() && emit.empty(); }
  bool equals(const Annotation& other) const;
};

struct Stage {
  StageId id;
  MachineId owner;
  StageKind kind = StageKind::Create;
  Annotation annotation;
};

struct Machine {
  MachineId id;
  std::string name;
  std::optional<MachineId> parent;
  std::array<StageId, 5> stage_by_kind{};  // at most one stage per kind
  std::vector<MachineId> children;
  std::vector<StorageId> storages;
};

struct Flow {
  FlowId id;
  Endpoint from;
  Endpoint to;
};

struct Trigger {
  TriggerId id;
  StageId from;
  StageId to;  // kind must be Create or Process
  ExprPtr condition;
};

struct Storage {
  StorageId id;
  std::optional<MachineId> owner;  // nullopt: model-level cell
  std::string name;
  std::optional<Thing> initial;
};

/// A named binding point where external things may enter the model.
struct InputPoint {
  std::string name;  // machine path of the bound stage
  StageId stage;     // Transfer (stream) or Create (whole list as one thing)
};

enum class ErrorCode {
  EmptyName,
  UnknownMachine,
  UnknownStage,
  UnknownStorage,
  DuplicateName,
  DuplicateStageKind,
  DuplicateStorageName,
  DuplicateInputName,
  EmitOnNonCreate,
  IllegalFlow,
  IllegalTriggerTarget,
  IllegalInputTarget,
  FrozenModel,
  InvalidSpec,
};

const char* error_code_name(ErrorCode c);

struct ModelError : std::runtime_error {
  ErrorCode code;
  ModelError(ErrorCode c, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(c)) + ": " + msg), code(c) {}
};

/// The atemporal static model: machines, stages, flows, triggers, storages.
/// Collections keep insertion order; simulation and rendering depend on it.
class StaticModel {
 public:
  explicit StaticModel(std::string name);

  const std::string& name() const { return name_; }

  MachineId add_machine(std::optional<MachineId> parent, std::string name);
  StageId add_stage(MachineId machine, StageKind kind, Annotation annotation = {});
  FlowId add_flow(Endpoint from, Endpoint to);
  TriggerId add_trigger(StageId from, StageId to, ExprPtr condition = nullptr);
  StorageId add_storage(std::optional<MachineId> owner, std::string name,
                        std::optional<Thing> initial = std::nullopt);
  void bind_input(std::string name, StageId stage);

  // Bypass the legality check but not existence checks. For building
  // deliberately ill-formed models in validator tests and tooling.
  FlowId insert_flow_unchecked(Endpoint from, Endpoint to);
  TriggerId insert_trigger_unchecked(StageId from, StageId to, ExprPtr condition = nullptr);

  /// After freezing, mutation throws FrozenModel; reads are lock-free safe.
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  const std::vector<Machine>& machines() const { return machines_; }
  const std::vector<Stage>& stages() const { return stages_; }
  const std::vector<Flow>& flows() const { return flows_; }
  const std::vector<Trigger>& triggers() const { return triggers_; }
  const std::vector<Storage>& storages() const { return storages_; }
  const std::vector<InputPoint>& inputs() const { return inputs_; }

  const Machine& machine(MachineId id) const { return machines_.at(id.index); }
  const Stage& stage(StageId id) const { return stages_.at(id.index); }
  const Flow& flow(FlowId id) const { return flows_.at(id.index); }
  const Trigger& trigger(TriggerId id) const { return triggers_.at(id.index); }
  const Storage& storage(StorageId id) const { return storages_.at(id.index); }

  std::vector<MachineId> roots() const;

  /// Dotted path of a machine from its root, e.g. "customer.order".
  std::string machine_path(MachineId id) const;
  /// "customer.order.create"
  std::string stage_path(StageId id) const;
  /// "system.sold", or the bare name for model-level storages.
  std::string storage_path(StorageId id) const;
  std::string endpoint_path(const Endpoint& e) const;

  std::optional<MachineId> find_machine(const std::vector<std::string>& path) const;
  std::optional<StageId> find_stage(MachineId machine, StageKind kind) const;
  std::optional<StorageId> find_storage_in(MachineId machine, const std::string& name) const;
  std::optional<StorageId> find_model_storage(const std::string& name) const;

  /// Name resolution for expressions: the machine's own cells, then its
  /// ancestors', then model-level cells.
  std::optional<StorageId> resolve_storage(std::optional<MachineId> scope,
                                           const std::string& name) const;

  bool same_machine(StageId a, StageId b) const {
    return stage(a).owner == stage(b).owner;
  }

 private:
  void require_mutable() const;

  std::string name_;
  bool frozen_ = false;
  std::vector<Machine> machines_;
  std::vector<Stage> stages_;
  std::vector<Flow> flows_;
  std::vector<Trigger> triggers_;
  std::vector<Storage> storages_;
  std::vector<InputPoint> inputs_;
};

/// The fixed flow-legality relation.
/// Between stages of one machine: Transfer->Receive, Receive->Process,
/// Receive->Release, Process->Release, Create->Process, Create->Release,
/// Release->Transfer. Between machines: Transfer->Transfer only.
/// Storage endpoints (either side of the machine boundary): Create->Storage,
/// Process->Storage, Storage->Process, Storage->Release.
bool flow_legal_stage_pair(StageKind from, StageKind to, bool same_machine);
bool flow_legal_into_storage(StageKind from);
bool flow_legal_from_storage(StageKind to);

/// Names the rule violated by an illegal pair, for diagnostics.
std::string flow_rule_name(StageKind from, StageKind to, bool same_machine);

bool trigger_target_legal(StageKind target);

}  // namespace thingc
