#include "thingc/printer.hpp"

#include <algorithm>
#include <sstream>

namespace thingc {

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 4;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul:
        case BinaryOp::Div:
        case BinaryOp::Mod: return 6;
      }
      return 0;
    case Expr::Kind::Unary:
      return e.unary_op() == UnaryOp::Not ? 3 : 7;
    default:
      return 8;  // atoms and postfix
  }
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool needs_parens_on_equal,
                 std::string& out) {
  int child_prec = precedence(child);
  bool parens = child_prec < parent_prec || (child_prec == parent_prec && needs_parens_on_equal);
  if (parens) out += '(';
  print_into(child, out);
  if (parens) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
      out += e.literal_value().to_text();
      return;
    case Expr::Kind::It:
      out += "it";
      return;
    case Expr::Kind::Now:
      out += "now";
      return;
    case Expr::Kind::Name:
      out += e.name_text();
      return;
    case Expr::Kind::Index:
      print_child(*e.lhs(), 8, false, out);
      out += '[';
      print_into(*e.rhs(), out);
      out += ']';
      return;
    case Expr::Kind::Len:
      out += "len(";
      print_into(*e.lhs(), out);
      out += ')';
      return;
    case Expr::Kind::Unary: {
      int prec = precedence(e);
      if (e.unary_op() == UnaryOp::Not) {
        out += "not ";
        print_child(*e.lhs(), prec, false, out);
      } else {
        out += '-';
        // Parenthesize a nested negation or a negative literal for clarity.
        bool wrap = e.lhs()->kind() == Expr::Kind::Unary &&
                    e.lhs()->unary_op() == UnaryOp::Neg;
        if (wrap) out += '(';
        print_child(*e.lhs(), prec, false, out);
        if (wrap) out += ')';
      }
      return;
    }
    case Expr::Kind::Binary: {
      int prec = precedence(e);
      // All binary operators here are left-associative; comparisons do not
      // chain, so an equal-precedence right child always gets parentheses.
      print_child(*e.lhs(), prec, false, out);
      out += ' ';
      out += binary_op_token(e.binary_op());
      out += ' ';
      print_child(*e.rhs(), prec, true, out);
      return;
    }
  }
}

void print_action(const Action& a, std::string& out) {
  switch (a.kind) {
    case Action::Kind::Transform:
      print_into(*a.expr, out);
      return;
    case Action::Kind::Assign:
      out += a.target;
      out += " := ";
      print_into(*a.expr, out);
      return;
    case Action::Kind::Verdict:
      out += a.verdict == Verdict::Accepted ? "verdict(accepted)" : "verdict(rejected)";
      return;
  }
}

void print_annotation_into(const Annotation& ann, std::string& out) {
  if (ann.guard) {
    out += " when ";
    print_into(*ann.guard, out);
  }
  if (ann.delay) {
    out += " after ";
    print_into(*ann.delay, out);
  }
  if (!ann.actions.empty()) {
    out += " do ";
    for (std::size_t i = 0; i < ann.actions.size(); ++i) {
      if (i > 0) out += ", ";
      print_action(ann.actions[i], out);
    }
  }
  if (!ann.emit.empty()) {
    out += " emit [";
    for (std::size_t i = 0; i < ann.emit.size(); ++i) {
      if (i > 0) out += ", ";
      out += ann.emit[i].to_text();
    }
    out += ']';
  }
}

class ModelPrinter {
 public:
  explicit ModelPrinter(const ModelDocument& doc) : doc_(doc), model_(doc.model) {}

  std::string print() {
    out_ << "model " << model_.name() << " {\n";
    for (const Storage& s : model_.storages())
      if (!s.owner) print_storage(s, 1);
    for (MachineId root : model_.roots()) print_machine(root, 1);
    for (const Flow& f : model_.flows()) {
      indent(1);
      out_ << "flow " << model_.endpoint_path(f.from) << " -> "
           << model_.endpoint_path(f.to) << ";\n";
    }
    for (const Trigger& t : model_.triggers()) {
      indent(1);
      out_ << "trigger " << model_.stage_path(t.from) << " -> "
           << model_.stage_path(t.to);
      if (t.condition) out_ << " when " << print_expr(*t.condition);
      out_ << ";\n";
    }
    out_ << "}\n";

    for (const EventDef& e : doc_.events) {
      out_ << "event " << e.name;
      if (e.label) out_ << " \"" << escape(*e.label) << "\"";
      out_ << " over { ";
      // Region membership is a set; paths give it an id-independent order.
      std::vector<std::string> elements;
      for (StageId s : e.region.stages) elements.push_back(model_.stage_path(s));
      for (StorageId s : e.region.storages) elements.push_back(model_.storage_path(s));
      std::sort(elements.begin(), elements.end());
      for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i > 0) out_ << ", ";
        out_ << elements[i];
      }
      out_ << " }";
      if (e.duration != 0) out_ << " duration " << e.duration;
      out_ << ";\n";
    }
    if (doc_.behavior) {
      out_ << "behavior {\n";
      for (const auto& [a, b] : doc_.behavior->edges) {
        indent(1);
        out_ << a << " -> " << b << ";\n";
      }
      for (const std::string& r : doc_.behavior->repeats) {
        indent(1);
        out_ << "repeat " << r << ";\n";
      }
      out_ << "}\n";
    }
    for (const InputBinding& in : doc_.inputs) {
      out_ << "input " << model_.stage_path(in.stage) << " = [";
      for (std::size_t i = 0; i < in.things.size(); ++i) {
        if (i > 0) out_ << ", ";
        out_ << in.things[i].to_text();
      }
      out_ << "];\n";
    }
    return out_.str();
  }

 private:
  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out_ << "  ";
  }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  }

  void print_storage(const Storage& s, int depth) {
    indent(depth);
    out_ << "storage " << s.name;
    if (s.initial) out_ << " = " << s.initial->to_text();
    out_ << ";\n";
  }

  void print_machine(MachineId id, int depth) {
    const Machine& m = model_.machine(id);
    indent(depth);
    out_ << "machine " << m.name << " {\n";
    for (StorageId sid : m.storages) print_storage(model_.storage(sid), depth + 1);
    // Stages print in declaration order.
    std::vector<const Stage*> stages;
    for (const Stage& s : model_.stages())
      if (s.owner == id) stages.push_back(&s);
    for (const Stage* s : stages) {
      indent(depth + 1);
      out_ << stage_kind_name(s->kind);
      std::string ann;
      print_annotation_into(s->annotation, ann);
      out_ << ann << ";\n";
    }
    for (MachineId child : m.children) print_machine(child, depth + 1);
    indent(depth);
    out_ << "}\n";
  }

  const ModelDocument& doc_;
  const StaticModel& model_;
  std::ostringstream out_;
};

// Canonical per-element keys used by both equality relations.

std::string flow_key(const StaticModel& m, const Flow& f) {
  return m.endpoint_path(f.from) + " -> " + m.endpoint_path(f.to);
}

std::string trigger_key(const StaticModel& m, const Trigger& t) {
  std::string key = m.stage_path(t.from) + " -> " + m.stage_path(t.to);
  if (t.condition) key += " when " + print_expr(*t.condition);
  return key;
}

std::string stage_key(const StaticModel& m, const Stage& s) {
  std::string key = m.stage_path(s.id);
  std::string ann;
  print_annotation_into(s.annotation, ann);
  return key + ann;
}

std::string storage_key(const StaticModel& m, const Storage& s) {
  std::string key = m.storage_path(s.id);
  if (s.initial) key += " = " + s.initial->to_text();
  return key;
}

std::string event_key(const StaticModel& m, const EventDef& e) {
  std::string key = e.name;
  if (e.label) key += " \"" + *e.label + "\"";
  key += " over {";
  std::vector<std::string> parts;
  for (StageId s : e.region.stages) parts.push_back(m.stage_path(s));
  for (StorageId s : e.region.storages) parts.push_back(m.storage_path(s));
  std::sort(parts.begin(), parts.end());
  for (const auto& p : parts) key += " " + p;
  key += " } duration " + std::to_string(e.duration);
  return key;
}

std::string input_key(const StaticModel& m, const InputBinding& b) {
  std::string key = m.stage_path(b.stage) + " = [";
  for (std::size_t i = 0; i < b.things.size(); ++i) {
    if (i > 0) key += ", ";
    key += b.things[i].to_text();
  }
  return key + "]";
}

template <typename T, typename KeyFn>
std::vector<std::string> keys_of(const std::vector<T>& items, KeyFn&& fn, bool sorted) {
  std::vector<std::string> keys;
  keys.reserve(items.size());
  for (const T& item : items) keys.push_back(fn(item));
  if (sorted) std::sort(keys.begin(), keys.end());
  return keys;
}

std::string signature(const ModelDocument& doc, bool sorted) {
  const StaticModel& m = doc.model;
  std::ostringstream out;
  out << "model " << m.name() << "\n";

  std::vector<std::string> machines;
  for (const Machine& mm : m.machines()) machines.push_back(m.machine_path(mm.id));
  if (sorted) std::sort(machines.begin(), machines.end());
  for (const auto& k : machines) out << "machine " << k << "\n";

  for (const auto& k :
       keys_of(m.stages(), [&](const Stage& s) { return stage_key(m, s); }, sorted))
    out << "stage " << k << "\n";
  for (const auto& k :
       keys_of(m.storages(), [&](const Storage& s) { return storage_key(m, s); }, sorted))
    out << "storage " << k << "\n";
  for (const auto& k : keys_of(m.flows(), [&](const Flow& f) { return flow_key(m, f); }, sorted))
    out << "flow " << k << "\n";
  for (const auto& k :
       keys_of(m.triggers(), [&](const Trigger& t) { return trigger_key(m, t); }, sorted))
    out << "trigger " << k << "\n";

  for (const auto& k :
       keys_of(doc.events, [&](const EventDef& e) { return event_key(m, e); }, sorted))
    out << "event " << k << "\n";
  if (doc.behavior) {
    auto edges = doc.behavior->edges;
    if (sorted) std::sort(edges.begin(), edges.end());
    for (const auto& [a, b] : edges) out << "edge " << a << " -> " << b << "\n";
    auto repeats = doc.behavior->repeats;
    if (sorted) std::sort(repeats.begin(), repeats.end());
    for (const auto& r : repeats) out << "repeat " << r << "\n";
  }
  for (const auto& k :
       keys_of(doc.inputs, [&](const InputBinding& b) { return input_key(m, b); }, sorted))
    out << "input " << k << "\n";
  return out.str();
}

}  // namespace

std::string print_model(const ModelDocument& doc) { return ModelPrinter(doc).print(); }

std::string print_expr(const Expr& expr) {
  std::string out;
  print_into(expr, out);
  return out;
}

std::string print_annotation(const Annotation& ann) {
  std::string out;
  print_annotation_into(ann, out);
  return out;
}

bool structurally_equal(const ModelDocument& a, const ModelDocument& b) {
  // The canonical text is itself the order-preserving structural key.
  return print_model(a) == print_model(b);
}

std::string canonical_signature(const ModelDocument& doc) {
  return signature(doc, /*sorted=*/true);
}

}  // namespace thingc
