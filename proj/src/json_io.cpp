#include "seqlab/json_io.hpp"

#include <sstream>

#include "seqlab/errors.hpp"

namespace seqlab {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const char* context) {
  const auto it = j.find(name);
  if (it == j.end()) {
    throw SchemaError(std::string("missing field '") + name + "' in " +
                      context);
  }
  return *it;
}

std::string string_field(const json& j, const char* name, const char* context) {
  const json& v = field(j, name, context);
  if (!v.is_string()) {
    throw SchemaError(std::string("field '") + name + "' in " + context +
                      " must be a string");
  }
  return v.get<std::string>();
}

Rational rational_field(const json& j, const char* name, const char* context) {
  try {
    return parse_rational(string_field(j, name, context));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("field '") + name + "' in " + context + ": " +
                      e.what());
  }
}

// Structural integers: JSON number or decimal string.
Integer integer_field(const json& j, const char* name, const char* context) {
  const json& v = field(j, name, context);
  if (v.is_number_integer()) return Integer(v.get<long long>());
  if (v.is_string()) {
    try {
      return parse_integer(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("field '") + name + "' in " + context +
                        ": " + e.what());
    }
  }
  throw SchemaError(std::string("field '") + name + "' in " + context +
                    " must be an integer or decimal string");
}

json integer_to_json(const Integer& n) {
  static const Integer kMaxPlain = (Integer(1) << 53);
  if (n >= -kMaxPlain && n <= kMaxPlain) return n.convert_to<long long>();
  return to_string(n);
}

}  // namespace

json op_to_json(const OpPtr& op) {
  return std::visit(
      [](const auto& node) -> json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ShiftNode>) {
          return json{{"kind", "shift"}, {"power", integer_to_json(node.power)}};
        } else if constexpr (std::is_same_v<T, DiffNode>) {
          return json{{"kind", "diff"}};
        } else if constexpr (std::is_same_v<T, CesaroNode>) {
          return json{{"kind", "cesaro"}};
        } else if constexpr (std::is_same_v<T, DilationNode>) {
          return json{{"kind", "dilation"}, {"m", integer_to_json(node.factor)}};
        } else if constexpr (std::is_same_v<T, ConvexNode>) {
          json terms = json::array();
          for (const auto& t : node.terms) {
            terms.push_back(
                json{{"weight", to_string(t.weight)}, {"op", op_to_json(t.op)}});
          }
          return json{{"kind", "convex"}, {"terms", std::move(terms)}};
        } else {
          json ops = json::array();
          for (const auto& o : node.ops) ops.push_back(op_to_json(o));
          return json{{"kind", "compose"}, {"ops", std::move(ops)}};
        }
      },
      op->node());
}

OpPtr op_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("operator description must be an object");
  const std::string kind = string_field(j, "kind", "operator");
  try {
    if (kind == "shift") return OperatorExpr::shift(integer_field(j, "power", "shift"));
    if (kind == "diff") return OperatorExpr::diff();
    if (kind == "cesaro") return OperatorExpr::cesaro();
    if (kind == "dilation") {
      return OperatorExpr::dilation(integer_field(j, "m", "dilation"));
    }
    if (kind == "convex") {
      const json& terms = field(j, "terms", "convex");
      if (!terms.is_array() || terms.empty()) {
        throw SchemaError("field 'terms' in convex must be a nonempty array");
      }
      std::vector<ConvexTerm> out;
      out.reserve(terms.size());
      for (const json& t : terms) {
        out.push_back(ConvexTerm{rational_field(t, "weight", "convex term"),
                                 op_from_json(field(t, "op", "convex term"))});
      }
      return OperatorExpr::convex(std::move(out));
    }
    if (kind == "compose") {
      const json& ops = field(j, "ops", "compose");
      if (!ops.is_array() || ops.empty()) {
        throw SchemaError("field 'ops' in compose must be a nonempty array");
      }
      std::vector<OpPtr> out;
      out.reserve(ops.size());
      for (const json& o : ops) out.push_back(op_from_json(o));
      return OperatorExpr::compose(std::move(out));
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("operator '") + kind + "': " + e.what());
  }
  throw SchemaError("unknown operator kind '" + kind + "'");
}

json seq_to_json(const SeqPtr& seq) {
  return std::visit(
      [](const auto& node) -> json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PrefixTailNode>) {
          json prefix = json::array();
          for (const auto& v : node.prefix) prefix.push_back(to_string(v));
          json tail;
          if (node.tail.kind == TailKind::constant) {
            tail = json{{"kind", "constant"},
                        {"value", to_string(node.tail.values.front())}};
          } else {
            json values = json::array();
            for (const auto& v : node.tail.values) values.push_back(to_string(v));
            tail = json{{"kind", "periodic"}, {"values", std::move(values)}};
          }
          return json{{"kind", "prefix_tail"},
                      {"prefix", std::move(prefix)},
                      {"tail", std::move(tail)}};
        } else if constexpr (std::is_same_v<T, IndicatorNode>) {
          json intervals = json::array();
          for (const auto& iv : node.intervals) {
            intervals.push_back(json::array({to_string(iv.lo), to_string(iv.hi)}));
          }
          return json{{"kind", "indicator"}, {"intervals", std::move(intervals)}};
        } else if constexpr (std::is_same_v<T, GeometricNode>) {
          return json{{"kind", "geometric_indicator"},
                      {"a", to_string(node.a)},
                      {"b", to_string(node.b)},
                      {"ratio", integer_to_json(node.ratio)},
                      {"start", node.start_exp}};
        } else if constexpr (std::is_same_v<T, AppliedNode>) {
          return json{{"kind", "apply"},
                      {"op", op_to_json(node.op)},
                      {"seq", seq_to_json(node.arg)}};
        } else {
          const char* name = nullptr;
          switch (node.kind) {
            case PointwiseKind::add: name = "add"; break;
            case PointwiseKind::sub: name = "sub"; break;
            case PointwiseKind::mul: name = "mul"; break;
            case PointwiseKind::scale: name = "scale"; break;
            case PointwiseKind::affine: name = "affine"; break;
          }
          json args = json::array();
          for (const auto& a : node.args) args.push_back(seq_to_json(a));
          json out{{"kind", "pointwise"}, {"op", name}, {"args", std::move(args)}};
          if (node.kind == PointwiseKind::scale ||
              node.kind == PointwiseKind::affine) {
            out["c"] = to_string(node.c);
          }
          if (node.kind == PointwiseKind::affine) out["d"] = to_string(node.d);
          return out;
        }
      },
      seq->node());
}

SeqPtr seq_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("sequence description must be an object");
  const std::string kind = string_field(j, "kind", "sequence");
  try {
    if (kind == "prefix_tail") {
      const json& prefix = field(j, "prefix", "prefix_tail");
      if (!prefix.is_array()) {
        throw SchemaError("field 'prefix' in prefix_tail must be an array");
      }
      std::vector<Rational> values;
      values.reserve(prefix.size());
      for (const json& v : prefix) {
        if (!v.is_string()) {
          throw SchemaError("entries of 'prefix' must be rational strings");
        }
        values.push_back(parse_rational(v.get<std::string>()));
      }
      const json& tail = field(j, "tail", "prefix_tail");
      const std::string tail_kind = string_field(tail, "kind", "tail");
      if (tail_kind == "constant") {
        return SequenceExpr::prefix_tail(
            std::move(values),
            TailSpec::constant(rational_field(tail, "value", "tail")));
      }
      if (tail_kind == "periodic") {
        const json& tv = field(tail, "values", "tail");
        if (!tv.is_array() || tv.empty()) {
          throw SchemaError("field 'values' in tail must be a nonempty array");
        }
        std::vector<Rational> tail_values;
        tail_values.reserve(tv.size());
        for (const json& v : tv) {
          if (!v.is_string()) {
            throw SchemaError("entries of tail 'values' must be rational strings");
          }
          tail_values.push_back(parse_rational(v.get<std::string>()));
        }
        return SequenceExpr::prefix_tail(std::move(values),
                                         TailSpec::periodic(std::move(tail_values)));
      }
      throw SchemaError("unknown tail kind '" + tail_kind + "'");
    }
    if (kind == "indicator") {
      const json& intervals = field(j, "intervals", "indicator");
      if (!intervals.is_array()) {
        throw SchemaError("field 'intervals' in indicator must be an array");
      }
      std::vector<IntInterval> out;
      out.reserve(intervals.size());
      for (const json& iv : intervals) {
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_string() ||
            !iv[1].is_string()) {
          throw SchemaError(
              "entries of 'intervals' must be [\"lo\",\"hi\"] string pairs");
        }
        out.push_back(IntInterval{parse_integer(iv[0].get<std::string>()),
                                  parse_integer(iv[1].get<std::string>())});
      }
      return SequenceExpr::indicator(std::move(out));
    }
    if (kind == "geometric_indicator") {
      const Integer start = integer_field(j, "start", "geometric_indicator");
      if (start < 0 || start > 1'000'000) {
        throw SchemaError("field 'start' in geometric_indicator out of range");
      }
      return SequenceExpr::geometric_indicator(
          rational_field(j, "a", "geometric_indicator"),
          rational_field(j, "b", "geometric_indicator"),
          integer_field(j, "ratio", "geometric_indicator"),
          start.convert_to<unsigned long>());
    }
    if (kind == "apply") {
      return SequenceExpr::applied(op_from_json(field(j, "op", "apply")),
                                   seq_from_json(field(j, "seq", "apply")));
    }
    if (kind == "pointwise") {
      const std::string op = string_field(j, "op", "pointwise");
      const json& args = field(j, "args", "pointwise");
      if (!args.is_array() || args.empty()) {
        throw SchemaError("field 'args' in pointwise must be a nonempty array");
      }
      std::vector<SeqPtr> parsed;
      parsed.reserve(args.size());
      for (const json& a : args) parsed.push_back(seq_from_json(a));
      if (op == "add") return SequenceExpr::add(std::move(parsed));
      if (op == "mul") return SequenceExpr::mul(std::move(parsed));
      if (op == "sub") {
        if (parsed.size() != 2) {
          throw SchemaError("pointwise 'sub' needs exactly two args");
        }
        return SequenceExpr::sub(parsed[0], parsed[1]);
      }
      if (op == "scale") {
        if (parsed.size() != 1) {
          throw SchemaError("pointwise 'scale' needs exactly one arg");
        }
        return SequenceExpr::scale(rational_field(j, "c", "pointwise scale"),
                                   parsed[0]);
      }
      if (op == "affine") {
        if (parsed.size() != 1) {
          throw SchemaError("pointwise 'affine' needs exactly one arg");
        }
        return SequenceExpr::affine(rational_field(j, "c", "pointwise affine"),
                                    rational_field(j, "d", "pointwise affine"),
                                    parsed[0]);
      }
      throw SchemaError("unknown pointwise op '" + op + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("sequence '") + kind + "': " + e.what());
  }
  throw SchemaError("unknown sequence kind '" + kind + "'");
}

json to_json(const WindowStats& stats) {
  return json{{"n", stats.n},
              {"supSum", to_string(stats.sup_sum)},
              {"infSum", to_string(stats.inf_sum)},
              {"supWitness", to_string(stats.sup_witness)},
              {"infWitness", to_string(stats.inf_witness)},
              {"exact", stats.exact},
              {"scanHorizon", to_string(stats.scan_horizon)}};
}

json to_json(const BoundsEnclosure& enclosure) {
  json per_n = json::array();
  for (const auto& st : enclosure.per_n) per_n.push_back(to_json(st));
  return json{{"qLower", to_string(enclosure.q_lower)},
              {"pUpper", to_string(enclosure.p_upper)},
              {"nUsed", enclosure.n_used},
              {"exact", enclosure.exact},
              {"gapUpper", to_string(enclosure.gap_upper)},
              {"perN", std::move(per_n)}};
}

json to_json(const LorentzReport& report) {
  json table = json::array();
  for (const auto& row : report.table) {
    table.push_back(json{{"n", row.n},
                         {"supAvg", to_string(row.sup_avg)},
                         {"infAvg", to_string(row.inf_avg)},
                         {"D", to_string(row.gap)},
                         {"exact", row.exact}});
  }
  json verdict;
  switch (report.verdict.kind) {
    case LorentzVerdictKind::almost_convergent:
      verdict = json{{"kind", "almost_convergent"},
                     {"value", to_string(report.verdict.value)}};
      break;
    case LorentzVerdictKind::not_almost_convergent:
      verdict = json{{"kind", "not_almost_convergent"},
                     {"gapLower", to_string(report.verdict.gap_lower)}};
      break;
    case LorentzVerdictKind::inconclusive:
      verdict = json{{"kind", "inconclusive"}};
      break;
  }
  return json{{"table", std::move(table)},
              {"verdict", std::move(verdict)},
              {"exact", report.exact},
              {"tol", to_string(report.tol)},
              {"decayedBelowTol", report.decayed_below_tol}};
}

json to_json(const ZetaValue& value) {
  return json{{"n", value.n},
              {"value", value.value},
              {"truncationBound", value.truncation_bound},
              {"termsUsed", value.terms_used}};
}

namespace {

void csv_rows(std::ostringstream& out, unsigned long n, const Rational& sup_avg,
              const Rational& inf_avg) {
  out << n << ',' << to_string(sup_avg) << ',' << to_string(inf_avg) << ','
      << to_string(sup_avg - inf_avg) << '\n';
}

}  // namespace

std::string enclosure_csv(const BoundsEnclosure& enclosure) {
  std::ostringstream out;
  out << kCsvHeader << '\n' << "n,supAvg,infAvg,D\n";
  for (const auto& st : enclosure.per_n) {
    csv_rows(out, st.n, st.sup_sum / Rational(st.n), st.inf_sum / Rational(st.n));
  }
  return out.str();
}

std::string lorentz_csv(const LorentzReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n' << "n,supAvg,infAvg,D\n";
  for (const auto& row : report.table) {
    csv_rows(out, row.n, row.sup_avg, row.inf_avg);
  }
  return out.str();
}

}  // namespace seqlab
