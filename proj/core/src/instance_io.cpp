#include "pathmarket/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pathmarket/error.hpp"

namespace pm {

namespace {

using ojson = nlohmann::ordered_json;

// Records every numeric token of the document, in document order, as an exact
// rational. Ordered-json DOM traversal then visits numbers in the same order.
struct NumberTape : nlohmann::json_sax<ojson> {
  std::vector<Rat> tape;
  bool ok = true;

  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t v) override {
    tape.push_back(Rat(v));
    return true;
  }
  bool number_unsigned(number_unsigned_t v) override {
    if (v > static_cast<number_unsigned_t>(std::numeric_limits<std::int64_t>::max())) return false;
    tape.push_back(Rat(static_cast<std::int64_t>(v)));
    return true;
  }
  bool number_float(number_float_t, const string_t& raw) override {
    tape.push_back(Rat::from_decimal(raw));
    return true;
  }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }
  bool start_object(std::size_t) override { return true; }
  bool key(string_t&) override { return true; }
  bool end_object() override { return true; }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    ok = false;
    message = ex.what();
    return false;
  }
  std::string message;
};

// Cursor over the tape; consumed while walking the DOM in stored order.
struct ExactCursor {
  const std::vector<Rat>* tape;
  size_t next = 0;

  void skip(const ojson& node) {
    if (node.is_number()) {
      ++next;
    } else if (node.is_array()) {
      for (const auto& c : node) skip(c);
    } else if (node.is_object()) {
      for (const auto& [k, c] : node.items()) skip(c);
    }
  }
  Rat take(const ojson& node) {
    if (!node.is_number()) fail(ErrorKind::invalid_input, "expected a number in instance JSON");
    return (*tape)[next++];
  }
};

const ojson& require(const ojson& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorKind::invalid_input, std::string("instance JSON missing key: ") + key);
  return *it;
}

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Instance parse_instance(const std::string& text) {
  NumberTape tape;
  if (!ojson::sax_parse(text, &tape) || !tape.ok) {
    fail(ErrorKind::invalid_input, "instance JSON parse error: " + tape.message);
  }
  ojson doc = ojson::parse(text);
  if (!doc.is_object()) fail(ErrorKind::invalid_input, "instance JSON root must be an object");

  ExactCursor cur{&tape.tape};
  Instance inst;

  // Topology is fixed up front; job bundle parsing depends on it even when
  // the buyers key precedes it in the document.
  {
    const auto& node = require(doc, "topology");
    if (node.contains("line")) {
      inst.topology = LineTopology{node["line"].get<int>()};
    } else if (node.contains("tree")) {
      TreeTopology topo;
      for (const auto& p : require(node["tree"], "parents")) topo.parents.push_back(p.get<int>());
      inst.topology = std::move(topo);
    } else {
      fail(ErrorKind::invalid_input, "topology must be {\"line\": n} or {\"tree\": {...}}");
    }
  }

  // Fields must be consumed in document order for the tape to line up.
  for (const auto& [key, node] : doc.items()) {
    if (key == "topology") {
      cur.skip(node);
    } else if (key == "items") {
      for (const auto& jitem : node) {
        Item item;
        bool has_capacity = false;
        // Walk keys in stored order so the tape stays aligned.
        for (const auto& [ikey, child] : jitem.items()) {
          if (ikey == "capacity") {
            item.capacity = child.get<int>();
            has_capacity = true;
            cur.take(child);
          } else if (ikey == "costs") {
            for (const auto& c : child) {
              item.costs.push_back(c.get<double>());
              item.costs_exact.push_back(cur.take(c));
            }
          } else {
            cur.skip(child);
          }
        }
        if (!has_capacity) fail(ErrorKind::invalid_input, "item missing capacity");
        inst.items.push_back(std::move(item));
      }
    } else if (key == "buyers") {
      for (const auto& jbuyer : node) {
        Buyer buyer;
        int b = inst.buyer_count();
        for (const auto& [bkey, jscenarios] : jbuyer.items()) {
          if (bkey != "scenarios") {
            cur.skip(jscenarios);
            continue;
          }
          int s = 0;
          for (const auto& jsc : jscenarios) {
            Scenario sc;
            bool has_prob = false;
            for (const auto& [skey, child] : jsc.items()) {
              if (skey == "prob") {
                sc.prob = child.get<double>();
                sc.prob_exact = cur.take(child);
                has_prob = true;
              } else if (skey == "jobs") {
                for (const auto& jjob : child) {
                  Job job;
                  job.id = inst.job_count();
                  job.buyer = b;
                  job.scenario = s;
                  bool has_bundle = false, has_value = false;
                  for (const auto& [jkey, jchild] : jjob.items()) {
                    if (jkey == "bundle") {
                      if (!jchild.is_array() || jchild.empty()) {
                        fail(ErrorKind::invalid_input, "job bundle must be a nonempty array");
                      }
                      if (inst.is_line()) {
                        if (jchild.size() != 2) fail(ErrorKind::invalid_input, "line bundle must be [first, last]");
                        job.bundle = IntervalBundle{jchild[0].get<int>(), jchild[1].get<int>()};
                      } else {
                        PathBundle pb;
                        for (const auto& e : jchild) pb.edges.push_back(e.get<int>());
                        job.bundle = std::move(pb);
                      }
                      has_bundle = true;
                      cur.skip(jchild);
                    } else if (jkey == "value") {
                      job.value = jchild.get<double>();
                      job.value_exact = cur.take(jchild);
                      has_value = true;
                    } else {
                      cur.skip(jchild);
                    }
                  }
                  if (!has_bundle || !has_value) fail(ErrorKind::invalid_input, "job missing bundle or value");
                  sc.jobs.push_back(job.id);
                  inst.jobs.push_back(std::move(job));
                }
              } else {
                cur.skip(child);
              }
            }
            if (!has_prob) fail(ErrorKind::invalid_input, "scenario missing prob");
            buyer.scenarios.push_back(std::move(sc));
            ++s;
          }
        }
        inst.buyers.push_back(std::move(buyer));
      }
    } else {
      cur.skip(node);
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const Instance& inst) {
  // Doubles are written in shortest round-trip form via raw emission, keeping
  // reload exact for every value we produce.
  std::ostringstream out;
  out << "{\n  \"topology\": ";
  if (inst.is_line()) {
    out << "{\"line\": " << std::get<LineTopology>(inst.topology).items << "},\n";
  } else {
    out << "{\"tree\": {\"parents\": [";
    const auto& ps = std::get<TreeTopology>(inst.topology).parents;
    for (size_t i = 0; i < ps.size(); ++i) out << (i ? ", " : "") << ps[i];
    out << "]}},\n";
  }
  out << "  \"items\": [\n";
  for (int t = 0; t < inst.item_count(); ++t) {
    const auto& item = inst.items[t];
    out << "    {\"capacity\": " << item.capacity;
    if (!item.costs.empty()) {
      out << ", \"costs\": [";
      for (size_t r = 0; r < item.costs.size(); ++r) out << (r ? ", " : "") << shortest(item.costs[r]);
      out << "]";
    }
    out << "}" << (t + 1 < inst.item_count() ? "," : "") << "\n";
  }
  out << "  ],\n  \"buyers\": [\n";
  for (int b = 0; b < inst.buyer_count(); ++b) {
    const auto& buyer = inst.buyers[b];
    out << "    {\"scenarios\": [\n";
    for (size_t s = 0; s < buyer.scenarios.size(); ++s) {
      const auto& sc = buyer.scenarios[s];
      out << "      {\"prob\": " << shortest(sc.prob) << ", \"jobs\": [\n";
      for (size_t q = 0; q < sc.jobs.size(); ++q) {
        const auto& job = inst.jobs[sc.jobs[q]];
        out << "        {\"bundle\": [";
        if (const auto* iv = std::get_if<IntervalBundle>(&job.bundle)) {
          out << iv->first << ", " << iv->last;
        } else {
          const auto& es = std::get<PathBundle>(job.bundle).edges;
          for (size_t i = 0; i < es.size(); ++i) out << (i ? ", " : "") << es[i];
        }
        out << "], \"value\": " << shortest(job.value) << "}";
        out << (q + 1 < sc.jobs.size() ? "," : "") << "\n";
      }
      out << "      ]}" << (s + 1 < buyer.scenarios.size() ? "," : "") << "\n";
    }
    out << "    ]}" << (b + 1 < inst.buyer_count() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::invalid_input, "cannot open output file: " + path);
  out << serialize_instance(inst);
}

}  // namespace pm
